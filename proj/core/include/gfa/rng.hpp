#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace gfa::rng {

/// Philox4x32-10 counter-based generator (Salmon et al. constants). Each
/// (key, counter) pair maps to an independent 128-bit block, which is what
/// makes per-trial substreams and order-independent parallel reduction
/// possible: stream i is just counter-space partition i.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block round10(Block ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = kM0 * static_cast<std::uint64_t>(ctr[0]);
      const std::uint64_t p1 = kM1 * static_cast<std::uint64_t>(ctr[2]);
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// One substream of the master seed: key = seed, counter words 2..3 = stream
/// id, words 0..1 = running block index.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        hi_{static_cast<std::uint32_t>(stream_id),
            static_cast<std::uint32_t>(stream_id >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = Philox4x32::round10({static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32), hi_[0],
                                  hi_[1]},
                                 key_);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Exp(1) via inversion; -log1p(-u) keeps u = 0 finite.
  double exponential() { return -std::log1p(-uniform()); }

  /// Unbiased integer in [0, n), n >= 1 (rejection on the top range).
  std::uint32_t uniform_int(std::uint32_t n) {
    const std::uint32_t limit = (0xFFFFFFFFu / n) * n;
    std::uint32_t x;
    do {
      x = next_u32();
    } while (x >= limit);
    return x % n;
  }

  /// Exact Poisson by chunked Knuth multiplication (chunks keep exp(-lambda)
  /// well above double underflow).
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > kChunk) {
      total += poisson_knuth(kChunk);
      mean -= kChunk;
    }
    return total + poisson_knuth(mean);
  }

  /// Uniform point in a disc of the given radius centered at the origin.
  std::pair<double, double> disc_point(double radius) {
    const double r = radius * std::sqrt(uniform());
    const double th = 2.0 * kPi * uniform();
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  static constexpr double kChunk = 32.0;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  std::uint64_t poisson_knuth(double mean) {
    if (mean <= 0.0) return 0;
    const double floor_p = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > floor_p);
    return k - 1;
  }

  Philox4x32::Key key_;
  std::array<std::uint32_t, 2> hi_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buf_{};
  int pos_ = 4;
};

}  // namespace gfa::rng
