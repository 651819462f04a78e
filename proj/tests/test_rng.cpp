#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gfa/rng.hpp"

using namespace gfa::rng;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 test suite.
  const auto zero = Philox4x32::round10({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  const auto ones = Philox4x32::round10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  const auto pi = Philox4x32::round10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
  Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same_ab = true, same_ac = true, same_ad = true;
  for (int i = 0; i < 256; ++i) {
    const auto va = a.next_u32();
    same_ab &= va == b.next_u32();
    same_ac &= va == c.next_u32();
    same_ad &= va == d.next_u32();
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
}

TEST_CASE("uniform and exponential moments") {
  Stream s(123, 0);
  const int n = 200000;
  double usum = 0.0, esum = 0.0, emax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    usum += u;
    const double e = s.exponential();
    CHECK(e >= 0.0);
    esum += e;
    emax = std::max(emax, e);
  }
  CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
  // Exp(1): mean 1, sd 1 -> 4 sigma of the sample mean
  CHECK(std::abs(esum / n - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::isfinite(emax));
}

TEST_CASE("poisson mean and variance across the chunking boundary") {
  Stream s(5, 1);
  for (double lambda : {3.0, 25.0, 300.0, 8800.0}) {
    const int n = lambda > 100 ? 2000 : 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(s.poisson(lambda));
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double mean_tol = 5.0 * std::sqrt(lambda / n);
    CHECK(std::abs(mean - lambda) < mean_tol);
    CHECK(var == doctest::Approx(lambda).epsilon(0.15));
  }
  CHECK(s.poisson(0.0) == 0);
}

TEST_CASE("uniform_int is bounded and roughly uniform") {
  Stream s(9, 2);
  std::vector<int> hist(7, 0);
  const int n = 140000;
  for (int i = 0; i < n; ++i) {
    const auto v = s.uniform_int(7);
    CHECK(v < 7u);
    ++hist[v];
  }
  for (int c : hist) CHECK(c == doctest::Approx(n / 7.0).epsilon(0.05));
}

TEST_CASE("disc points are inside and radially correct") {
  Stream s(77, 3);
  const double R = 11.28;
  double rsum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = s.disc_point(R);
    const double r = std::hypot(x, y);
    CHECK(r <= R);
    rsum += r;
  }
  // mean radius of a uniform disc point is 2R/3
  CHECK(rsum / n == doctest::Approx(2.0 * R / 3.0).epsilon(0.01));
}
