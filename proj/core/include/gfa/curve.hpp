#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfa/config.hpp"

namespace gfa {

/// Latent access failure probability sampled at integer TTIs 1..Tmax, from
/// either engine. Simulated curves carry Wilson 95% CIs and the tracked
/// sample count; analytic curves carry the PMF truncation order used.
struct FailureCurve {
  Scheme scheme;
  std::string engine;  // "analytic" | "simulated"
  double tti_ms = 0.125;
  std::uint64_t config_hash = 0;
  int truncation_order = 0;

  std::vector<int> t_ttis;
  std::vector<double> p_fail;
  std::vector<double> ci_low;   // simulated only
  std::vector<double> ci_high;  // simulated only
  std::uint64_t n_samples = 0;

  double at(int t) const;  // throws std::out_of_range for unsampled T

  /// Columns: (t_ttis, t_ms, p_fail) for analytic curves and
  /// (t_ttis, t_ms, p_fail, ci_low, ci_high, n_samples) for simulated ones.
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// Numbers in CSV output carry 12 significant digits.
std::string format_sig(double v);

/// Wilson score interval for a binomial proportion at 95% confidence.
struct Interval {
  double low, high;
};
Interval wilson_ci(std::uint64_t failures, std::uint64_t n);

}  // namespace gfa
