#include "gfa/curve.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gfa {

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double FailureCurve::at(int t) const {
  for (size_t i = 0; i < t_ttis.size(); ++i)
    if (t_ttis[i] == t) return p_fail[i];
  throw std::out_of_range("FailureCurve::at: T=" + std::to_string(t) + " not sampled");
}

void FailureCurve::write_csv(std::ostream& os) const {
  const bool sim = engine == "simulated";
  os << (sim ? "t_ttis,t_ms,p_fail,ci_low,ci_high,n_samples\n" : "t_ttis,t_ms,p_fail\n");
  for (size_t i = 0; i < t_ttis.size(); ++i) {
    os << t_ttis[i] << ',' << format_sig(t_ttis[i] * tti_ms) << ',' << format_sig(p_fail[i]);
    if (sim) {
      os << ',' << format_sig(ci_low[i]) << ',' << format_sig(ci_high[i]) << ','
         << n_samples;
    }
    os << '\n';
  }
}

std::string FailureCurve::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

Interval wilson_ci(std::uint64_t failures, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(failures) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double rad =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // at the boundary counts the interval must include the point estimate
  const double low = failures == 0 ? 0.0 : std::max(0.0, center - rad);
  const double high = failures == n ? 1.0 : std::min(1.0, center + rad);
  return {low, high};
}

}  // namespace gfa
