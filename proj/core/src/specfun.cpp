#include "gfa/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gfa::specfun {

namespace {
constexpr double kC = kVoronoiShape;

[[noreturn]] void throw_cap(double ratio) {
  std::ostringstream os;
  os << "load pmf truncation cap (" << kTruncationCap
     << ") reached at ratio=" << ratio << "; load is pathological";
  throw std::runtime_error(os.str());
}
}  // namespace

LoadPmf::LoadPmf(double ratio) : ratio_(ratio) {
  if (!(ratio >= 0.0)) throw std::invalid_argument("LoadPmf: ratio must be >= 0");
  log_ratio_ = std::log(ratio);  // -inf at 0, handled in operator()
  log_ratio_plus_c_ = std::log(ratio + kC);
}

double LoadPmf::operator()(int n) const {
  if (n < 0) return 0.0;
  if (ratio_ == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_p = (kC + 1.0) * std::log(kC) + std::lgamma(n + kC + 1.0) -
                       std::lgamma(kC + 1.0) - std::lgamma(n + 1.0) +
                       n * log_ratio_ - (n + kC + 1.0) * log_ratio_plus_c_;
  return std::exp(log_p);
}

int LoadPmf::truncation_order(double tail_eps) const {
  if (!(tail_eps > 0.0 && tail_eps < 1.0))
    throw std::invalid_argument("truncation_order: tail_eps must be in (0,1)");
  double sum = 0.0;
  for (int n = 0; n <= kTruncationCap; ++n) {
    sum += (*this)(n);
    if (1.0 - sum < tail_eps) return n;
  }
  throw_cap(ratio_);
}

double load_pmf(int n, double ratio) { return LoadPmf(ratio)(n); }

int truncation_order(double ratio, double tail_eps) {
  return LoadPmf(ratio).truncation_order(tail_eps);
}

namespace {

// Plain power series sum_{j} (a)_j (b)_j / (c)_j z^j / j!, |z| < 1.
double series_2f1(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < 1000000; ++j) {
    term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-15 * std::abs(sum)) return sum;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double hyp2f1_interference(int k, double alpha, double gamma_lin) {
  if (k < 1) throw std::invalid_argument("hyp2f1_interference: k must be >= 1");
  if (!(alpha > 2.0)) throw std::invalid_argument("hyp2f1_interference: alpha must be > 2");
  if (!(gamma_lin > 0.0)) {
    if (gamma_lin == 0.0) return 1.0;  // 2F1(a,b;c;0) = 1
    throw std::invalid_argument("hyp2f1_interference: gamma_lin must be > 0");
  }

  const double a = -2.0 / alpha;
  const double b = static_cast<double>(k);
  const double c = (alpha - 2.0) / alpha;
  const double z = -gamma_lin;

  double value;
  if (std::abs(z) < 1.0) {
    value = series_2f1(a, b, c, z);
  } else {
    // Pfaff transformation 2F1(a,b;c;z) = (1-z)^{-b} 2F1(b, c-a; c; z/(z-1)).
    // For z = -gamma < -1 the argument w = gamma/(1+gamma) lies in (0,1), and
    // with c - a = 1 every series term is positive, so no cancellation.
    const double w = gamma_lin / (1.0 + gamma_lin);
    value = std::pow(1.0 + gamma_lin, -b) * series_2f1(b, c - a, c, w);
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "hyp2f1_interference failed to converge (k=" << k << ", alpha=" << alpha
       << ", gamma=" << gamma_lin << ")";
    throw std::runtime_error(os.str());
  }
  return value;
}

}  // namespace gfa::specfun
