#pragma once

namespace gfa::specfun {

// Shape constant of the approximate PMF of the number of UEs in a PPP
// Voronoi cell.
inline constexpr double kVoronoiShape = 3.575;

inline constexpr double kDefaultTailEps = 1e-10;
inline constexpr int kTruncationCap = 10000;

/// Distribution of the number of co-pilot active UEs sharing the typical
/// cell, parameterized by the effective load ratio (thinned density over BS
/// density). Evaluated in log space; Gamma(n+c+1) overflows doubles near
/// n ~ 170.
class LoadPmf {
 public:
  explicit LoadPmf(double ratio);

  double ratio() const { return ratio_; }

  /// P(N = n), n >= 0. Exact 1 at n=0 when ratio == 0.
  double operator()(int n) const;

  /// Smallest N with 1 - sum_{n<=N} pmf(n) < tail_eps. Throws
  /// std::runtime_error naming the ratio if the cap is reached.
  int truncation_order(double tail_eps = kDefaultTailEps) const;

 private:
  double ratio_;
  double log_ratio_;        // log(ratio), -inf at 0
  double log_ratio_plus_c_;
};

double load_pmf(int n, double ratio);
int truncation_order(double ratio, double tail_eps = kDefaultTailEps);

/// Gauss hypergeometric 2F1(-2/alpha, k; (alpha-2)/alpha; -gamma_lin), the
/// interference exponent of the inter-cell Laplace transform under k
/// combined repetitions. gamma_lin > 0, alpha > 2, k >= 1.
double hyp2f1_interference(int k, double alpha, double gamma_lin);

}  // namespace gfa::specfun
