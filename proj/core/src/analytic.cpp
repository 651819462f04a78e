#include "gfa/analytic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "gfa/timing.hpp"

namespace gfa::analytic {

namespace {

bool is_prob(double p) { return p >= -1e-12 && p <= 1.0 + 1e-12; }

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Window success over k combined repetitions conditioned on N = n, with all
// interferer densities scaled by `ratio` (already includes A_m and, for the
// Proactive per-term factors, eta). The power level g scales the noise term
// only: signal and interference share the same level in lockstep rounds.
struct WindowSuccess {
  // coef[j-1] = (-1)^{j+1} C(k,j) exp(-j gamma s2/(g rho)) exp(-ratio_j (F(j)-1))
  std::vector<double> coef;
  double one_over_1p_gamma;

  WindowSuccess(int k, const ScenarioConfig& cfg, std::span<const double> ratios,
                double g) {
    const double gamma = cfg.gamma_th_lin();
    const double noise = cfg.noise_over_rho();
    one_over_1p_gamma = 1.0 / (1.0 + gamma);
    coef.resize(k);
    double binom = 1.0;  // C(k, j) built multiplicatively
    for (int j = 1; j <= k; ++j) {
      binom *= static_cast<double>(k - j + 1) / j;
      const double noise_factor = std::exp(-j * gamma * noise / g);
      if (noise_factor == 0.0) {
        coef[j - 1] = 0.0;  // threshold far beyond reach, skip the 2F1
        continue;
      }
      const double inter =
          ratios[j - 1] * (specfun::hyp2f1_interference(j, cfg.alpha, gamma) - 1.0);
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      coef[j - 1] = sign * binom * noise_factor * std::exp(-inter);
    }
  }

  double operator()(int n) const {
    const double u = std::pow(one_over_1p_gamma, n);  // (1+gamma)^{-n}
    double un = 1.0;
    double sum = 0.0;
    for (size_t j = 0; j < coef.size(); ++j) {
      un *= u;  // (1+gamma)^{-jn}
      sum += coef[j] * un;
    }
    return sum;
  }
};

}  // namespace

double theta_krep(int n, int m, int k, const ScenarioConfig& cfg, double a_m) {
  if (n < 0) throw std::invalid_argument("theta_krep: n must be >= 0");
  if (m < 1) throw std::invalid_argument("theta_krep: m must be >= 1");
  if (k < 1) throw std::invalid_argument("theta_krep: k must be >= 1");
  if (!is_prob(a_m)) throw std::invalid_argument("theta_krep: a_m out of [0,1]");
  const double ratio = a_m * active_density(cfg) / cfg.lambda_b;
  std::vector<double> ratios(k, ratio);
  WindowSuccess w(k, cfg, ratios, cfg.power_level(m));
  const double th = w(n);
  assert(is_prob(th));
  return th;
}

double theta_reactive(int n, int m, const ScenarioConfig& cfg, double a_m) {
  return theta_krep(n, m, 1, cfg, a_m);
}

double access_success_krep_part(int m, int k, const ScenarioConfig& cfg, double a_m,
                                SuccessPart part, double tail_eps) {
  if (!is_prob(a_m)) throw std::invalid_argument("access_success: a_m out of [0,1]");
  const double ratio = a_m * active_density(cfg) / cfg.lambda_b;
  specfun::LoadPmf pmf(ratio);
  const int n_max = pmf.truncation_order(tail_eps);
  std::vector<double> ratios(k, ratio);
  WindowSuccess w(k, cfg, ratios, cfg.power_level(m));
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double th = w(n);
    assert(is_prob(th));
    double term;
    switch (part) {
      case SuccessPart::access:
        term = th * std::pow(1.0 - th, n);
        break;
      case SuccessPart::transmission_only:
        term = th;
        break;
      case SuccessPart::non_collision_only:
        term = std::pow(1.0 - th, n);
        break;
    }
    sum += pmf(n) * term;
  }
  assert(is_prob(sum));
  return clamp01(sum);
}

double access_success_krep(int m, int k, const ScenarioConfig& cfg, double a_m,
                           double tail_eps) {
  return access_success_krep_part(m, k, cfg, a_m, SuccessPart::access, tail_eps);
}

double access_success_reactive(int m, const ScenarioConfig& cfg, double a_m,
                               double tail_eps) {
  return access_success_krep(m, 1, cfg, a_m, tail_eps);
}

double feedback_factor(int m, int l, std::span<const double> prior_access) {
  if (m < 1) throw std::invalid_argument("feedback_factor: m must be >= 1");
  if (l < 1) throw std::invalid_argument("feedback_factor: l must be >= 1");
  if (l <= 4) return 1.0;
  if (static_cast<int>(prior_access.size()) < l - 4)
    throw std::invalid_argument("feedback_factor: missing prior access entry P_{m," +
                                std::to_string(l - 4) + "}");
  return 1.0 - prior_access[l - 5];
}

ProactiveRound proactive_round(int m, int l_max, const ScenarioConfig& cfg, double a_m,
                               double tail_eps) {
  if (m < 1) throw std::invalid_argument("proactive_round: m must be >= 1");
  if (l_max < 0) throw std::invalid_argument("proactive_round: l_max must be >= 0");
  if (!is_prob(a_m)) throw std::invalid_argument("proactive_round: a_m out of [0,1]");

  ProactiveRound out;
  if (l_max == 0) return out;

  const double g = cfg.power_level(m);
  const double base_ratio = a_m * active_density(cfg) / cfg.lambda_b;
  specfun::LoadPmf base_pmf(base_ratio);
  const int n_max = base_pmf.truncation_order(tail_eps);
  out.truncation = n_max;

  // Per-n state shared across l: the single- and four-repetition window
  // successes and the running failure product over repetitions r >= 5.
  std::vector<double> theta1(n_max + 1), theta4(n_max + 1);
  {
    const int w4_len = std::min(l_max, 4);
    std::vector<double> r1(1, base_ratio), r4(w4_len, base_ratio);
    WindowSuccess wg1(1, cfg, r1, g), wg4(w4_len, cfg, r4, g);
    for (int n = 0; n <= n_max; ++n) {
      theta1[n] = wg1(n);
      theta4[n] = wg4(n);
    }
  }
  std::vector<double> tail_fail(n_max + 1, 0.0);  // (1-theta4)*prod_{r=5..l}(1-P_{m,r})
  for (int n = 0; n <= n_max; ++n) tail_fail[n] = 1.0 - theta4[n];

  out.access.reserve(l_max);
  out.eta.reserve(l_max);
  for (int l = 1; l <= l_max; ++l) {
    const double eta_l = feedback_factor(m, l, out.access);
    const double ratio_l = eta_l * base_ratio;
    specfun::LoadPmf pmf_l(ratio_l);

    double sum = 0.0;
    if (l <= 4) {
      std::vector<double> rl(l, base_ratio);
      WindowSuccess wl(l, cfg, rl, g);
      for (int n = 0; n <= n_max; ++n) {
        const double th = wl(n);
        assert(is_prob(th));
        sum += pmf_l(n) * th * std::pow(1.0 - th, n);
      }
    } else {
      // advance the per-repetition failure product to repetition l
      for (int n = 0; n <= n_max; ++n) {
        const double p_rep = eta_l * pmf_l(n) * theta1[n];
        assert(is_prob(p_rep));
        tail_fail[n] *= 1.0 - p_rep;
        const double th = 1.0 - tail_fail[n];
        assert(is_prob(th));
        sum += pmf_l(n) * th * std::pow(1.0 - th, n);
      }
    }
    assert(is_prob(sum));
    out.access.push_back(clamp01(sum));
    out.eta.push_back(eta_l);
  }
  return out;
}

double access_success_proactive(int m, int l, const ScenarioConfig& cfg, double a_m,
                                double tail_eps) {
  if (l < 1) throw std::invalid_argument("access_success_proactive: l must be >= 1");
  return proactive_round(m, l, cfg, a_m, tail_eps).access[l - 1];
}

double theta_proactive(int n, int m, int l, const ScenarioConfig& cfg, double a_m,
                       double tail_eps) {
  if (l < 1) throw std::invalid_argument("theta_proactive: l must be >= 1");
  if (l <= 4) return theta_krep(n, m, l, cfg, a_m);
  const ProactiveRound chain = proactive_round(m, l - 4, cfg, a_m, tail_eps);
  const double base_ratio = a_m * active_density(cfg) / cfg.lambda_b;
  const double th1 = theta_krep(n, m, 1, cfg, a_m);
  double fail = 1.0 - theta_krep(n, m, 4, cfg, a_m);
  for (int r = 5; r <= l; ++r) {
    const double eta_r = 1.0 - chain.access[r - 5];
    const double p_rep = eta_r * specfun::load_pmf(n, eta_r * base_ratio) * th1;
    fail *= 1.0 - p_rep;
  }
  return 1.0 - fail;
}

namespace {

// Shared Reactive / K-repetition curve: per-round A_m / P_m recursion, then
// the staircase over T.
FailureCurve curve_krep_family(const ScenarioConfig& cfg, const Scheme& scheme,
                               int t_max, double tail_eps) {
  if (t_max < 1) throw std::invalid_argument("failure_curve: t_max must be >= 1");
  cfg.validate();
  const int k = scheme.repetitions();
  const int round_ttis = timing::rtt(scheme);
  const int m_max = (t_max - 1) / round_ttis;

  std::vector<double> cum(m_max + 1, 0.0);  // cum[m] = sum_{i<=m} A_i P_i
  double a = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    const double p = access_success_krep(m, k, cfg, a, tail_eps);
    cum[m] = cum[m - 1] + a * p;
    a -= a * p;
    assert(is_prob(a) && is_prob(cum[m]));
  }

  FailureCurve curve;
  curve.scheme = scheme;
  curve.engine = "analytic";
  curve.tti_ms = cfg.tti_ms;
  curve.config_hash = cfg.hash();
  curve.truncation_order =
      specfun::truncation_order(active_density(cfg) / cfg.lambda_b, tail_eps);
  curve.t_ttis.reserve(t_max);
  curve.p_fail.reserve(t_max);
  for (int t = 1; t <= t_max; ++t) {
    const int m = timing::max_rounds(scheme, {t});
    curve.t_ttis.push_back(t);
    curve.p_fail.push_back(m == 0 ? 1.0 : clamp01(1.0 - cum[m]));
  }
  return curve;
}

}  // namespace

FailureCurve failure_curve_reactive(const ScenarioConfig& cfg, int t_max,
                                    double tail_eps) {
  return curve_krep_family(cfg, Scheme::reactive(), t_max, tail_eps);
}

FailureCurve failure_curve_krep(const ScenarioConfig& cfg, int k, int t_max,
                                double tail_eps) {
  return curve_krep_family(cfg, Scheme::krepetition(k), t_max, tail_eps);
}

FailureCurve failure_curve_proactive(const ScenarioConfig& cfg, int k_max, int t_max,
                                     double tail_eps) {
  if (t_max < 1) throw std::invalid_argument("failure_curve: t_max must be >= 1");
  if (k_max < 1) throw std::invalid_argument("failure_curve: k_max must be >= 1");
  cfg.validate();
  const Scheme scheme = Scheme::proactive(k_max);
  const int round_ttis = k_max + 3;
  const int mu_max = t_max >= 2 ? (t_max - 2) / round_ttis : 0;

  // Rounds 1..mu_max+1 (the last one only ever enters through a partial
  // window). A_{m+1} folds in the full-round success P_{m,Kmax}.
  std::vector<ProactiveRound> rounds;
  std::vector<double> active;  // A_m
  std::vector<double> cum_full(mu_max + 2, 0.0);
  double a = 1.0;
  for (int m = 1; m <= mu_max + 1; ++m) {
    active.push_back(a);
    rounds.push_back(proactive_round(m, k_max, cfg, a, tail_eps));
    const double p_full = rounds.back().access[k_max - 1];
    cum_full[m] = cum_full[m - 1] + a * p_full;
    a -= a * p_full;
  }

  FailureCurve curve;
  curve.scheme = scheme;
  curve.engine = "analytic";
  curve.tti_ms = cfg.tti_ms;
  curve.config_hash = cfg.hash();
  curve.truncation_order = rounds.front().truncation;
  curve.t_ttis.reserve(t_max);
  curve.p_fail.reserve(t_max);
  for (int t = 1; t <= t_max; ++t) {
    const auto [mu, nu] = timing::proactive_indices(k_max, {t});
    double p;
    if (mu == 0) {
      p = nu <= 2 ? 1.0 : 1.0 - rounds[0].access[nu - 3];
    } else if (nu <= 2) {
      p = 1.0 - cum_full[mu];
    } else {
      // Partial-round term of the final (M+1)th round. The success mass
      // A_{M+1} P_{M+1,nu-2} reduces the failure probability; see README
      // notes on the sign of this term.
      p = 1.0 - cum_full[mu] - active[mu] * rounds[mu].access[nu - 3];
    }
    assert(is_prob(p));
    curve.t_ttis.push_back(t);
    curve.p_fail.push_back(clamp01(p));
  }
  return curve;
}

FailureCurve failure_curve(const ScenarioConfig& cfg, const Scheme& scheme, int t_max,
                           double tail_eps) {
  switch (scheme.kind) {
    case Scheme::Kind::reactive:
      return failure_curve_reactive(cfg, t_max, tail_eps);
    case Scheme::Kind::krepetition:
      return failure_curve_krep(cfg, scheme.k, t_max, tail_eps);
    case Scheme::Kind::proactive:
      return failure_curve_proactive(cfg, scheme.k, t_max, tail_eps);
  }
  throw std::logic_error("failure_curve: bad scheme");
}

}  // namespace gfa::analytic
