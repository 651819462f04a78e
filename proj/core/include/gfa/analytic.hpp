#pragma once

#include <span>
#include <vector>

#include "gfa/config.hpp"
#include "gfa/curve.hpp"
#include "gfa/specfun.hpp"

namespace gfa::analytic {

/// Per-round-trip analytical state: active probability A_m, access success
/// P_m and the power level used. A_1 = 1 and A_{m+1} = A_m - A_m P_m.
struct RoundTripState {
  int m = 1;
  double active_prob = 1.0;
  double access_success = 0.0;
  double power = 1.0;
};

/// Transmission success probability of the typical UE conditioned on n
/// intra-cell co-pilot interferers, single repetition, round m with active
/// probability a_m.
double theta_reactive(int n, int m, const ScenarioConfig& cfg, double a_m);

/// Same conditioned success over a window of k combined repetitions
/// (alternating binomial sum; reduces to theta_reactive at k = 1).
double theta_krep(int n, int m, int k, const ScenarioConfig& cfg, double a_m);

enum class SuccessPart {
  access,              // II * III (the full access success)
  transmission_only,   // part III forced to 1
  non_collision_only,  // part II forced to 1
};

/// GF access success probability of the typical UE in round trip m:
/// sum over n of O[n,m] * Theta * (1 - Theta)^n, truncated by the load-PMF
/// tail bound.
double access_success_reactive(int m, const ScenarioConfig& cfg, double a_m,
                               double tail_eps = specfun::kDefaultTailEps);
double access_success_krep(int m, int k, const ScenarioConfig& cfg, double a_m,
                           double tail_eps = specfun::kDefaultTailEps);
double access_success_krep_part(int m, int k, const ScenarioConfig& cfg, double a_m,
                                SuccessPart part,
                                double tail_eps = specfun::kDefaultTailEps);

/// Proactive feedback factor eta_{m,l}: 1 for l <= 4, else the failure
/// probability after the first l-4 repetitions. prior_access[r-1] holds
/// P_{m,r}; entries up to r = l-4 must be present for l >= 5.
double feedback_factor(int m, int l, std::span<const double> prior_access);

/// Per-repetition access-success chain P_{m,l} for l = 1..l_max of Proactive
/// round m, evaluated in increasing l so the eta recursion is well-founded.
struct ProactiveRound {
  std::vector<double> access;  // access[l-1] = P_{m,l}
  std::vector<double> eta;     // eta[l-1] = eta_{m,l}
  int truncation = 0;
};
ProactiveRound proactive_round(int m, int l_max, const ScenarioConfig& cfg, double a_m,
                               double tail_eps = specfun::kDefaultTailEps);

double access_success_proactive(int m, int l, const ScenarioConfig& cfg, double a_m,
                                double tail_eps = specfun::kDefaultTailEps);

/// Conditioned window success Theta[n, m, l] of the Proactive scheme. For
/// l <= 4 this is the k-repetition window with K = l; for l >= 5 the product
/// recursion over per-repetition successes applies.
double theta_proactive(int n, int m, int l, const ScenarioConfig& cfg, double a_m,
                       double tail_eps = specfun::kDefaultTailEps);

FailureCurve failure_curve_reactive(const ScenarioConfig& cfg, int t_max,
                                    double tail_eps = specfun::kDefaultTailEps);
FailureCurve failure_curve_krep(const ScenarioConfig& cfg, int k, int t_max,
                                double tail_eps = specfun::kDefaultTailEps);
FailureCurve failure_curve_proactive(const ScenarioConfig& cfg, int k_max, int t_max,
                                     double tail_eps = specfun::kDefaultTailEps);
FailureCurve failure_curve(const ScenarioConfig& cfg, const Scheme& scheme, int t_max,
                           double tail_eps = specfun::kDefaultTailEps);

}  // namespace gfa::analytic
