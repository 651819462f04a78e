#include "gfa/timing.hpp"

#include <stdexcept>

namespace gfa::timing {

int rtt(const Scheme& scheme) {
  switch (scheme.kind) {
    case Scheme::Kind::reactive:
      return 4;
    case Scheme::Kind::krepetition:
    case Scheme::Kind::proactive:
      return scheme.k + 3;
  }
  throw std::logic_error("rtt: bad scheme");
}

int proactive_rtt(int k_max, int l) {
  if (k_max < 1) throw std::invalid_argument("proactive_rtt: k_max must be >= 1");
  if (l < 0 || l > k_max) throw std::invalid_argument("proactive_rtt: l out of [0, Kmax]");
  return l == 0 ? k_max + 3 : l + 3;
}

int latency_after(const Scheme& scheme, int m, int l) {
  if (m < 1) throw std::invalid_argument("latency_after: m must be >= 1");
  switch (scheme.kind) {
    case Scheme::Kind::reactive:
      return 1 + 4 * m;
    case Scheme::Kind::krepetition:
      return 1 + m * (scheme.k + 3);
    case Scheme::Kind::proactive:
      if (l == 0) return 1 + m * (scheme.k + 3);
      return l + 4 + (m - 1) * (scheme.k + 3);
  }
  throw std::logic_error("latency_after: bad scheme");
}

int max_rounds(const Scheme& scheme, LatencyBudget budget) {
  if (scheme.is_proactive())
    throw std::invalid_argument("max_rounds: use proactive_indices for the Proactive scheme");
  if (budget.t_ttis < 1) throw std::invalid_argument("max_rounds: budget must be >= 1 TTI");
  return (budget.t_ttis - 1) / rtt(scheme);
}

ProactiveIndices proactive_indices(int k_max, LatencyBudget budget) {
  if (k_max < 1) throw std::invalid_argument("proactive_indices: k_max must be >= 1");
  if (budget.t_ttis < 1) throw std::invalid_argument("proactive_indices: budget must be >= 1 TTI");
  if (budget.t_ttis == 1) return {0, 0};  // failure-certain region
  const int r = k_max + 3;
  const int t = budget.t_ttis - 2;
  return {t / r, t % r};
}

}  // namespace gfa::timing
