#pragma once

#include "gfa/config.hpp"

namespace gfa::timing {

// Frame alignment, transmission, BS processing, feedback and UE processing
// are each one TTI in this model.
struct TimingConstants {
  static constexpr int t_fa = 1;
  static constexpr int t_tx = 1;
  static constexpr int t_dp = 1;
  static constexpr int t_fb = 1;
  static constexpr int t_up = 1;
};

struct LatencyBudget {
  int t_ttis = 1;
  double t_ms(double tti_ms) const { return t_ttis * tti_ms; }
};

/// HARQ round-trip time in TTIs: 4 for Reactive, K+3 for K-repetition, and
/// Kmax+3 for a full (l = 0, all repetitions failed) Proactive round.
int rtt(const Scheme& scheme);

/// Proactive single-round RTT: Kmax+3 when l == 0, l+3 for an ACK of the
/// l-th repetition.
int proactive_rtt(int k_max, int l);

/// Latency in TTIs after m round trips. For Proactive, l is the repetition
/// whose ACK ends round m (l = 0 means the whole round failed).
int latency_after(const Scheme& scheme, int m, int l = 0);

/// Maximum number of complete HARQ round trips within the budget:
/// floor((T-1)/RTT). Reactive and K-repetition only.
int max_rounds(const Scheme& scheme, LatencyBudget budget);

struct ProactiveIndices {
  int mu = 0;  // complete Proactive round trips within the budget
  int nu = 0;  // TTI offset inside the final partial round
};

/// Index split for the Proactive scheme: mu = floor((T-2)/(Kmax+3)),
/// nu = (T-2) mod (Kmax+3). T = 1 is failure-certain and maps to (0, 0).
ProactiveIndices proactive_indices(int k_max, LatencyBudget budget);

}  // namespace gfa::timing
