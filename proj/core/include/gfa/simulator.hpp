#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gfa/config.hpp"
#include "gfa/curve.hpp"
#include "gfa/rng.hpp"

namespace gfa::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// One spatial realization: PPP base stations and UEs in a disc, Bernoulli
/// activation, uniform pilot choice, nearest-BS association and full
/// path-loss inversion so the mean received power at the serving BS is
/// exactly g * rho. Pilot/serving/tx fields are populated for active UEs
/// (inactive UEs never transmit).
struct Deployment {
  std::vector<Vec2> bs_positions;
  std::vector<Vec2> ue_positions;
  std::vector<std::uint8_t> active;
  std::vector<int> pilot;          // -1 for inactive
  std::vector<int> serving_bs;     // -1 for inactive
  std::vector<double> serving_dist;
  std::vector<double> tx_power_mw;  // g * rho * d^alpha
  double power_level = 1.0;         // g applied in tx_power_mw
  int zero_bs_redraws = 0;
};

/// Draw a full deployment (counts Poisson with mean density*area, positions
/// uniform in the disc). A zero-BS draw is redrawn and counted.
Deployment deploy(const ScenarioConfig& cfg, rng::Stream& stream);

/// One SINR draw at the target's serving BS with fresh Exp(1) fading on the
/// target and every same-pilot active interferer.
double sinr_at_bs(const ScenarioConfig& cfg, const Deployment& dep, int target_ue,
                  rng::Stream& stream);

/// Contention state of one HARQ round trip: positions, pilots and serving
/// cells of the UEs still carrying their packet (active UEs only).
struct ContentionState {
  std::vector<Vec2> pos;
  std::vector<int> pilot;
  std::vector<int> serving;
  std::vector<double> serving_dist;
};

struct RoundOutcome {
  std::vector<std::uint8_t> success;  // per state index
  std::vector<int> success_rep;       // Proactive: first decoded repetition, else 0
};

/// Fading source: channel power gain for (state index, repetition). The
/// estimator wires an Exp(1) stream here; tests may script deterministic
/// gains to pin down the collision and termination rules.
using FadingFn = std::function<double(int ue, int rep)>;

/// One HARQ round trip of the contention. Decode = per-repetition SINR at
/// the serving BS above the threshold. Round success for Reactive and
/// K-repetition: decoded at least once in the window AND no same-cell
/// co-pilot competitor decoded anywhere in the window. Proactive: a UE that
/// is the only decoded member of its cell so far is ACKed and stops
/// transmitting after repetition l+3; success is settled at round end by the
/// same window rule over the realized window, so only collision-free
/// successes stand. per_rep_collisions switches to the pairwise alternative
/// where only simultaneous decodes collide (sensitivity study).
RoundOutcome run_round_trip(const ScenarioConfig& cfg, const Scheme& scheme, int m,
                            const std::vector<Vec2>& bs_positions,
                            const ContentionState& state, const FadingFn& fading,
                            bool per_rep_collisions = false);

struct SimOptions {
  int threads = 1;
  /// Default collision rule voids a round for every UE of a cell-pilot group
  /// once two or more of them decode anywhere in the (realized) round
  /// window. The per-repetition alternative only collides simultaneous
  /// decodes; it exists for sensitivity study.
  bool per_rep_collisions = false;
  double guard_fraction = 0.2;  // tracked UEs keep 20% of the disc radius clear
};

struct TrialRecord {
  int trial = 0;
  int ue = 0;
  bool success = false;
  int m = 0;        // succeeding round trip (0 if still failing at horizon)
  int l = 0;        // succeeding repetition (Proactive; 0 otherwise)
  int latency_ttis = -1;
};

/// Monte-Carlo failure curve: fraction of tracked (active, non-guard-band)
/// UE samples whose access latency exceeds each T in 1..horizon. Trials are
/// independent deployments on per-trial counter-based substreams, so the
/// result is byte-identical for a fixed (seed, config, scheme, trials)
/// regardless of thread count.
FailureCurve estimate_failure_curve(const ScenarioConfig& cfg, const Scheme& scheme,
                                    int horizon_ttis, int n_trials,
                                    const SimOptions& opts = {},
                                    std::vector<TrialRecord>* records = nullptr);

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records);

}  // namespace gfa::sim
