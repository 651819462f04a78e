#include "gfa/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "gfa/timing.hpp"

namespace gfa::sim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double dist(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

int nearest_bs(const std::vector<Vec2>& bs, const Vec2& p, double* d_out) {
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < bs.size(); ++b) {
    const double dx = p.x - bs[b].x, dy = p.y - bs[b].y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(b);
    }
  }
  *d_out = std::sqrt(best_d2);
  return best;
}

// Same-pilot contention group. base is member-major over the group's
// distinct serving BSs: received power (normalized by rho and fading) of
// member v at BS b. For v's own serving BS the path-loss inversion makes
// the entry exactly g.
struct PilotGroup {
  std::vector<int> member;    // state indices
  std::vector<int> bs_local;  // per member, index into bs_ids
  std::vector<int> bs_ids;
  std::vector<double> base;

  double at(size_t v, size_t b) const { return base[v * bs_ids.size() + b]; }
};

PilotGroup build_group(const std::vector<Vec2>& bs, const ContentionState& st,
                       const std::vector<int>& members, double g, double alpha) {
  PilotGroup grp;
  grp.member = members;
  grp.bs_local.resize(members.size());
  for (size_t v = 0; v < members.size(); ++v) {
    const int b = st.serving[members[v]];
    auto it = std::find(grp.bs_ids.begin(), grp.bs_ids.end(), b);
    if (it == grp.bs_ids.end()) {
      grp.bs_local[v] = static_cast<int>(grp.bs_ids.size());
      grp.bs_ids.push_back(b);
    } else {
      grp.bs_local[v] = static_cast<int>(it - grp.bs_ids.begin());
    }
  }
  const size_t nb = grp.bs_ids.size();
  grp.base.resize(members.size() * nb);
  for (size_t v = 0; v < members.size(); ++v) {
    const int i = members[v];
    for (size_t b = 0; b < nb; ++b) {
      if (static_cast<int>(b) == grp.bs_local[v]) {
        grp.base[v * nb + b] = g;  // full path-loss inversion
      } else {
        const double d = std::max(dist(st.pos[i], bs[grp.bs_ids[b]]), 1e-12);
        grp.base[v * nb + b] = g * std::pow(st.serving_dist[i] / d, alpha);
      }
    }
  }
  return grp;
}

// One repetition: fading for the transmitting members, per-BS interference
// totals, then the decode indicator per transmitting member.
void run_repetition(const PilotGroup& grp, const std::vector<std::uint8_t>& transmitting,
                    int rep, double gamma, double noise, const FadingFn& fading,
                    std::vector<double>& h, std::vector<double>& tot,
                    std::vector<std::uint8_t>& decoded) {
  const size_t nv = grp.member.size();
  const size_t nb = grp.bs_ids.size();
  h.assign(nv, 0.0);
  tot.assign(nb, 0.0);
  for (size_t v = 0; v < nv; ++v) {
    if (!transmitting[v]) continue;
    h[v] = fading(grp.member[v], rep);
    for (size_t b = 0; b < nb; ++b) tot[b] += grp.at(v, b) * h[v];
  }
  decoded.assign(nv, 0);
  for (size_t v = 0; v < nv; ++v) {
    if (!transmitting[v]) continue;
    const double sig = grp.at(v, grp.bs_local[v]) * h[v];
    const double sinr = sig / (tot[grp.bs_local[v]] - sig + noise);
    decoded[v] = sinr >= gamma;
  }
}

bool solo_in_cell(const PilotGroup& grp, const std::vector<std::uint8_t>& flag,
                  size_t v) {
  for (size_t w = 0; w < grp.member.size(); ++w)
    if (w != v && flag[w] && grp.bs_local[w] == grp.bs_local[v]) return false;
  return true;
}

void round_krep(const PilotGroup& grp, int k, double gamma, double noise, bool per_rep,
                const FadingFn& fading, RoundOutcome& out) {
  const size_t nv = grp.member.size();
  std::vector<std::uint8_t> transmitting(nv, 1);
  std::vector<std::uint8_t> window_dec(nv, 0), valid(nv, 0), decoded;
  std::vector<double> h, tot;
  for (int rep = 1; rep <= k; ++rep) {
    run_repetition(grp, transmitting, rep, gamma, noise, fading, h, tot, decoded);
    if (per_rep) {
      for (size_t v = 0; v < nv; ++v)
        if (decoded[v] && solo_in_cell(grp, decoded, v)) valid[v] = 1;
    } else {
      for (size_t v = 0; v < nv; ++v) window_dec[v] |= decoded[v];
    }
  }
  for (size_t v = 0; v < nv; ++v) {
    if (per_rep) {
      out.success[grp.member[v]] = valid[v];
    } else {
      out.success[grp.member[v]] = window_dec[v] && solo_in_cell(grp, window_dec, v);
    }
  }
}

void round_proactive(const PilotGroup& grp, int k_max, double gamma, double noise,
                     bool per_rep, const FadingFn& fading, RoundOutcome& out) {
  const size_t nv = grp.member.size();
  std::vector<int> first_dec(nv, 0), stop_after(nv, std::numeric_limits<int>::max());
  std::vector<int> ack_rep(nv, 0);
  std::vector<std::uint8_t> acked(nv, 0), transmitting(nv, 1), decoded, window_dec(nv, 0);
  std::vector<double> h, tot;
  for (int rep = 1; rep <= k_max; ++rep) {
    for (size_t v = 0; v < nv; ++v) transmitting[v] = rep <= stop_after[v];
    run_repetition(grp, transmitting, rep, gamma, noise, fading, h, tot, decoded);
    for (size_t v = 0; v < nv; ++v) {
      if (decoded[v] && first_dec[v] == 0) {
        first_dec[v] = rep;
        window_dec[v] = 1;
      }
    }
    for (size_t v = 0; v < nv; ++v) {
      if (acked[v]) continue;
      if (per_rep) {
        // pairwise rule: an ACK needs a solo decode in this repetition
        if (!decoded[v] || !solo_in_cell(grp, decoded, v)) continue;
      } else {
        // an ACK needs this UE to be the only decoded member of its cell
        // over the realized window so far
        if (first_dec[v] != rep || !solo_in_cell(grp, window_dec, v)) continue;
      }
      acked[v] = 1;
      ack_rep[v] = rep;
      stop_after[v] = rep + 3;  // feedback processed 3 TTIs after the repetition
    }
  }
  for (size_t v = 0; v < nv; ++v) {
    if (per_rep) {
      if (acked[v]) {
        out.success[grp.member[v]] = 1;
        out.success_rep[grp.member[v]] = ack_rep[v];
      }
    } else if (window_dec[v] && solo_in_cell(grp, window_dec, v)) {
      out.success[grp.member[v]] = 1;
      out.success_rep[grp.member[v]] = first_dec[v];
    }
  }
}

struct TrialTally {
  std::uint64_t tracked = 0;
  std::vector<std::uint64_t> success_at;  // index = latency in TTIs
  int zero_bs_redraws = 0;
  std::vector<TrialRecord> records;
};

int max_simulated_rounds(const Scheme& scheme, int horizon) {
  if (scheme.is_proactive()) {
    // earliest possible success of round m arrives at 5 + (m-1)(Kmax+3)
    if (horizon < 5) return 0;
    return (horizon - 5) / (scheme.k + 3) + 1;
  }
  return horizon >= 1 ? (horizon - 1) / timing::rtt(scheme) : 0;
}

void run_trial(const ScenarioConfig& cfg, const Scheme& scheme, int horizon,
               int trial, const SimOptions& opts, bool want_records, TrialTally& tally) {
  rng::Stream stream(cfg.seed, static_cast<std::uint64_t>(trial));
  tally.success_at.assign(horizon + 1, 0);

  const double radius = std::sqrt(cfg.sim_area_km2 / kPi);
  std::uint64_t n_bs = stream.poisson(cfg.lambda_b * cfg.sim_area_km2);
  while (n_bs == 0) {
    ++tally.zero_bs_redraws;
    n_bs = stream.poisson(cfg.lambda_b * cfg.sim_area_km2);
  }
  std::vector<Vec2> bs(n_bs);
  for (auto& b : bs) {
    auto [x, y] = stream.disc_point(radius);
    b = {x, y};
  }

  // Thinned active process: Bernoulli activation and uniform pilot choice
  // thin the UE PPP, so actives are drawn directly at density p_a*lambda_d.
  const std::uint64_t n_active =
      stream.poisson(cfg.p_a * cfg.lambda_d * cfg.sim_area_km2);
  if (n_active == 0) return;

  const double guard_radius = (1.0 - opts.guard_fraction) * radius;
  std::vector<Vec2> pos(n_active);
  std::vector<std::uint8_t> tracked(n_active);
  for (std::uint64_t i = 0; i < n_active; ++i) {
    auto [x, y] = stream.disc_point(radius);
    pos[i] = {x, y};
    tracked[i] = std::hypot(x, y) <= guard_radius;
  }

  std::vector<int> alive(n_active);
  for (std::uint64_t i = 0; i < n_active; ++i) alive[i] = static_cast<int>(i);
  std::vector<int> success_m(n_active, 0), success_l(n_active, 0);
  std::vector<int> latency(n_active, -1);

  const FadingFn fading = [&stream](int, int) { return stream.exponential(); };
  const int m_last = max_simulated_rounds(scheme, horizon);
  ContentionState st;
  for (int m = 1; m <= m_last && !alive.empty(); ++m) {
    const size_t n = alive.size();
    st.pos.resize(n);
    st.pilot.resize(n);
    st.serving.resize(n);
    st.serving_dist.resize(n);
    for (size_t i = 0; i < n; ++i) {
      if (m == 1) {
        st.pos[i] = pos[alive[i]];
      } else {
        auto [x, y] = stream.disc_point(radius);  // per-round repositioning
        st.pos[i] = {x, y};
      }
      st.pilot[i] = static_cast<int>(stream.uniform_int(cfg.s_pilots));
      st.serving[i] = nearest_bs(bs, st.pos[i], &st.serving_dist[i]);
    }

    const RoundOutcome out =
        run_round_trip(cfg, scheme, m, bs, st, fading, opts.per_rep_collisions);

    std::vector<int> next_alive;
    next_alive.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const int ue = alive[i];
      if (out.success[i]) {
        const int l = scheme.is_proactive() ? out.success_rep[i] : 0;
        success_m[ue] = m;
        success_l[ue] = l;
        latency[ue] = scheme.is_proactive() ? timing::latency_after(scheme, m, l)
                                            : timing::latency_after(scheme, m);
      } else {
        next_alive.push_back(ue);
      }
    }
    alive.swap(next_alive);
  }

  for (std::uint64_t i = 0; i < n_active; ++i) {
    if (!tracked[i]) continue;
    ++tally.tracked;
    if (latency[i] > 0 && latency[i] <= horizon) ++tally.success_at[latency[i]];
    if (want_records) {
      TrialRecord rec;
      rec.trial = trial;
      rec.ue = static_cast<int>(i);
      rec.success = latency[i] > 0 && latency[i] <= horizon;
      rec.m = rec.success ? success_m[i] : 0;
      rec.l = rec.success ? success_l[i] : 0;
      rec.latency_ttis = rec.success ? latency[i] : -1;
      tally.records.push_back(rec);
    }
  }
}

}  // namespace

RoundOutcome run_round_trip(const ScenarioConfig& cfg, const Scheme& scheme, int m,
                            const std::vector<Vec2>& bs_positions,
                            const ContentionState& state, const FadingFn& fading,
                            bool per_rep_collisions) {
  const size_t n = state.pos.size();
  if (state.pilot.size() != n || state.serving.size() != n ||
      state.serving_dist.size() != n)
    throw std::invalid_argument("run_round_trip: inconsistent contention state");
  RoundOutcome out;
  out.success.assign(n, 0);
  out.success_rep.assign(n, 0);
  const double gamma = cfg.gamma_th_lin();
  const double noise = cfg.noise_over_rho();
  const double g = cfg.power_level(m);

  std::vector<std::vector<int>> buckets(cfg.s_pilots);
  for (size_t i = 0; i < n; ++i) buckets.at(state.pilot[i]).push_back(static_cast<int>(i));

  for (int p = 0; p < cfg.s_pilots; ++p) {
    if (buckets[p].empty()) continue;
    const PilotGroup grp = build_group(bs_positions, state, buckets[p], g, cfg.alpha);
    if (scheme.is_proactive()) {
      round_proactive(grp, scheme.k, gamma, noise, per_rep_collisions, fading, out);
    } else {
      round_krep(grp, scheme.repetitions(), gamma, noise, per_rep_collisions, fading, out);
    }
  }
  return out;
}

Deployment deploy(const ScenarioConfig& cfg, rng::Stream& stream) {
  cfg.validate();
  Deployment dep;
  dep.power_level = cfg.power_level(1);
  const double radius = std::sqrt(cfg.sim_area_km2 / kPi);

  std::uint64_t n_bs = stream.poisson(cfg.lambda_b * cfg.sim_area_km2);
  while (n_bs == 0) {
    ++dep.zero_bs_redraws;
    n_bs = stream.poisson(cfg.lambda_b * cfg.sim_area_km2);
  }
  dep.bs_positions.resize(n_bs);
  for (auto& b : dep.bs_positions) {
    auto [x, y] = stream.disc_point(radius);
    b = {x, y};
  }

  const std::uint64_t n_ue = stream.poisson(cfg.lambda_d * cfg.sim_area_km2);
  dep.ue_positions.resize(n_ue);
  dep.active.resize(n_ue);
  dep.pilot.assign(n_ue, -1);
  dep.serving_bs.assign(n_ue, -1);
  dep.serving_dist.assign(n_ue, 0.0);
  dep.tx_power_mw.assign(n_ue, 0.0);
  const double rho = cfg.rho_mw();
  for (std::uint64_t i = 0; i < n_ue; ++i) {
    auto [x, y] = stream.disc_point(radius);
    dep.ue_positions[i] = {x, y};
    dep.active[i] = stream.uniform() < cfg.p_a;
    if (!dep.active[i]) continue;
    dep.pilot[i] = static_cast<int>(stream.uniform_int(cfg.s_pilots));
    double d;
    dep.serving_bs[i] = nearest_bs(dep.bs_positions, dep.ue_positions[i], &d);
    dep.serving_dist[i] = d;
    dep.tx_power_mw[i] = dep.power_level * rho * std::pow(d, cfg.alpha);
  }
  return dep;
}

double sinr_at_bs(const ScenarioConfig& cfg, const Deployment& dep, int target_ue,
                  rng::Stream& stream) {
  if (target_ue < 0 || static_cast<size_t>(target_ue) >= dep.ue_positions.size())
    throw std::invalid_argument("sinr_at_bs: bad target index");
  if (!dep.active[target_ue])
    throw std::invalid_argument("sinr_at_bs: target UE is not active");
  const Vec2 rx = dep.bs_positions[dep.serving_bs[target_ue]];
  const double signal = dep.tx_power_mw[target_ue] *
                        std::pow(dep.serving_dist[target_ue], -cfg.alpha) *
                        stream.exponential();
  double interference = 0.0;
  for (size_t i = 0; i < dep.ue_positions.size(); ++i) {
    if (static_cast<int>(i) == target_ue) continue;
    if (!dep.active[i] || dep.pilot[i] != dep.pilot[target_ue]) continue;
    const double d = std::max(dist(dep.ue_positions[i], rx), 1e-12);
    interference += dep.tx_power_mw[i] * std::pow(d, -cfg.alpha) * stream.exponential();
  }
  return signal / (interference + cfg.sigma2_mw());
}

FailureCurve estimate_failure_curve(const ScenarioConfig& cfg, const Scheme& scheme,
                                    int horizon_ttis, int n_trials,
                                    const SimOptions& opts,
                                    std::vector<TrialRecord>* records) {
  cfg.validate();
  if (horizon_ttis < 1) throw std::invalid_argument("horizon must be >= 1 TTI");
  if (n_trials < 1) throw std::invalid_argument("trials must be >= 1");

  std::vector<TrialTally> tallies(n_trials);
  const int threads = std::max(1, std::min(opts.threads, n_trials));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n_trials) return;
      run_trial(cfg, scheme, horizon_ttis, t, opts, records != nullptr, tallies[t]);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Deterministic reduction in trial order, independent of worker count.
  std::uint64_t tracked = 0;
  std::vector<std::uint64_t> success_at(horizon_ttis + 1, 0);
  for (const auto& t : tallies) {
    tracked += t.tracked;
    for (size_t i = 0; i < t.success_at.size() && i < success_at.size(); ++i)
      success_at[i] += t.success_at[i];
    if (records) records->insert(records->end(), t.records.begin(), t.records.end());
  }
  if (tracked == 0)
    throw std::runtime_error(
        "simulation produced no tracked samples; increase area, density or trials");

  FailureCurve curve;
  curve.scheme = scheme;
  curve.engine = "simulated";
  curve.tti_ms = cfg.tti_ms;
  curve.config_hash = cfg.hash();
  curve.n_samples = tracked;
  curve.t_ttis.reserve(horizon_ttis);
  curve.p_fail.reserve(horizon_ttis);
  std::uint64_t cum_success = 0;
  for (int t = 1; t <= horizon_ttis; ++t) {
    cum_success += success_at[t];
    const std::uint64_t failures = tracked - cum_success;
    curve.t_ttis.push_back(t);
    curve.p_fail.push_back(static_cast<double>(failures) / static_cast<double>(tracked));
    const Interval ci = wilson_ci(failures, tracked);
    curve.ci_low.push_back(ci.low);
    curve.ci_high.push_back(ci.high);
  }
  return curve;
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial_id,ue_id,outcome,m,l,latency_ttis\n";
  for (const auto& r : records) {
    os << r.trial << ',' << r.ue << ',' << (r.success ? "success" : "still_failing")
       << ',' << r.m << ',' << r.l << ',' << r.latency_ttis << '\n';
  }
}

}  // namespace gfa::sim
