// gfa: grant-free access failure-probability toolkit.
//
// Subcommands:
//   analytic  closed-form latent access failure curve -> CSV
//   simulate  Monte-Carlo curve with confidence intervals -> CSV
//   compare   run both engines and check per-T agreement
//   sweep     parameter sweeps in long CSV format
//
// Every command that writes an output file also writes a <out>.json sidecar
// with the fully resolved scenario for provenance.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfa/analytic.hpp"
#include "gfa/config.hpp"
#include "gfa/curve.hpp"
#include "gfa/simulator.hpp"
#include "gfa/timing.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCompareFail = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  // per-field overrides
  std::optional<double> lambda_b, lambda_d, p_a, rho_dbm, gamma_th_db, alpha,
      sigma2_dbm, tti_ms, sim_area_km2;
  std::optional<int> s_pilots;
  std::string power_ladder;

  std::string scheme_token = "reactive";
  std::optional<int> k;
  std::optional<int> kmax;
};

void add_common_options(CLI::App* cmd, CommonArgs* a, bool with_scheme = true) {
  cmd->add_option("--config", a->config_path, "scenario file (defaults to the built-in baseline)");
  cmd->add_option("--seed", a->seed, "RNG seed override");
  cmd->add_option("--out", a->out, "output CSV path (stdout if omitted)");
  cmd->add_option("--threads", a->threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda-b", a->lambda_b, "BS density, BS/km^2");
  cmd->add_option("--lambda-d", a->lambda_d, "UE density, UE/km^2");
  cmd->add_option("--p-a", a->p_a, "activation probability");
  cmd->add_option("--s-pilots", a->s_pilots, "orthogonal pilots");
  cmd->add_option("--rho-dbm", a->rho_dbm, "power control target, dBm");
  cmd->add_option("--gamma-th-db", a->gamma_th_db, "SINR threshold, dB");
  cmd->add_option("--alpha", a->alpha, "path-loss exponent");
  cmd->add_option("--sigma2-dbm", a->sigma2_dbm, "noise power, dBm");
  cmd->add_option("--power-ladder", a->power_ladder,
                  "comma-separated power levels g_1,...,g_J (e.g. 1,2,4)");
  cmd->add_option("--tti-ms", a->tti_ms, "TTI duration, ms");
  cmd->add_option("--sim-area-km2", a->sim_area_km2, "simulation disc area");
  if (with_scheme) {
    cmd->add_option("--scheme", a->scheme_token,
                    "reactive | krep | proactive (or compact krep4, proactive8)");
    cmd->add_option("--k", a->k, "repetitions for --scheme krep");
    cmd->add_option("--kmax", a->kmax, "max repetitions for --scheme proactive");
  }
}

gfa::ScenarioConfig resolve_config(const CommonArgs& a) {
  gfa::ScenarioConfig cfg;  // built-in paper baseline
  if (!a.config_path.empty()) cfg = gfa::load_scenario(a.config_path);
  if (a.lambda_b) cfg.lambda_b = *a.lambda_b;
  if (a.lambda_d) cfg.lambda_d = *a.lambda_d;
  if (a.p_a) cfg.p_a = *a.p_a;
  if (a.s_pilots) cfg.s_pilots = *a.s_pilots;
  if (a.rho_dbm) cfg.rho_dbm = *a.rho_dbm;
  if (a.gamma_th_db) cfg.gamma_th_db = *a.gamma_th_db;
  if (a.alpha) cfg.alpha = *a.alpha;
  if (a.sigma2_dbm) cfg.sigma2_dbm = *a.sigma2_dbm;
  if (a.tti_ms) cfg.tti_ms = *a.tti_ms;
  if (a.sim_area_km2) cfg.sim_area_km2 = *a.sim_area_km2;
  if (a.seed) cfg.seed = *a.seed;
  if (!a.power_ladder.empty()) {
    std::vector<double> ladder;
    std::stringstream ss(a.power_ladder);
    std::string item;
    while (std::getline(ss, item, ',')) ladder.push_back(std::stod(item));
    cfg.power_ladder = ladder;
  }
  cfg.validate();
  return cfg;
}

gfa::Scheme resolve_scheme(const CommonArgs& a) {
  std::string token = a.scheme_token;
  if (token == "krep" || token == "krepetition") {
    if (!a.k) throw std::invalid_argument("--scheme krep requires --k");
    return gfa::Scheme::krepetition(*a.k);
  }
  if (token == "proactive" || token == "proa") {
    if (!a.kmax) throw std::invalid_argument("--scheme proactive requires --kmax");
    return gfa::Scheme::proactive(*a.kmax);
  }
  gfa::Scheme s = gfa::Scheme::parse(token);
  if (s.kind == gfa::Scheme::Kind::krepetition && a.k && *a.k != s.k)
    throw std::invalid_argument("conflicting --scheme and --k");
  if (s.kind == gfa::Scheme::Kind::proactive && a.kmax && *a.kmax != s.k)
    throw std::invalid_argument("conflicting --scheme and --kmax");
  return s;
}

json config_json(const gfa::ScenarioConfig& cfg) {
  return json{{"lambda_b", cfg.lambda_b},
              {"lambda_d", cfg.lambda_d},
              {"p_a", cfg.p_a},
              {"s_pilots", cfg.s_pilots},
              {"rho_dbm", cfg.rho_dbm},
              {"gamma_th_db", cfg.gamma_th_db},
              {"alpha", cfg.alpha},
              {"sigma2_dbm", cfg.sigma2_dbm},
              {"power_ladder", cfg.power_ladder},
              {"tti_ms", cfg.tti_ms},
              {"sim_area_km2", cfg.sim_area_km2},
              {"seed", cfg.seed},
              {"active_density", gfa::active_density(cfg)},
              {"config_hash", cfg.hash()}};
}

void write_output(const std::string& out_path, const std::string& payload,
                  const json& sidecar) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << payload;
  std::ofstream meta(out_path + ".json");
  if (!meta) throw std::runtime_error("cannot write " + out_path + ".json");
  meta << sidecar.dump(2) << "\n";
}

// ---------------------------------------------------------------- analytic

int cmd_analytic(const CommonArgs& a, int t_max) {
  const gfa::ScenarioConfig cfg = resolve_config(a);
  const gfa::Scheme scheme = resolve_scheme(a);
  const gfa::FailureCurve curve = gfa::analytic::failure_curve(cfg, scheme, t_max);
  json sidecar{{"command", "analytic"},
               {"scheme", scheme.name()},
               {"t_max", t_max},
               {"truncation_order", curve.truncation_order},
               {"config", config_json(cfg)}};
  write_output(a.out, curve.to_csv(), sidecar);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonArgs& a, int horizon, int trials, bool per_rep,
                 const std::string& dump_records) {
  const gfa::ScenarioConfig cfg = resolve_config(a);
  const gfa::Scheme scheme = resolve_scheme(a);
  gfa::sim::SimOptions opts;
  opts.threads = a.threads;
  opts.per_rep_collisions = per_rep;
  std::vector<gfa::sim::TrialRecord> records;
  const gfa::FailureCurve curve = gfa::sim::estimate_failure_curve(
      cfg, scheme, horizon, trials, opts, dump_records.empty() ? nullptr : &records);
  if (!dump_records.empty()) {
    std::ofstream f(dump_records, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + dump_records);
    gfa::sim::write_records_csv(f, records);
  }
  json sidecar{{"command", "simulate"},
               {"scheme", scheme.name()},
               {"horizon", horizon},
               {"trials", trials},
               {"per_rep_collisions", per_rep},
               {"n_samples", curve.n_samples},
               {"config", config_json(cfg)}};
  write_output(a.out, curve.to_csv(), sidecar);
  return kExitOk;
}

// ----------------------------------------------------------------- compare

int cmd_compare(const CommonArgs& a, int t_max, int trials, bool per_rep,
                double gamma_bias_db) {
  const gfa::ScenarioConfig cfg = resolve_config(a);
  const gfa::Scheme scheme = resolve_scheme(a);

  gfa::ScenarioConfig ana_cfg = cfg;
  ana_cfg.gamma_th_db += gamma_bias_db;  // negative-control knob
  const gfa::FailureCurve ana = gfa::analytic::failure_curve(ana_cfg, scheme, t_max);

  gfa::sim::SimOptions opts;
  opts.threads = a.threads;
  opts.per_rep_collisions = per_rep;
  const gfa::FailureCurve sim =
      gfa::sim::estimate_failure_curve(cfg, scheme, t_max, trials, opts);

  std::ostringstream csv;
  csv << "t_ttis,t_ms,analytic,simulated,gap,tol,ci_covers,point_pass\n";
  int failures = 0;
  double worst_gap = 0.0;
  int worst_t = 0;
  std::ostringstream report;
  report << "compare scheme=" << scheme.name() << " gamma_th=" << cfg.gamma_th_db
         << " dB tmax=" << t_max << " trials=" << trials
         << " samples=" << sim.n_samples << "\n";
  report << "    T   analytic  simulated        gap        tol  ci  point\n";
  for (int t = 1; t <= t_max; ++t) {
    const double pa = ana.at(t);
    const double ps = sim.at(t);
    const double gap = std::abs(pa - ps);
    const double sigma =
        std::sqrt(std::max(ps * (1.0 - ps), 0.0) / static_cast<double>(sim.n_samples));
    const double tol = std::max(0.02, 3.0 * sigma);
    const bool covers = pa >= sim.ci_low[t - 1] && pa <= sim.ci_high[t - 1];
    const bool pass = gap <= tol;
    if (!pass) ++failures;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_t = t;
    }
    char line[160];
    std::snprintf(line, sizeof(line), "  %3d   %8.6f   %8.6f   %8.6f   %8.6f  %s  %s\n",
                  t, pa, ps, gap, tol, covers ? "yes" : " no",
                  pass ? "pass" : "FAIL");
    report << line;
    csv << t << ',' << gfa::format_sig(t * cfg.tti_ms) << ',' << gfa::format_sig(pa)
        << ',' << gfa::format_sig(ps) << ',' << gfa::format_sig(gap) << ','
        << gfa::format_sig(tol) << ',' << (covers ? 1 : 0) << ',' << (pass ? 1 : 0)
        << '\n';
  }
  const bool ok = failures == 0;
  char summary[160];
  std::snprintf(summary, sizeof(summary),
                "verdict: %s (%d/%d points within max(0.02, 3*sigma); worst gap %.4f at T=%d)\n",
                ok ? "PASS" : "FAIL", t_max - failures, t_max, worst_gap, worst_t);
  report << summary;

  std::cout << report.str();
  if (!a.out.empty()) {
    json sidecar{{"command", "compare"},     {"scheme", scheme.name()},
                 {"t_max", t_max},           {"trials", trials},
                 {"per_rep_collisions", per_rep}, {"gamma_bias_db", gamma_bias_db},
                 {"n_samples", sim.n_samples},    {"verdict", ok ? "PASS" : "FAIL"},
                 {"config", config_json(cfg)}};
    write_output(a.out, csv.str(), sidecar);
  }
  return ok ? kExitOk : kExitCompareFail;
}

// ------------------------------------------------------------------- sweep

struct SweepRow {
  double axis_value;
  std::string scheme;
  int k;
  std::string component;
  double value;
};

int cmd_sweep(const CommonArgs& a, const std::string& axis,
              const std::vector<double>& values, const std::string& schemes_csv,
              const std::string& engine, int t_ttis, bool decompose, int trials) {
  if (values.empty()) throw std::invalid_argument("sweep: --values must be nonempty");
  if (engine != "analytic" && engine != "simulated")
    throw std::invalid_argument("sweep: --engine must be analytic or simulated");
  if (decompose && engine != "analytic")
    throw std::invalid_argument("sweep: --decompose requires --engine analytic");
  if (decompose && axis == "t_ttis")
    throw std::invalid_argument("sweep: --decompose has no t_ttis dependence");

  const gfa::ScenarioConfig base = resolve_config(a);

  std::vector<gfa::Scheme> schemes;  // empty for axis=k: scheme comes from the value
  if (axis != "k") {
    std::stringstream ss(schemes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) schemes.push_back(gfa::Scheme::parse(tok));
    }
    if (schemes.empty()) throw std::invalid_argument("sweep: --schemes must be nonempty");
  }
  const bool needs_budget = axis != "t_ttis";
  if (needs_budget && !decompose && t_ttis < 1)
    throw std::invalid_argument("sweep: this axis needs --t <TTIs>");

  auto cfg_for = [&](double v) {
    gfa::ScenarioConfig cfg = base;
    if (axis == "density_ratio") {
      cfg.lambda_d = v * cfg.lambda_b;
    } else if (axis == "gamma_th_db") {
      cfg.gamma_th_db = v;
    } else if (axis == "k" || axis == "t_ttis") {
      // config unchanged
    } else {
      throw std::invalid_argument("sweep: unknown axis " + axis);
    }
    return cfg;
  };

  std::vector<SweepRow> rows;
  gfa::sim::SimOptions sim_opts;
  sim_opts.threads = a.threads;

  for (size_t vi = 0; vi < values.size(); ++vi) {
    const double v = values[vi];
    const gfa::ScenarioConfig cfg = cfg_for(v);
    std::vector<gfa::Scheme> point_schemes = schemes;
    if (axis == "k") point_schemes = {gfa::Scheme::krepetition(static_cast<int>(v))};
    for (const gfa::Scheme& s : point_schemes) {
      if (decompose) {
        using gfa::analytic::SuccessPart;
        const int k = s.repetitions();
        rows.push_back({v, s.name(), k, "access",
                        gfa::analytic::access_success_krep(1, k, cfg, 1.0)});
        rows.push_back({v, s.name(), k, "transmission",
                        gfa::analytic::access_success_krep_part(
                            1, k, cfg, 1.0, SuccessPart::transmission_only)});
        rows.push_back({v, s.name(), k, "non_collision",
                        gfa::analytic::access_success_krep_part(
                            1, k, cfg, 1.0, SuccessPart::non_collision_only)});
        continue;
      }
      const int budget = axis == "t_ttis" ? static_cast<int>(v) : t_ttis;
      double p;
      if (engine == "analytic") {
        p = gfa::analytic::failure_curve(cfg, s, budget).at(budget);
      } else {
        p = gfa::sim::estimate_failure_curve(cfg, s, budget, trials, sim_opts).at(budget);
      }
      rows.push_back({v, s.name(), s.repetitions(), "total", p});
    }
  }

  // deterministic output order: axis value, then scheme name
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    if (x.axis_value != y.axis_value) return x.axis_value < y.axis_value;
    return x.scheme < y.scheme;
  });

  std::ostringstream csv;
  csv << "axis_value,scheme,k," << (decompose ? "p_success" : "p_fail") << ",component\n";
  for (const auto& r : rows) {
    csv << gfa::format_sig(r.axis_value) << ',' << r.scheme << ',' << r.k << ','
        << gfa::format_sig(r.value) << ',' << r.component << '\n';
  }
  json sidecar{{"command", "sweep"},   {"axis", axis},
               {"values", values},     {"engine", engine},
               {"decompose", decompose}, {"t_ttis", t_ttis},
               {"trials", trials},     {"config", config_json(base)}};
  write_output(a.out, csv.str(), sidecar);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grant-free uplink HARQ latent access failure toolkit"};
  app.require_subcommand(1);

  CommonArgs ana_args, sim_args, cmp_args, swp_args;
  int ana_tmax = 40;
  int sim_horizon = 40, sim_trials = 40;
  bool sim_per_rep = false;
  std::string sim_dump;
  int cmp_tmax = 40, cmp_trials = 40;
  bool cmp_per_rep = false;
  double cmp_gamma_bias = 0.0;
  std::string swp_axis, swp_schemes = "reactive", swp_engine = "analytic";
  std::vector<double> swp_values;
  int swp_t = 0, swp_trials = 40;
  bool swp_decompose = false;

  CLI::App* ana = app.add_subcommand("analytic", "closed-form failure curve -> CSV");
  add_common_options(ana, &ana_args);
  ana->add_option("--tmax", ana_tmax, "latency horizon in TTIs")->check(CLI::PositiveNumber);

  CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo failure curve -> CSV");
  add_common_options(sim, &sim_args);
  sim->add_option("--horizon", sim_horizon, "latency horizon in TTIs")
      ->check(CLI::PositiveNumber);
  sim->add_option("--trials", sim_trials, "independent deployments");
  sim->add_flag("--per-rep-collisions", sim_per_rep,
                "pairwise per-repetition collision rule (sensitivity study)");
  sim->add_option("--dump-records", sim_dump, "write per-UE trial records CSV");

  CLI::App* cmp = app.add_subcommand("compare", "analytic vs simulated agreement report");
  add_common_options(cmp, &cmp_args);
  cmp->add_option("--tmax", cmp_tmax, "latency horizon in TTIs")->check(CLI::PositiveNumber);
  cmp->add_option("--trials", cmp_trials, "independent deployments");
  cmp->add_flag("--per-rep-collisions", cmp_per_rep,
                "pairwise per-repetition collision rule (sensitivity study)");
  cmp->add_option("--gamma-bias-db", cmp_gamma_bias,
                  "bias the analytic engine's SINR threshold (negative control)");

  CLI::App* swp = app.add_subcommand("sweep", "parameter sweep -> long CSV");
  add_common_options(swp, &swp_args);
  swp->add_option("--axis", swp_axis, "density_ratio | gamma_th_db | k | t_ttis")
      ->required();
  swp->add_option("--values", swp_values, "grid values")->required()->delimiter(',');
  swp->add_option("--schemes", swp_schemes, "comma list, e.g. reactive,krep4,proactive8");
  swp->add_option("--engine", swp_engine, "analytic | simulated");
  swp->add_option("--t", swp_t, "latency budget in TTIs for non-time axes");
  swp->add_flag("--decompose", swp_decompose,
                "emit round-1 success components (transmission / non-collision)");
  swp->add_option("--trials", swp_trials, "deployments per grid point (simulated engine)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ana->parsed()) return cmd_analytic(ana_args, ana_tmax);
    if (sim->parsed()) {
      if (sim_trials < 1) throw std::invalid_argument("--trials must be >= 1");
      return cmd_simulate(sim_args, sim_horizon, sim_trials, sim_per_rep, sim_dump);
    }
    if (cmp->parsed()) {
      if (cmp_trials < 1) throw std::invalid_argument("--trials must be >= 1");
      return cmd_compare(cmp_args, cmp_tmax, cmp_trials, cmp_per_rep, cmp_gamma_bias);
    }
    if (swp->parsed())
      return cmd_sweep(swp_args, swp_axis, swp_values, swp_schemes, swp_engine, swp_t,
                       swp_decompose, swp_trials);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
