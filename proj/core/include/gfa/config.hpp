#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gfa {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

/// HARQ scheme selector. Reactive is K-repetition with a single repetition
/// per round trip; Proactive carries the maximum repetition count and may
/// terminate a round early on ACK.
struct Scheme {
  enum class Kind { reactive, krepetition, proactive };

  Kind kind = Kind::reactive;
  int k = 1;  // repetitions per round trip (K or Kmax); 1 for reactive

  static Scheme reactive() { return {Kind::reactive, 1}; }
  static Scheme krepetition(int k);
  static Scheme proactive(int k_max);

  int repetitions() const { return k; }
  bool is_proactive() const { return kind == Kind::proactive; }

  // "reactive", "krep4", "proactive8" -- used in CSV output and CLI parsing
  std::string name() const;
  static Scheme parse(std::string_view token);

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Full scenario parameter set shared by the analytical and simulation
/// engines. Files and this struct carry dB/dBm values; the linear
/// counterparts are exposed as accessors so they can never go stale.
struct ScenarioConfig {
  double lambda_b = 1.0;        // BS density, BS/km^2
  double lambda_d = 20000.0;    // UE density, UE/km^2
  double p_a = 0.0011;          // per-buffer activation probability
  int s_pilots = 48;            // orthogonal pilots S
  double rho_dbm = -130.0;      // power-control target rho, dBm
  double gamma_th_db = -2.0;    // SINR threshold, dB
  double alpha = 4.0;           // path-loss exponent
  double sigma2_dbm = -126.2;   // noise power, dBm
  std::vector<double> power_ladder = {1.0};  // g_1 <= ... <= g_J, linear units
  double tti_ms = 0.125;
  double sim_area_km2 = 400.0;  // simulation disc area; analytic engine ignores
  std::uint64_t seed = 0;

  double gamma_th_lin() const { return db_to_linear(gamma_th_db); }
  double rho_mw() const { return db_to_linear(rho_dbm); }
  double sigma2_mw() const { return db_to_linear(sigma2_dbm); }
  double noise_over_rho() const { return db_to_linear(sigma2_dbm - rho_dbm); }

  // Power level unit g_m for HARQ round trip m (1-based). Rounds beyond the
  // ladder reuse the final (maximum allowable) level g_J.
  double power_level(int m) const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Canonical key=value serialization (normalized field order/format).
  std::string canonical_text() const;

  /// FNV-1a hash of the canonical text; identifies a scenario in outputs.
  std::uint64_t hash() const;
};

/// Density of active UEs contending on one pilot: p_a * lambda_d / S.
double active_density(const ScenarioConfig& cfg);

/// Parse the flat key=value scenario format. All fields are mandatory
/// except tti_ms, sim_area_km2 and seed. Throws std::invalid_argument
/// with the offending field named.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

}  // namespace gfa
