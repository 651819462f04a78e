#include "gfa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gfa {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": cannot parse '" + value + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": cannot parse '" + value + "' as an integer");
  }
}

std::vector<double> parse_ladder(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("power_ladder: empty entry");
    out.push_back(parse_double("power_ladder", item));
  }
  if (out.empty()) throw std::invalid_argument("power_ladder: empty list");
  return out;
}

// Shortest round-trippable decimal form.
std::string num_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back;
  for (int prec = 1; prec <= 16; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    back = std::strtod(probe, nullptr);
    if (back == v) return probe;
  }
  return buf;
}

}  // namespace

Scheme Scheme::krepetition(int k) {
  if (k < 1) throw std::invalid_argument("Scheme: K must be a positive integer");
  return {Kind::krepetition, k};
}

Scheme Scheme::proactive(int k_max) {
  if (k_max < 1) throw std::invalid_argument("Scheme: Kmax must be a positive integer");
  return {Kind::proactive, k_max};
}

std::string Scheme::name() const {
  switch (kind) {
    case Kind::reactive:
      return "reactive";
    case Kind::krepetition:
      return "krep" + std::to_string(k);
    case Kind::proactive:
      return "proactive" + std::to_string(k);
  }
  return "?";
}

Scheme Scheme::parse(std::string_view token) {
  std::string t(token);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "reactive" || t == "reac") return reactive();
  for (std::string_view prefix : {"krepetition", "krep", "k"}) {
    if (t.rfind(prefix, 0) == 0 && t.size() > prefix.size()) {
      return krepetition(static_cast<int>(parse_int("scheme", t.substr(prefix.size()))));
    }
  }
  for (std::string_view prefix : {"proactive", "proa", "p"}) {
    if (t.rfind(prefix, 0) == 0 && t.size() > prefix.size()) {
      return proactive(static_cast<int>(parse_int("scheme", t.substr(prefix.size()))));
    }
  }
  throw std::invalid_argument("scheme: unknown token '" + std::string(token) +
                              "' (expected reactive, krep<K> or proactive<Kmax>)");
}

double ScenarioConfig::power_level(int m) const {
  if (m < 1) throw std::invalid_argument("power_level: m must be >= 1");
  const size_t idx = std::min<size_t>(static_cast<size_t>(m) - 1, power_ladder.size() - 1);
  return power_ladder[idx];
}

void ScenarioConfig::validate() const {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("lambda_b must be > 0");
  if (!(lambda_d > 0.0)) throw std::invalid_argument("lambda_d must be > 0");
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw std::invalid_argument("p_a out of [0,1]");
  if (s_pilots < 1) throw std::invalid_argument("s_pilots must be >= 1");
  if (!(alpha > 2.0)) throw std::invalid_argument("alpha must be > 2");
  if (power_ladder.empty()) throw std::invalid_argument("power_ladder must be nonempty");
  for (size_t i = 0; i < power_ladder.size(); ++i) {
    if (!(power_ladder[i] > 0.0))
      throw std::invalid_argument("power_ladder entries must be > 0");
    if (i > 0 && power_ladder[i] < power_ladder[i - 1])
      throw std::invalid_argument("power_ladder must be nondecreasing");
  }
  if (!(tti_ms > 0.0)) throw std::invalid_argument("tti_ms must be > 0");
  if (!(sim_area_km2 > 0.0)) throw std::invalid_argument("sim_area_km2 must be > 0");
  if (!std::isfinite(rho_dbm)) throw std::invalid_argument("rho_dbm must be finite");
  if (!std::isfinite(gamma_th_db)) throw std::invalid_argument("gamma_th_db must be finite");
  if (!std::isfinite(sigma2_dbm)) throw std::invalid_argument("sigma2_dbm must be finite");
}

std::string ScenarioConfig::canonical_text() const {
  std::ostringstream os;
  os << "lambda_b = " << num_str(lambda_b) << "\n";
  os << "lambda_d = " << num_str(lambda_d) << "\n";
  os << "p_a = " << num_str(p_a) << "\n";
  os << "s_pilots = " << s_pilots << "\n";
  os << "rho_dbm = " << num_str(rho_dbm) << "\n";
  os << "gamma_th_db = " << num_str(gamma_th_db) << "\n";
  os << "alpha = " << num_str(alpha) << "\n";
  os << "sigma2_dbm = " << num_str(sigma2_dbm) << "\n";
  os << "power_ladder = ";
  for (size_t i = 0; i < power_ladder.size(); ++i)
    os << (i ? "," : "") << num_str(power_ladder[i]);
  os << "\n";
  os << "tti_ms = " << num_str(tti_ms) << "\n";
  os << "sim_area_km2 = " << num_str(sim_area_km2) << "\n";
  os << "seed = " << seed << "\n";
  return os.str();
}

std::uint64_t ScenarioConfig::hash() const {
  // FNV-1a over the canonical serialization
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double active_density(const ScenarioConfig& cfg) {
  return cfg.p_a * cfg.lambda_d / cfg.s_pilots;
}

ScenarioConfig parse_scenario(std::string_view text) {
  std::map<std::string, std::string> kv;
  size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument(key + ": duplicate key");
  }

  ScenarioConfig cfg;
  auto take = [&kv](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(key + ": mandatory field missing");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_optional = [&kv](const std::string& key, std::string* out) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    *out = it->second;
    kv.erase(it);
    return true;
  };

  cfg.lambda_b = parse_double("lambda_b", take("lambda_b"));
  cfg.lambda_d = parse_double("lambda_d", take("lambda_d"));
  cfg.p_a = parse_double("p_a", take("p_a"));
  cfg.s_pilots = static_cast<int>(parse_int("s_pilots", take("s_pilots")));
  cfg.rho_dbm = parse_double("rho_dbm", take("rho_dbm"));
  cfg.gamma_th_db = parse_double("gamma_th_db", take("gamma_th_db"));
  cfg.alpha = parse_double("alpha", take("alpha"));
  cfg.sigma2_dbm = parse_double("sigma2_dbm", take("sigma2_dbm"));
  cfg.power_ladder = parse_ladder(take("power_ladder"));

  std::string v;
  if (take_optional("tti_ms", &v)) cfg.tti_ms = parse_double("tti_ms", v);
  if (take_optional("sim_area_km2", &v)) cfg.sim_area_km2 = parse_double("sim_area_km2", v);
  if (take_optional("seed", &v)) cfg.seed = static_cast<std::uint64_t>(parse_int("seed", v));

  if (!kv.empty()) throw std::invalid_argument(kv.begin()->first + ": unknown field");

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write scenario file: " + path);
  out << cfg.canonical_text();
}

}  // namespace gfa
