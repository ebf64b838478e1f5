#include "tpump/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tpump/errors.hpp"

namespace tpump {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"schema_version", "1", "config schema version (must be 1)"},
      // model
      {"model", "spin_flip", "spin_flip | kink | cluster | higher_r"},
      {"r", "0", "order of the higher_r family"},
      {"n_sites", "9", "ring length N"},
      {"J", "1", "static coupling"},
      {"K", "0", "interaction strength"},
      {"g0", "10", "drive offset"},
      {"g1", "3", "drive amplitude"},
      {"omega", "0.02", "drive frequency"},
      {"phi0", "0", "drive phase"},
      {"b", "1/3", "modulation wave number p/q"},
      {"disorder_target", "none", "none | G | J"},
      {"disorder_delta", "0", "disorder half-width"},
      {"seed", "20240601", "master seed"},
      // integrator
      {"integrator", "cfm4_krylov", "cfm4_krylov | dense_midpoint"},
      {"max_dt", "0.5", "largest time step"},
      {"krylov_tol", "1e-11", "Lanczos error bound per substep"},
      {"krylov_dim", "40", "largest Krylov dimension"},
      {"renormalize_every", "0", "steps between renormalizations, 0 = never"},
      {"samples_per_period", "200", "trajectory samples per drive period"},
      // pump
      {"n_periods", "3", "periods evolved by `pump`"},
      {"filling", "1", "excitations per trimer in the prepared band (1 or 2)"},
      {"entropy", "true", "record both entanglement entropies"},
      {"output_dir", "out", "directory for CSV and JSON output"},
      // sweeps
      {"deltas", "0,0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5,2.75,3", "disorder half-widths"},
      {"n_realizations", "20", "disorder samples per delta"},
      {"disorder_periods", "3", "periods per disorder realization"},
      {"omegas", "", "drive frequencies; empty = 25 log-spaced points in [0.01, 0.6]"},
      {"frequency_periods", "9", "periods per frequency point"},
      // topology and spectra
      {"chern_family", "hofstadter", "hofstadter | aubry_andre"},
      {"Jx", "1", "Hofstadter hopping along x"},
      {"Jy", "1", "Hofstadter hopping along y"},
      {"band", "-1", "band index, -1 = all bands"},
      {"grid", "51", "plaquette grid points per side"},
      {"excitations", "1", "excitation-count sector of `spectrum`"},
      {"spectrum_samples", "200", "sample times over one period for `spectrum`"},
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool known_key(const std::string& k) {
  for (const auto& key : config_keys()) {
    if (key.name == k) return true;
  }
  return false;
}

}  // namespace

Config::Config() {
  for (const auto& k : config_keys()) values_[k.name] = k.default_value;
}

Config Config::parse(std::string_view text, std::string_view origin) {
  Config c;
  bool versioned = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (key == "schema_version") versioned = true;
    c.set(key, value);
  }
  if (!versioned) throw ConfigError(std::string(origin) + ": missing schema_version");
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
  if (key == "schema_version" && integer(key) != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + value + " (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  const std::string& v = get(key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw ConfigError(key + ": '" + v + "' is not a number");
  return x;
}

long Config::integer(const std::string& key) const {
  const std::string& v = get(key);
  long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
  return x;
}

std::uint64_t Config::unsigned_integer(const std::string& key) const {
  const std::string& v = get(key);
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError(key + ": '" + v + "' is not an unsigned integer");
  }
  return x;
}

bool Config::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(key + ": '" + t + "' is not a number");
    out.push_back(x);
  }
  return out;
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
  return s;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("TPUMP_WORKERS")) {
    int n = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || p != s.data() + s.size() || n < 1) {
      throw ConfigError("TPUMP_WORKERS must be a positive integer, got '" + std::string(s) + "'");
    }
    return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tpump
