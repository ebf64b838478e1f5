#pragma once

// Key-value run configuration.
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Every file must carry `schema_version = 1`. Unknown keys are
// rejected. Command-line flags `--key value` override file values.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tpump {

inline constexpr int kSchemaVersion = 1;

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// All recognised keys with defaults, in documentation order.
const std::vector<ConfigKey>& config_keys();

class Config {
 public:
  /// Every key at its default.
  Config();

  static Config parse(std::string_view text, std::string_view origin = "<string>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated numbers; empty string gives an empty list.
  std::vector<double> numbers(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Sorted `key=value` lines.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Worker count from TPUMP_WORKERS, else the OpenMP default.
int worker_count();

}  // namespace tpump
