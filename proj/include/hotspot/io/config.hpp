#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hotspot/model_config.hpp"
#include "hotspot/simqtl.hpp"
#include "hotspot/vb/fit.hpp"

namespace hotspot::io {

struct ConfigKey {
  std::string key;  // "section.name"
  std::string default_value;
  std::string doc;
};

/// Every accepted key with its default, in serialization order.
const std::vector<ConfigKey>& config_schema();

/// Flat key=value text grouped under [section] headers. Keys are stored as
/// "section.name"; unknown keys raise ConfigError.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  /// Canonical text; parse(serialize()) reproduces the config.
  std::string serialize() const;

  void set(const std::string& key, const std::string& value);
  /// "section.name=value".
  void apply_override(const std::string& assignment);
  /// Fills every schema key that is not set.
  Config resolved() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  /// Value or schema default.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  bool operator==(const Config& other) const { return values_ == other.values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Model spec for p predictors and q responses. An empty model.n0 calibrates
/// (n0, t0_sq) from model.e_p and model.v_p.
ModelSpec model_spec_from_config(const Config& cfg, std::size_t p, std::size_t q,
                                 CalibrationResult* calibration = nullptr);
vb::FitOptions fit_options_from_config(const Config& cfg);
sim::SimScenario scenario_from_config(const Config& cfg);

}  // namespace hotspot::io
