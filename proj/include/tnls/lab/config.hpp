#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tnls/evolution.hpp"
#include "tnls/torus_lattice.hpp"

namespace tnls::lab {

enum class Scenario {
  evolve,
  trapping,
  strichartz,
  bilinear,
  extinction,
  profile_suite,
  stability,
  blowup_probe,
  ground_state,
  norms,
};

std::string to_string(Scenario s);
/// Accepts both `profile_suite` and `profile-suite` spellings. Throws ConfigError naming `scenario`.
Scenario scenario_from_string(const std::string& name);

enum class ValueKind { real, integer, text, flag, reals, integers };

using Value = std::variant<double, std::int64_t, std::string, bool, std::vector<double>, std::vector<std::int64_t>>;

struct KeySpec {
  std::string section;  // "" for the top level
  std::string key;
  ValueKind kind;
  std::optional<std::string> fallback;  // default in config syntax; empty means no default
  std::string doc;
};

/// Every accepted key, in documentation order.
const std::vector<KeySpec>& schema();

/// Parsed and validated experiment configuration.
///
/// Syntax: `key = value` lines, `[section]` headers, `#` comments. Lists are written
/// `[a, b, c]` or as bare whitespace-separated numbers; a scalar given where a list of four
/// is expected is broadcast.
class Config {
 public:
  /// Throws ConfigError carrying the line number for syntax errors and the key name for
  /// unknown keys or failed validation.
  static Config parse(std::string_view text, const std::string& source = "<config>");
  /// Throws IoError if the file cannot be read.
  static Config load(const std::string& path);

  Scenario scenario() const noexcept { return scenario_; }

  /// Replaces one value (CLI overrides) and revalidates.
  void set(const std::string& section, const std::string& key, const std::string& text);

  bool provided(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key) const;
  std::vector<double> reals(const std::string& section, const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& section, const std::string& key) const;
  Vec4 vec4(const std::string& section, const std::string& key) const;

  /// Seed for random data; throws ConfigError naming `seed` when it was never given.
  std::uint64_t seed() const;
  bool has_seed() const noexcept { return seed_.has_value(); }

  TorusGeometry geometry() const;
  EvolutionParams evolution() const;

  /// Effective configuration with defaults filled, typed, in schema order.
  nlohmann::ordered_json echo() const;

 private:
  void fill_and_validate();
  const Value& lookup(const std::string& section, const std::string& key) const;

  Scenario scenario_ = Scenario::evolve;
  std::optional<std::uint64_t> seed_;
  std::map<std::pair<std::string, std::string>, Value> values_;
  std::map<std::pair<std::string, std::string>, std::string> raw_;
  std::string source_;
};

/// Text of the in-repo schema reference (one line per key).
std::string schema_reference();

}  // namespace tnls::lab
