#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "riscomp/aris_env.hpp"
#include "riscomp/energy.hpp"
#include "riscomp/moppo.hpp"
#include "riscomp/scenario.hpp"

namespace riscomp {

enum class ExperimentKind {
  PdfValidation,
  ErSweep,
  OutageSweep,
  ExhaustiveStar,
  EeSweep,
  OsumSweep,
  SplitSweep,
  DrlTrain,
  DrlEval,
};

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

enum class ValueType { Boolean, Integer, Real, Choice, Text, RealList, ChoiceList };

/// One recognised configuration key. Keys whose name ends in `_db` or `_dbm`
/// hold decibel values; every other quantity is linear.
struct KeySpec {
  std::string key;
  ValueType type = ValueType::Real;
  /// Empty for keys derived from others when omitted (star.beta_r,
  /// star.assignment, sweep.axes).
  std::string default_text;
  std::vector<std::string> choices;
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  std::size_t length = 0;     // exact list length when nonzero
  bool integral = false;      // list entries must be whole numbers
  bool hashed = true;         // part of the canonical form
  std::string help;
};

const std::vector<KeySpec>& config_schema();
const KeySpec* find_key(std::string_view key);

using ConfigValue =
    std::variant<bool, std::uint64_t, double, std::string, std::vector<double>,
                 std::vector<std::string>>;

/// Parses one value for `spec`; throws ConfigError with the reason.
ConfigValue parse_value(const KeySpec& spec, std::string_view text);
std::string format_value(const ConfigValue& v);

/// Settings of one experiment. Omitted keys take the defaults of the
/// chapter they belong to; an empty config is the two-BS STAR-RIS scenario
/// running the SINR distribution check.
class ExperimentConfig {
 public:
  /// Parses and stores a value, replacing any previous one.
  void set(const std::string& key, std::string_view text);
  void unset(const std::string& key);
  bool is_set(const std::string& key) const { return values_.count(key) != 0; }

  bool flag(const std::string& key) const;
  std::uint64_t integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  double real(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  ExperimentKind kind() const;
  std::uint64_t seed() const { return integer("seed"); }
  std::size_t trials() const { return count("trials"); }

  NetworkScenario star() const;
  MultiCellScenario multicell() const;
  AerialScenario aerial() const;
  TrainConfig train() const;
  ExhaustiveGrid exhaustive_grid() const;
  std::vector<Scheme> schemes() const;
  /// sweep.axes, or the kind's default axes when it is omitted.
  std::vector<std::string> sweep_axes() const;

  /// Every violated constraint, empty when the config is usable.
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing every violation.
  void validate() const;

  /// All hashed keys in schema order with their effective values.
  std::string canonical() const;
  std::uint64_t hash() const;

 private:
  ConfigValue value(const std::string& key) const;

  std::map<std::string, ConfigValue, std::less<>> values_;
};

/// Line-oriented `key = value` text; `#` starts a comment. Syntax errors,
/// unknown and repeated keys are reported with their line numbers, all at
/// once; then the result is validated.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Scheme from a name such as "ec", "oma-ec" or "nocomp-eo".
Scheme parse_scheme(const std::string& name);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace riscomp
