#include "riscomp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "riscomp/error.hpp"
#include "riscomp/montecarlo.hpp"
#include "riscomp/units.hpp"

namespace riscomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kKinds{"pdf-validation", "er-sweep",    "outage-sweep",
                                      "exhaustive-star", "ee-sweep",   "osum-sweep",
                                      "split-sweep",    "drl-train",   "drl-eval"};
const std::vector<std::string> kAxes{"tx_power_dbm", "k_elements", "cooperating",
                                     "rate_threshold", "split"};
const std::vector<std::string> kSchemeNames{
    "no-ris",    "random",    "eo",          "ec",          "oma-no-ris",    "oma-random",
    "oma-eo",    "oma-ec",    "nocomp-no-ris", "nocomp-random", "nocomp-eo", "nocomp-ec"};
const std::vector<std::string> kVariants{"noma", "oma", "random-phases", "hover"};

KeySpec real(std::string key, std::string def, double lo, double hi, std::string help) {
  KeySpec k;
  k.key = std::move(key);
  k.type = ValueType::Real;
  k.default_text = std::move(def);
  k.min = lo;
  k.max = hi;
  k.help = std::move(help);
  return k;
}

KeySpec integer(std::string key, std::string def, double lo, double hi, std::string help) {
  KeySpec k = real(std::move(key), std::move(def), lo, hi, std::move(help));
  k.type = ValueType::Integer;
  return k;
}

KeySpec boolean(std::string key, std::string def, std::string help) {
  KeySpec k = real(std::move(key), std::move(def), -kInf, kInf, std::move(help));
  k.type = ValueType::Boolean;
  return k;
}

KeySpec choice(std::string key, std::string def, std::vector<std::string> choices,
               std::string help) {
  KeySpec k = real(std::move(key), std::move(def), -kInf, kInf, std::move(help));
  k.type = ValueType::Choice;
  k.choices = std::move(choices);
  return k;
}

KeySpec words(std::string key, std::string def, std::vector<std::string> choices,
              std::string help) {
  KeySpec k = choice(std::move(key), std::move(def), std::move(choices), std::move(help));
  k.type = ValueType::ChoiceList;
  return k;
}

KeySpec reals(std::string key, std::string def, double lo, double hi, std::size_t len,
              std::string help) {
  KeySpec k = real(std::move(key), std::move(def), lo, hi, std::move(help));
  k.type = ValueType::RealList;
  k.length = len;
  return k;
}

KeySpec counts(std::string key, std::string def, double lo, double hi, std::size_t len,
               std::string help) {
  KeySpec k = reals(std::move(key), std::move(def), lo, hi, len, std::move(help));
  k.integral = true;
  return k;
}

KeySpec position(std::string key, std::string def, std::string help) {
  return reals(std::move(key), std::move(def), -kInf, kInf, 3, std::move(help));
}

std::vector<KeySpec> build_schema() {
  std::vector<KeySpec> s;
  s.push_back(choice("kind", "pdf-validation", kKinds, "experiment to run"));
  s.push_back(integer("seed", "1", 0, 1.8446744073709552e19, "master seed"));
  s.push_back(integer("trials", "10000", 1, 1e9, "Monte Carlo realizations per point"));
  KeySpec out;
  out.key = "out";
  out.type = ValueType::Text;
  out.hashed = false;
  out.help = "output directory (the --out flag and RISCOMP_OUT take precedence in that order)";
  s.push_back(out);

  // Two-BS STAR-RIS cluster.
  s.push_back(position("star.bs1", "-50, 0, 25", "BS 1 position, m"));
  s.push_back(position("star.bs2", "50, 0, 25", "BS 2 position, m"));
  s.push_back(position("star.center1", "-40, 18, 1", "center user of cell 1, m"));
  s.push_back(position("star.center2", "30, 22, 1", "center user of cell 2, m"));
  s.push_back(position("star.edge_user", "0, 35, 1", "edge user, m"));
  s.push_back(position("star.ris", "0, 25, 5", "STAR-RIS, m"));
  s.push_back(real("star.alpha_bs_center", "3", 2, 10, "path-loss exponent BS to own center user"));
  s.push_back(real("star.alpha_bs_edge", "3.5", 2, 10, "path-loss exponent BS to edge user"));
  s.push_back(real("star.alpha_bs_ris", "3", 2, 10, "path-loss exponent BS to RIS"));
  s.push_back(real("star.alpha_ris_center", "2.7", 2, 10, "path-loss exponent RIS to center users"));
  s.push_back(real("star.alpha_ris_edge", "2.3", 2, 10, "path-loss exponent RIS to edge user"));
  s.push_back(real("star.alpha_interference", "4", 2, 10, "path-loss exponent of interfering links"));
  s.push_back(real("star.rho_o_db", "-30", -200, 0, "reference path loss at 1 m"));
  s.push_back(real("star.m_direct", "1", 0.5, 100, "Nakagami m of direct links"));
  s.push_back(real("star.m_ris", "2", 0.5, 100, "Nakagami m of RIS links"));
  s.push_back(real("star.kappa_bs_ris_db", "3", -50, 50, "Rician factor BS to RIS"));
  s.push_back(real("star.kappa_ris_center_db", "3", -50, 50, "Rician factor RIS to center users"));
  s.push_back(real("star.kappa_ris_edge_db", "4", -50, 50, "Rician factor RIS to edge user"));
  s.push_back(real("star.tx_power_dbm", "-10", -100, 100, "per-BS transmit power"));
  s.push_back(real("star.bandwidth_hz", "1e6", 1, 1e12, "bandwidth"));
  s.push_back(real("star.noise_figure_db", "12", 0, 100, "receiver noise figure"));
  s.push_back(real("star.zeta_edge", "0.7", 0.5, 1, "edge user's power share"));
  s.push_back(integer("star.k_elements", "34", 0, 1e6, "STAR-RIS elements"));
  s.push_back(real("star.beta_t", "0.5", 0, 1, "transmission energy share"));
  s.push_back(real("star.beta_r", "", 0, 1, "reflection energy share (1 - beta_t when omitted)"));
  s.push_back(counts("star.assignment", "", 0, 1e6, 2,
                     "elements serving BS 1 and BS 2 (even split when omitted)"));
  s.push_back(real("star.lambda_center_db", "0", -100, 100, "center user SINR threshold"));
  s.push_back(real("star.lambda_edge_db", "0", -100, 100, "edge user SINR threshold"));
  s.push_back(choice("star.fading", "nakagami", {"nakagami", "rayleigh-rician"},
                     "small-scale fading model"));
  s.push_back(choice("star.cascade_rule", "independent", {"independent", "coherent"},
                     "cascade moment rule of the Gamma fits"));

  // Multi-cell CoMP network.
  s.push_back(integer("mc.cells", "6", 1, 1000, "cells I"));
  s.push_back(integer("mc.cooperating", "4", 1, 1000, "cooperating BSs J"));
  s.push_back(integer("mc.k_elements", "70", 0, 1e6, "elements per RIS"));
  s.push_back(real("mc.tx_power_dbm", "0", -100, 100, "per-BS transmit power"));
  s.push_back(real("mc.bandwidth_hz", "10e6", 1, 1e12, "bandwidth"));
  s.push_back(real("mc.noise_figure_db", "0", 0, 100, "receiver noise figure"));
  s.push_back(real("mc.rho_o_db", "-30", -200, 0, "reference path loss at 1 m"));
  s.push_back(real("mc.d_center", "50", 1, 1e5, "BS to own center user, m"));
  s.push_back(real("mc.d_cross", "200", 1, 1e5, "BS to other cells' center users, m"));
  s.push_back(real("mc.d_edge", "150", 1, 1e5, "BS to edge user, m"));
  s.push_back(real("mc.d_bs_ris", "75", 1, 1e5, "BS to its RIS, m"));
  s.push_back(real("mc.d_ris_edge", "75", 1, 1e5, "RIS to edge user, m"));
  s.push_back(real("mc.alpha_ris", "2.7", 2, 10, "path-loss exponent of RIS hops"));
  s.push_back(real("mc.alpha_bs", "3", 2, 10, "path-loss exponent BS to own center user"));
  s.push_back(real("mc.alpha_edge", "3.5", 2, 10, "path-loss exponent BS to edge user"));
  s.push_back(real("mc.alpha_ici", "4", 2, 10, "path-loss exponent of inter-cell links"));
  s.push_back(real("mc.kappa_db", "3", -50, 50, "Rician factor of RIS links"));
  s.push_back(real("mc.zeta_edge", "0.7", 0.5, 1, "edge user's power share"));
  s.push_back(real("mc.r_center_min", "1", 0, 100, "center user target rate, bps/Hz"));
  s.push_back(real("mc.r_edge_min", "0.5", 0, 100, "edge user target rate, bps/Hz"));
  s.push_back(real("mc.amp_efficiency", "0.4", 1e-6, 1, "power amplifier efficiency"));
  s.push_back(real("mc.static_power_dbm", "30", -100, 100, "static power per BS"));
  s.push_back(real("mc.element_power_dbm", "5", -100, 100, "power per RIS element"));

  // Aerial RIS cluster.
  s.push_back(real("aerial.half_width", "75", 1e-3, 1e5, "flight area is [-w, w]^2, m"));
  s.push_back(position("aerial.bs1", "-35, -35, 25", "BS 1 position, m"));
  s.push_back(position("aerial.bs2", "35, 35, 25", "BS 2 position, m"));
  s.push_back(position("aerial.center1", "-50, -10, 0", "center user of cell 1, m"));
  s.push_back(position("aerial.center2", "50, 10, 0", "center user of cell 2, m"));
  s.push_back(position("aerial.edge_user", "40, -45, 0", "edge user, m"));
  s.push_back(reals("aerial.obstacles", "15, 5, 50, 35, -25, 50", -kInf, kInf, 0,
                    "obstacle positions as x, y, z triples, m"));
  s.push_back(real("aerial.ris_altitude", "50", 0, 1e4, "UAV altitude, m"));
  s.push_back(reals("aerial.start", "0, 35", -kInf, kInf, 2, "UAV start, m"));
  s.push_back(real("aerial.d_min", "10", 1e-6, 1e4, "safety distance to obstacles, m"));
  s.push_back(real("aerial.step_m", "5", 1e-6, 1e4, "UAV displacement per move, m"));
  s.push_back(integer("aerial.k_elements", "120", 1, 1e5, "RIS elements"));
  s.push_back(integer("aerial.horizon", "250", 1, 1e7, "slots per episode"));
  s.push_back(real("aerial.r_center_min", "0.5", 0, 100, "center user target rate, bps/Hz"));
  s.push_back(real("aerial.r_edge_min", "0.2", 0, 100, "edge user target rate, bps/Hz"));
  s.push_back(real("aerial.k_viol", "7", 0, 1e6, "safety penalty"));
  s.push_back(real("aerial.tx_power_dbm", "20", -100, 100, "per-BS transmit power"));
  s.push_back(real("aerial.bandwidth_hz", "10e6", 1, 1e12, "bandwidth"));
  s.push_back(real("aerial.noise_figure_db", "0", 0, 100, "receiver noise figure"));
  s.push_back(real("aerial.rho_o_db", "-30", -200, 0, "reference path loss at 1 m"));
  s.push_back(real("aerial.alpha_direct", "3", 2, 10, "path-loss exponent of direct links"));
  s.push_back(real("aerial.alpha_ris", "2.2", 2, 10, "path-loss exponent of RIS hops"));
  s.push_back(real("aerial.alpha_interference", "3.5", 2, 10, "path-loss exponent of interference"));
  s.push_back(real("aerial.kappa_db", "3", -50, 50, "Rician factor of RIS links"));
  s.push_back(real("aerial.lambda_init", "0.75", 0.5, 1, "edge share at reset"));
  s.push_back(choice("aerial.access", "noma", {"noma", "oma"}, "multiple access scheme"));
  s.push_back(choice("aerial.phases", "learned", {"learned", "random"},
                     "use the agent's phases or uniform random ones"));

  // MO-PPO.
  s.push_back(real("train.learning_rate", "2.75e-4", 0, 1, "Adam step size"));
  s.push_back(real("train.clip_eps", "0.1", 0, 1, "PPO clip range"));
  s.push_back(real("train.gamma", "0.98", 0, 1, "discount factor"));
  s.push_back(integer("train.episodes", "750", 1, 1e7, "training episodes"));
  s.push_back(integer("train.epochs", "20", 1, 1e5, "epochs per update"));
  s.push_back(integer("train.batch", "128", 1, 1e7, "minibatch size"));
  s.push_back(integer("train.rollout", "128", 1, 1e7, "advantage window T-hat"));
  s.push_back(real("train.value_coef", "0.5", 0, 1e3, "critic loss weight"));
  s.push_back(real("train.entropy_coef", "0.01", 0, 1e3, "entropy bonus weight"));
  s.push_back(real("train.max_grad_norm", "0.5", 1e-12, 1e6, "gradient norm clip per network"));
  s.push_back(boolean("train.normalize_rewards", "true",
                      "scale rewards by the running std of the discounted return"));
  s.push_back(integer("train.hidden", "64", 1, 1e5, "neurons per hidden layer"));
  s.push_back(real("train.log_std_init", "-0.5", -5, 2, "initial Gaussian log std"));
  s.push_back(boolean("train.hover", "false", "pin the UAV (drl-eval only)"));
  s.push_back(integer("train.episodes_per_update", "1", 1, 1e6, "episodes pooled per update"));
  s.push_back(boolean("train.full_pass", "false", "sweep all of the pool each epoch"));

  // DRL experiments.
  s.push_back(words("drl.variants", "noma", kVariants, "configurations trained by drl-train"));
  s.push_back(integer("drl.eval_episodes", "10", 1, 1e6, "greedy evaluation episodes"));
  s.push_back(integer("drl.window", "100", 1, 1e7, "moving-average window of the learning curve"));
  s.push_back(boolean("drl.exhaustive", "false", "also run the exhaustive static baseline"));
  KeySpec ckpt;
  ckpt.key = "drl.checkpoint";
  ckpt.type = ValueType::Text;
  ckpt.help = "policy checkpoint read by drl-eval";
  s.push_back(ckpt);

  s.push_back(reals("exhaustive.center", "0, 35", -kInf, kInf, 2, "grid center, m"));
  s.push_back(real("exhaustive.spacing", "10", 0, 1e5, "grid spacing, m"));
  s.push_back(integer("exhaustive.points", "5", 1, 1e4, "grid points per axis"));
  s.push_back(integer("exhaustive.phase_levels", "8", 1, 1e4, "phase levels per element"));
  s.push_back(integer("exhaustive.lambda_levels", "5", 1, 1e4, "edge share levels per BS"));
  s.push_back(integer("exhaustive.draws", "200", 1, 1e9, "common fading draws"));

  // Sweeps.
  KeySpec axes = words("sweep.axes", "", kAxes, "swept parameters, outermost first");
  s.push_back(axes);
  s.push_back(words("sweep.schemes", "no-ris, random, eo, ec", kSchemeNames,
                    "multi-cell curves"));
  s.push_back(reals("sweep.tx_power_dbm", "-20:5:10", -100, 100, 0, "transmit powers"));
  s.push_back(counts("sweep.k_elements", "30:20:150", 0, 1e6, 0, "RIS element counts"));
  s.push_back(counts("sweep.cooperating", "1:1:6", 1, 1000, 0, "cooperating BS counts"));
  s.push_back(reals("sweep.rate_threshold", "0.5:0.5:3", 0, 100, 0,
                    "common target rate of all users, bps/Hz"));
  s.push_back(reals("sweep.split", "0:0.25:1", 0, 1, 0, "cancelling share of RIS elements"));
  s.push_back(counts("sweep.k_r1", "0:2:34", 0, 1e6, 0, "elements assigned to BS 1"));
  s.push_back(reals("sweep.beta_t", "0.1:0.1:0.9", 0, 1, 0, "transmission energy shares"));
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto c = s.find(',', pos);
    out.push_back(trim(s.substr(pos, c == std::string_view::npos ? c : c - pos)));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

double parse_number(std::string_view t) {
  t = trim(t);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || p != end || t.empty())
    throw ConfigError("'" + std::string(t) + "' is not a number");
  if (!std::isfinite(v)) throw ConfigError("'" + std::string(t) + "' is not finite");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void check_range(const KeySpec& spec, double v) {
  if (v < spec.min || v > spec.max) {
    std::ostringstream m;
    m << format_number(v) << " outside [" << format_number(spec.min) << ", "
      << format_number(spec.max) << "]";
    throw ConfigError(m.str());
  }
}

/// "a:step:b" with both ends included (up to rounding).
void expand_range(std::string_view item, std::vector<double>& out) {
  const auto c1 = item.find(':');
  const auto c2 = item.find(':', c1 + 1);
  if (c2 == std::string_view::npos || item.find(':', c2 + 1) != std::string_view::npos)
    throw ConfigError("range '" + std::string(item) + "' must read start:step:stop");
  const double a = parse_number(item.substr(0, c1));
  const double step = parse_number(item.substr(c1 + 1, c2 - c1 - 1));
  const double b = parse_number(item.substr(c2 + 1));
  if (step == 0.0 || (b - a) / step < 0.0)
    throw ConfigError("range '" + std::string(item) + "' does not reach its stop value");
  const double n = std::floor((b - a) / step + 1e-9);
  if (n > 1e6) throw ConfigError("range '" + std::string(item) + "' is too long");
  for (double i = 0; i <= n; ++i) out.push_back(a + i * step);
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

Vec3 as_vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

const std::map<std::string, ConfigValue, std::less<>>& parsed_defaults() {
  static const auto defaults = [] {
    std::map<std::string, ConfigValue, std::less<>> m;
    for (const auto& k : config_schema())
      if (!k.default_text.empty() || k.type == ValueType::Text)
        m.emplace(k.key, parse_value(k, k.default_text));
    return m;
  }();
  return defaults;
}

}  // namespace

std::string kind_name(ExperimentKind k) { return kKinds.at(static_cast<std::size_t>(k)); }

ExperimentKind parse_kind(const std::string& name) {
  const auto it = std::find(kKinds.begin(), kKinds.end(), name);
  if (it == kKinds.end()) throw ConfigError("unknown experiment kind '" + name + "'");
  return static_cast<ExperimentKind>(it - kKinds.begin());
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

ConfigValue parse_value(const KeySpec& spec, std::string_view raw) {
  const std::string_view t = trim(raw);
  switch (spec.type) {
    case ValueType::Boolean:
      if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
      if (t == "false" || t == "no" || t == "off" || t == "0") return false;
      throw ConfigError("'" + std::string(t) + "' is not a boolean");
    case ValueType::Integer: {
      std::uint64_t v = 0;
      const auto* end = t.data() + t.size();
      const auto [p, ec] = std::from_chars(t.data(), end, v);
      if (ec != std::errc() || p != end || t.empty())
        throw ConfigError("'" + std::string(t) + "' is not a nonnegative integer");
      check_range(spec, static_cast<double>(v));
      return v;
    }
    case ValueType::Real: {
      const double v = parse_number(t);
      check_range(spec, v);
      return v;
    }
    case ValueType::Choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), t) == spec.choices.end())
        throw ConfigError("'" + std::string(t) + "' is not one of " + join(spec.choices, ", "));
      return std::string(t);
    case ValueType::Text:
      return std::string(t);
    case ValueType::RealList: {
      std::vector<double> v;
      for (auto item : split_commas(t)) {
        if (item.empty()) throw ConfigError("empty list entry");
        if (item.find(':') != std::string_view::npos)
          expand_range(item, v);
        else
          v.push_back(parse_number(item));
      }
      for (double x : v) {
        check_range(spec, x);
        if (spec.integral && x != std::floor(x))
          throw ConfigError(format_number(x) + " is not a whole number");
      }
      if (spec.length && v.size() != spec.length)
        throw ConfigError("expected " + std::to_string(spec.length) + " values, got " +
                          std::to_string(v.size()));
      return v;
    }
    case ValueType::ChoiceList: {
      std::vector<std::string> v;
      for (auto item : split_commas(t)) {
        if (std::find(spec.choices.begin(), spec.choices.end(), item) == spec.choices.end())
          throw ConfigError("'" + std::string(item) + "' is not one of " +
                            join(spec.choices, ", "));
        if (std::find(v.begin(), v.end(), item) != v.end())
          throw ConfigError("'" + std::string(item) + "' listed twice");
        v.emplace_back(item);
      }
      return v;
    }
  }
  throw ConfigError("unsupported value type");
}

std::string format_value(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::vector<std::string> s;
          for (double d : x) s.push_back(format_number(d));
          return join(s, ", ");
        } else {
          return join(x, ", ");
        }
      },
      v);
}

void ExperimentConfig::set(const std::string& key, std::string_view text) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  try {
    values_[key] = parse_value(*spec, text);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void ExperimentConfig::unset(const std::string& key) { values_.erase(key); }

ConfigValue ExperimentConfig::value(const std::string& key) const {
  if (const auto it = values_.find(key); it != values_.end()) return it->second;
  if (const auto it = parsed_defaults().find(key); it != parsed_defaults().end())
    return it->second;
  if (key == "star.beta_r") return 1.0 - real("star.beta_t");
  if (key == "star.assignment") {
    const auto k = static_cast<double>(count("star.k_elements"));
    return std::vector<double>{std::ceil(k / 2.0), std::floor(k / 2.0)};
  }
  if (key == "sweep.axes") {
    switch (kind()) {
      case ExperimentKind::ErSweep:
      case ExperimentKind::OutageSweep:
      case ExperimentKind::OsumSweep: return std::vector<std::string>{"tx_power_dbm"};
      case ExperimentKind::EeSweep: return std::vector<std::string>{"cooperating"};
      case ExperimentKind::SplitSweep: return std::vector<std::string>{"cooperating", "split"};
      default: return std::vector<std::string>{};
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

bool ExperimentConfig::flag(const std::string& key) const { return std::get<bool>(value(key)); }

std::uint64_t ExperimentConfig::integer(const std::string& key) const {
  return std::get<std::uint64_t>(value(key));
}

std::size_t ExperimentConfig::count(const std::string& key) const {
  return static_cast<std::size_t>(integer(key));
}

double ExperimentConfig::real(const std::string& key) const { return std::get<double>(value(key)); }

std::string ExperimentConfig::text(const std::string& key) const {
  return std::get<std::string>(value(key));
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  return std::get<std::vector<double>>(value(key));
}

std::vector<std::string> ExperimentConfig::words(const std::string& key) const {
  return std::get<std::vector<std::string>>(value(key));
}

ExperimentKind ExperimentConfig::kind() const { return parse_kind(text("kind")); }

std::vector<std::string> ExperimentConfig::sweep_axes() const { return words("sweep.axes"); }

NetworkScenario ExperimentConfig::star() const {
  NetworkScenario s;
  s.bs = {as_vec3(reals("star.bs1")), as_vec3(reals("star.bs2"))};
  s.center_users = {as_vec3(reals("star.center1")), as_vec3(reals("star.center2"))};
  s.edge_user = as_vec3(reals("star.edge_user"));
  s.ris = as_vec3(reals("star.ris"));
  s.alpha_bs_center = real("star.alpha_bs_center");
  s.alpha_bs_edge = real("star.alpha_bs_edge");
  s.alpha_bs_ris = real("star.alpha_bs_ris");
  s.alpha_ris_center = real("star.alpha_ris_center");
  s.alpha_ris_edge = real("star.alpha_ris_edge");
  s.alpha_interference = real("star.alpha_interference");
  s.rho_o = db_to_linear(real("star.rho_o_db"));
  s.m_direct = real("star.m_direct");
  s.m_ris = real("star.m_ris");
  s.kappa_bs_ris = db_to_linear(real("star.kappa_bs_ris_db"));
  s.kappa_ris_center = db_to_linear(real("star.kappa_ris_center_db"));
  s.kappa_ris_edge = db_to_linear(real("star.kappa_ris_edge_db"));
  s.tx_power = dbm_to_watts(real("star.tx_power_dbm"));
  s.noise_power = noise_power_watts(real("star.bandwidth_hz"), real("star.noise_figure_db"));
  s.zeta_edge = real("star.zeta_edge");
  s.zeta_center = 1.0 - s.zeta_edge;
  s.k_elements = count("star.k_elements");
  s.beta_t = real("star.beta_t");
  const auto a = reals("star.assignment");
  s.assignment = {static_cast<std::size_t>(a.at(0)), static_cast<std::size_t>(a.at(1))};
  s.lambda_center = db_to_linear(real("star.lambda_center_db"));
  s.lambda_edge = db_to_linear(real("star.lambda_edge_db"));
  s.fading = text("star.fading") == "nakagami" ? FadingModel::Nakagami : FadingModel::RayleighRician;
  s.rule = text("star.cascade_rule") == "independent" ? CascadeMomentRule::IndependentElements
                                                     : CascadeMomentRule::CoherentScaling;
  return s;
}

MultiCellScenario ExperimentConfig::multicell() const {
  MultiCellScenario s;
  s.cells = count("mc.cells");
  s.cooperating = count("mc.cooperating");
  s.k_elements = count("mc.k_elements");
  s.tx_power_dbm = real("mc.tx_power_dbm");
  s.bandwidth_hz = real("mc.bandwidth_hz");
  s.noise_figure_db = real("mc.noise_figure_db");
  s.rho_o = db_to_linear(real("mc.rho_o_db"));
  s.d_center = real("mc.d_center");
  s.d_cross = real("mc.d_cross");
  s.d_edge = real("mc.d_edge");
  s.d_bs_ris = real("mc.d_bs_ris");
  s.d_ris_edge = real("mc.d_ris_edge");
  s.alpha_ris = real("mc.alpha_ris");
  s.alpha_bs = real("mc.alpha_bs");
  s.alpha_edge = real("mc.alpha_edge");
  s.alpha_ici = real("mc.alpha_ici");
  s.kappa = db_to_linear(real("mc.kappa_db"));
  s.zeta_edge = real("mc.zeta_edge");
  s.thresholds = {real("mc.r_center_min"), real("mc.r_edge_min")};
  s.amp_efficiency = real("mc.amp_efficiency");
  s.static_power_dbm = real("mc.static_power_dbm");
  s.element_power_dbm = real("mc.element_power_dbm");
  return s;
}

AerialScenario ExperimentConfig::aerial() const {
  AerialScenario s;
  s.half_width = real("aerial.half_width");
  s.bs = {as_vec3(reals("aerial.bs1")), as_vec3(reals("aerial.bs2"))};
  s.center_users = {as_vec3(reals("aerial.center1")), as_vec3(reals("aerial.center2"))};
  s.edge_user = as_vec3(reals("aerial.edge_user"));
  const auto obs = reals("aerial.obstacles");
  s.obstacles.clear();
  for (std::size_t i = 0; i + 2 < obs.size(); i += 3)
    s.obstacles.push_back({obs[i], obs[i + 1], obs[i + 2]});
  s.ris_altitude = real("aerial.ris_altitude");
  const auto st = reals("aerial.start");
  s.start = {st.at(0), st.at(1)};
  s.d_min = real("aerial.d_min");
  s.step_m = real("aerial.step_m");
  s.k_elements = count("aerial.k_elements");
  s.horizon = count("aerial.horizon");
  s.r_center_min = real("aerial.r_center_min");
  s.r_edge_min = real("aerial.r_edge_min");
  s.k_viol = real("aerial.k_viol");
  s.tx_power_dbm = real("aerial.tx_power_dbm");
  s.bandwidth_hz = real("aerial.bandwidth_hz");
  s.noise_figure_db = real("aerial.noise_figure_db");
  s.rho_o = db_to_linear(real("aerial.rho_o_db"));
  s.alpha_direct = real("aerial.alpha_direct");
  s.alpha_ris = real("aerial.alpha_ris");
  s.alpha_interference = real("aerial.alpha_interference");
  s.kappa = db_to_linear(real("aerial.kappa_db"));
  s.lambda_init = real("aerial.lambda_init");
  s.access = text("aerial.access") == "noma" ? AerialAccess::Noma : AerialAccess::Oma;
  s.random_phases = text("aerial.phases") == "random";
  return s;
}

TrainConfig ExperimentConfig::train() const {
  TrainConfig c;
  c.learning_rate = real("train.learning_rate");
  c.clip_eps = real("train.clip_eps");
  c.gamma = real("train.gamma");
  c.episodes = count("train.episodes");
  c.epochs = count("train.epochs");
  c.batch = count("train.batch");
  c.rollout = count("train.rollout");
  c.k_viol = real("aerial.k_viol");
  c.value_coef = real("train.value_coef");
  c.entropy_coef = real("train.entropy_coef");
  c.max_grad_norm = real("train.max_grad_norm");
  c.normalize_rewards = flag("train.normalize_rewards");
  c.hidden = count("train.hidden");
  c.log_std_init = real("train.log_std_init");
  c.hover = flag("train.hover");
  c.episodes_per_update = count("train.episodes_per_update");
  c.full_pass = flag("train.full_pass");
  return c;
}

ExhaustiveGrid ExperimentConfig::exhaustive_grid() const {
  ExhaustiveGrid g;
  const auto c = reals("exhaustive.center");
  g.center = {c.at(0), c.at(1)};
  g.spacing = real("exhaustive.spacing");
  g.points_per_axis = count("exhaustive.points");
  g.phase_levels = count("exhaustive.phase_levels");
  g.lambda_levels = count("exhaustive.lambda_levels");
  g.draws = count("exhaustive.draws");
  g.seed = seed();
  return g;
}

Scheme parse_scheme(const std::string& name) {
  Scheme sc;
  sc.name = name;
  std::string_view rest = name;
  if (rest.rfind("oma-", 0) == 0) {
    sc.access = Access::Oma;
    rest.remove_prefix(4);
  } else if (rest.rfind("nocomp-", 0) == 0) {
    sc.comp = false;
    rest.remove_prefix(7);
  }
  if (rest == "no-ris")
    sc.ris = NetworkMode::NoRis;
  else if (rest == "random")
    sc.ris = NetworkMode::Random;
  else if (rest == "eo")
    sc.ris = NetworkMode::EO;
  else if (rest == "ec")
    sc.ris = NetworkMode::EC;
  else
    throw ConfigError("unknown scheme '" + name + "'");
  return sc;
}

std::vector<Scheme> ExperimentConfig::schemes() const {
  std::vector<Scheme> out;
  for (const auto& n : words("sweep.schemes")) out.push_back(parse_scheme(n));
  return out;
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  const ExperimentKind k = kind();

  const double bt = real("star.beta_t");
  const double br = real("star.beta_r");
  if (std::abs(bt + br - 1.0) > 1e-9)
    v.push_back("star.beta_t + star.beta_r = " + format_number(bt + br) +
                ", but the energy-splitting invariant requires beta_t + beta_r = 1");
  const auto asg = reals("star.assignment");
  if (asg.size() == 2 && asg[0] + asg[1] != static_cast<double>(count("star.k_elements")))
    v.push_back("star.assignment sums to " + format_number(asg[0] + asg[1]) +
                " but star.k_elements is " + std::to_string(count("star.k_elements")));
  if (count("mc.cooperating") > count("mc.cells"))
    v.push_back("mc.cooperating exceeds mc.cells");
  if (reals("aerial.obstacles").size() % 3 != 0)
    v.push_back("aerial.obstacles must hold x, y, z triples");
  if (k == ExperimentKind::PdfValidation && trials() < kKsMinSamples)
    v.push_back("trials must be at least " + std::to_string(kKsMinSamples) +
                " for the KS test");
  if (k == ExperimentKind::DrlEval && text("drl.checkpoint").empty())
    v.push_back("drl-eval needs drl.checkpoint");

  const auto axes = sweep_axes();
  const auto allow = [&](std::initializer_list<const char*> ok, std::size_t max_axes,
                         bool required) {
    if (axes.size() > max_axes || (required && axes.empty()))
      v.push_back("sweep.axes: " + kind_name(k) + " takes " +
                  (required ? "between 1 and " : "at most ") + std::to_string(max_axes) +
                  " axes");
    for (const auto& a : axes)
      if (std::none_of(ok.begin(), ok.end(), [&](const char* o) { return a == o; }))
        v.push_back("sweep.axes: '" + a + "' is not a valid axis for " + kind_name(k));
  };
  switch (k) {
    case ExperimentKind::ErSweep:
    case ExperimentKind::OutageSweep: allow({"tx_power_dbm", "k_elements"}, 1, true); break;
    case ExperimentKind::EeSweep:
    case ExperimentKind::OsumSweep:
    case ExperimentKind::SplitSweep:
      allow({"tx_power_dbm", "k_elements", "cooperating", "rate_threshold", "split"}, 5, true);
      if (k == ExperimentKind::SplitSweep &&
          std::find(axes.begin(), axes.end(), "split") == axes.end())
        v.push_back("sweep.axes: split-sweep must sweep 'split'");
      break;
    case ExperimentKind::DrlTrain: allow({"tx_power_dbm", "k_elements"}, 1, false); break;
    default: allow({}, 0, false); break;
  }
  for (const auto& a : axes)
    if (reals("sweep." + a).empty()) v.push_back("sweep." + a + " is empty");
  if (std::find(axes.begin(), axes.end(), "cooperating") != axes.end())
    for (double j : reals("sweep.cooperating"))
      if (j > static_cast<double>(count("mc.cells")))
        v.push_back("sweep.cooperating value " + format_number(j) + " exceeds mc.cells");
  if (k == ExperimentKind::ExhaustiveStar) {
    if (reals("sweep.k_r1").empty() || reals("sweep.beta_t").empty())
      v.push_back("exhaustive-star needs sweep.k_r1 and sweep.beta_t");
    for (double k1 : reals("sweep.k_r1"))
      if (k1 > static_cast<double>(count("star.k_elements")))
        v.push_back("sweep.k_r1 value " + format_number(k1) + " exceeds star.k_elements");
  }
  if (words("sweep.schemes").empty() &&
      (k == ExperimentKind::EeSweep || k == ExperimentKind::OsumSweep ||
       k == ExperimentKind::SplitSweep))
    v.push_back("sweep.schemes is empty");
  if (k == ExperimentKind::DrlTrain && words("drl.variants").empty())
    v.push_back("drl.variants is empty");

  const auto guard = [&](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      v.push_back(std::string(what) + ": " + e.what());
    }
  };
  guard("star scenario", [&] { star().validate(); });
  guard("multi-cell scenario", [&] { multicell().validate(); });
  guard("aerial scenario", [&] { aerial().validate(); });
  guard("training", [&] { train().validate(); });
  return v;
}

void ExperimentConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ConfigError(msg);
}

std::string ExperimentConfig::canonical() const {
  std::string s;
  for (const auto& k : config_schema()) {
    if (!k.hashed) continue;
    s += k.key;
    s += " = ";
    s += format_value(value(k.key));
    s += '\n';
  }
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, std::size_t> seen;
  std::string line;
  for (std::size_t n = 1; std::getline(is, line); ++n) {
    std::string_view body = line;
    if (const auto h = body.find('#'); h != std::string_view::npos) body = body.substr(0, h);
    body = trim(body);
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(n) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key(trim(body.substr(0, eq)));
    if (!find_key(key)) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (const auto it = seen.find(key); it != seen.end()) {
      errors.push_back(where + "'" + key + "' already set on line " + std::to_string(it->second));
      continue;
    }
    seen.emplace(key, n);
    try {
      cfg.set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      errors.push_back(where + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "cannot parse configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
  std::istringstream is(text);
  return parse_config(is, source);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f, path);
}

}  // namespace riscomp
