// Command-line front end: run a config, reproduce a figure preset, or check a config.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "riscomp/config.hpp"
#include "riscomp/error.hpp"
#include "riscomp/experiments.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string out;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--trials", o.trials, "Monte Carlo realizations per point (overrides the config)");
  cmd->add_option("--out", o.out, "output directory (default: config 'out', then $RISCOMP_OUT, "
                                  "then ./riscomp-out)");
}

void apply(riscomp::ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.set("seed", std::to_string(*o.seed));
  if (o.trials) cfg.set("trials", std::to_string(*o.trials));
  cfg.validate();
}

int execute(const riscomp::ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto r = riscomp::run_experiment(cfg, dir, &std::cerr);
  for (const auto& f : r.files) std::cout << (r.dir / f).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation toolkit for RIS-assisted CoMP-NOMA networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", riscomp::kVersion);

  std::string config_path;
  Overrides run_o;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file (key = value lines)")->required();
  add_overrides(run, run_o);

  std::string figure;
  Overrides rep_o;
  bool print_only = false;
  auto* rep = app.add_subcommand("reproduce", "run the preset of a figure");
  rep->add_option("figure-id", figure, "preset id, e.g. fig4.2")->required();
  rep->add_flag("--print", print_only, "print the preset config and exit");
  add_overrides(rep, rep_o);

  std::string check_path;
  auto* val = app.add_subcommand("validate", "check a config file without running it");
  val->add_option("config", check_path, "config file")->required();

  auto* list = app.add_subcommand("presets", "list the figure presets");
  auto* keys = app.add_subcommand("keys", "list every config key with its default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = riscomp::load_config(config_path);
      apply(cfg, run_o);
      return execute(cfg, riscomp::resolve_out_dir(run_o.out, cfg));
    }
    if (*rep) {
      auto cfg = riscomp::reproduce(figure);
      apply(cfg, rep_o);
      if (print_only) {
        std::cout << cfg.canonical();
        return 0;
      }
      return execute(cfg, riscomp::resolve_out_dir(rep_o.out, cfg) / figure);
    }
    if (*val) {
      const auto cfg = riscomp::load_config(check_path);
      std::cout << "ok: " << riscomp::kind_name(cfg.kind()) << ", config hash " << std::hex
                << cfg.hash() << '\n';
      return 0;
    }
    if (*list) {
      for (const auto& id : riscomp::preset_ids()) std::cout << id << '\n';
      return 0;
    }
    if (*keys) {
      for (const auto& k : riscomp::config_schema())
        std::cout << k.key << " = " << k.default_text << "    # " << k.help << '\n';
      return 0;
    }
  } catch (const riscomp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
