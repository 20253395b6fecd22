#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riscomp/config.hpp"

namespace riscomp {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kManifestName = "manifest.cfg";
inline constexpr const char* kOutEnv = "RISCOMP_OUT";

struct RunResult {
  std::filesystem::path dir;
  std::vector<std::string> files;   // written artifacts, manifest last
  std::uint64_t config_hash = 0;
};

/// Runs the configured experiment and writes its CSVs, any checkpoints and
/// manifest.cfg into `out_dir` (created if needed). The manifest is a
/// loadable config holding every effective setting, so
/// `run <out_dir>/manifest.cfg` reproduces the CSVs byte for byte.
/// Progress goes to `log` when given.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         std::ostream* log = nullptr);

/// Manifest text: header comments (version, hash, outputs) then the
/// canonical config.
std::string manifest_text(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

std::vector<std::string> preset_ids();

/// Config text of a figure preset; throws ConfigError listing the presets
/// for an unknown id.
std::string preset_text(const std::string& id);
ExperimentConfig reproduce(const std::string& id);

/// --out, then the config's `out`, then $RISCOMP_OUT, then ./riscomp-out.
std::filesystem::path resolve_out_dir(const std::string& flag, const ExperimentConfig& cfg);

}  // namespace riscomp
