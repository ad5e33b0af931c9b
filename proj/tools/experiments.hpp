#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace vdp::cli {

struct Experiment {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  /// Dry-run checks; returns human-readable violations (empty when clean)
  /// and adds informational entries such as memory estimates to `notes`.
  std::function<std::vector<std::string>(const ExperimentConfig&, Json& notes)> check;
  std::function<void(const ExperimentConfig&, unsigned workers, OutputSet&)> run;
};

const std::vector<Experiment>& experiments();

/// Throws UsageError for an unknown name.
const Experiment& find_experiment(const std::string& name);

struct ValidationReport {
  std::vector<std::string> violations;
  Json notes = Json::object();
  [[nodiscard]] bool clean() const noexcept { return violations.empty(); }
};

ValidationReport validate(const ExperimentConfig& cfg);

struct RunOptions {
  unsigned workers = 1;
  bool paper_scale = false;
  std::filesystem::path out_dir;  // empty: the config's out_dir
  OutputSet::Progress progress;
};

/// Runs the experiment, writes its files and then `manifest.json` into the
/// output directory. Returns the manifest. Throws UsageError for a config
/// that fails validation.
Json run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

/// Package version recorded in manifests.
const char* version() noexcept;

}  // namespace vdp::cli
