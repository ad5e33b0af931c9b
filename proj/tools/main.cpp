#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "vdpzeno/errors.hpp"

namespace {

using vdp::cli::Json;
using vdp::cli::UsageError;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct ConfigFlags {
  std::string config_file;
  std::string experiment;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool paper_scale = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "JSON file {\"experiment\": ..., \"params\": {...}}");
    cmd->add_option("-e,--experiment", experiment, "experiment name (overrides the file)");
    cmd->add_option("-s,--set", overrides, "parameter override key=value (lists comma separated)")->allow_extra_args(false);
    cmd->add_option("-o,--out-dir", out_dir, "shorthand for --set out_dir=DIR");
    cmd->add_flag("--paper-scale", paper_scale, "start from the full-scale trajectory counts");
  }

  vdp::cli::ExperimentConfig resolve() const {
    Json file;
    if (!config_file.empty()) {
      file = read_json(config_file);
      if (!file.is_object()) throw UsageError("config file must hold a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (key != "experiment" && key != "params") throw UsageError("unknown config file key '" + key + "'");
      }
    }
    std::string name = experiment;
    if (name.empty() && file.contains("experiment")) name = file["experiment"].get<std::string>();
    if (name.empty()) throw UsageError("no experiment given (use --experiment or a config file)");
    const auto& exp = vdp::cli::find_experiment(name);
    auto sets = overrides;
    if (!out_dir.empty()) sets.push_back("out_dir=" + out_dir);
    return vdp::cli::resolve(name, exp.params, paper_scale, file.contains("params") ? file["params"] : Json(), sets);
  }
};

vdp::cli::OutputSet::Progress progress_sink(bool quiet) {
  if (quiet) return {};
  return [](const std::string& line) { std::cerr << line << std::endl; };
}

void print_report(const vdp::cli::ExperimentConfig& cfg, const vdp::cli::ValidationReport& report) {
  std::cout << "experiment: " << cfg.experiment << '\n';
  for (const auto& [key, value] : report.notes.items()) std::cout << "note: " << key << " = " << value.dump() << '\n';
  if (report.clean()) {
    std::cout << "clean\n";
    return;
  }
  for (const auto& v : report.violations) std::cout << "violation: " << v << '\n';
}

int list_experiments() {
  for (const auto& e : vdp::cli::experiments()) {
    std::cout << e.name << ": " << e.summary << '\n';
    for (const auto& p : e.params) {
      std::cout << "  " << p.key << " = " << p.desk.dump();
      if (!p.paper.is_null()) std::cout << " (paper scale " << p.paper.dump() << ")";
      std::cout << "  " << p.help << '\n';
    }
  }
  return 0;
}

int replay(const std::string& manifest_path, const std::string& out_dir, unsigned workers, bool quiet) {
  const Json old = read_json(manifest_path);
  if (!old.contains("experiment") || !old.contains("config") || !old.contains("outputs")) {
    throw UsageError("'" + manifest_path + "' is not a run manifest");
  }
  vdp::cli::ExperimentConfig cfg;
  cfg.experiment = old["experiment"].get<std::string>();
  const auto& exp = vdp::cli::find_experiment(cfg.experiment);
  std::filesystem::path dir = out_dir;
  if (dir.empty()) dir = std::filesystem::path(manifest_path).parent_path() / "replay";
  cfg = vdp::cli::resolve(cfg.experiment, exp.params, false, old["config"], {"out_dir=" + dir.string()});

  vdp::cli::RunOptions opts;
  opts.workers = workers;
  opts.paper_scale = old.value("paper_scale", false);
  opts.progress = progress_sink(quiet);
  const Json fresh = vdp::cli::run_experiment(cfg, opts);

  bool same = old["outputs"].size() == fresh["outputs"].size();
  for (const auto& f : old["outputs"]) {
    std::string now = "missing";
    for (const auto& g : fresh["outputs"]) {
      if (g["file"] == f["file"]) now = g["sha256"].get<std::string>();
    }
    const bool match = now == f["sha256"].get<std::string>();
    same = same && match;
    std::cout << (match ? "match   " : "DIFFERS ") << f["file"].get<std::string>() << '\n';
  }
  std::cout << (same ? "replay reproduced every output" : "replay differs from the manifest") << '\n';
  return same ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and master-equation experiments for a van der Pol oscillator under repeated measurements"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vdp::cli::version());

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "run an experiment and write CSV files plus manifest.json");
  ConfigFlags run_flags;
  run_flags.attach(run_cmd);
  run_cmd->add_option("-w,--workers", workers, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  run_cmd->add_flag("-q,--quiet", quiet, "no progress lines on stderr");

  auto* validate_cmd = app.add_subcommand("validate", "check a configuration without running it");
  ConfigFlags validate_flags;
  validate_flags.attach(validate_cmd);

  auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  std::string manifest_path, replay_dir;
  replay_cmd->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
  replay_cmd->add_option("-o,--out-dir", replay_dir, "where to write the replay (default: <manifest dir>/replay)");
  replay_cmd->add_option("-w,--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  replay_cmd->add_flag("-q,--quiet", quiet, "no progress lines on stderr");

  app.add_subcommand("list", "list experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("list")) return list_experiments();
    if (app.got_subcommand("replay")) return replay(manifest_path, replay_dir, workers, quiet);
    if (app.got_subcommand("validate")) {
      const auto cfg = validate_flags.resolve();
      const auto report = vdp::cli::validate(cfg);
      print_report(cfg, report);
      return report.clean() ? 0 : kExitUsage;
    }
    const auto cfg = run_flags.resolve();
    vdp::cli::RunOptions opts;
    opts.workers = workers;
    opts.paper_scale = run_flags.paper_scale;
    opts.progress = progress_sink(quiet);
    const Json manifest = vdp::cli::run_experiment(cfg, opts);
    if (!quiet) std::cerr << "wrote " << manifest["outputs"].size() << " files to " << cfg.text("out_dir") << std::endl;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vdp::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vdp::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vdp::NumericalError& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
