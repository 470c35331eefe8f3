// Command line driver: run a configuration, sweep line density, or run a
// built-in demo scenario.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "sectionlab/config.hpp"
#include "sectionlab/errors.hpp"
#include "sectionlab/output.hpp"
#include "sectionlab/pipeline.hpp"

namespace {

using namespace sectionlab;

constexpr const char* kEnvOutDir = "SECTIONLAB_OUT_DIR";
constexpr const char* kEnvSeed = "SECTIONLAB_SEED";

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParse = 3,
  kValidation = 4,
  kIo = 5,
  kGeometry = 6,
};

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Parse:
      return kParse;
    case ErrorCategory::Validation:
    case ErrorCategory::Indexing:
      return kValidation;
    case ErrorCategory::Io:
      return kIo;
    case ErrorCategory::Geometry:
    case ErrorCategory::Verification:
      return kGeometry;
  }
  return kInternal;
}

const char* category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Parse:
      return "parse";
    case ErrorCategory::Validation:
      return "validation";
    case ErrorCategory::Indexing:
      return "indexing";
    case ErrorCategory::Io:
      return "io";
    case ErrorCategory::Geometry:
      return "geometry";
    case ErrorCategory::Verification:
      return "verification";
  }
  return "internal";
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> epsilon;
  std::optional<std::string> out_dir;
};

// Precedence: command line flag, then environment, then the config file.
void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (const char* env = std::getenv(kEnvSeed)) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError(kEnvSeed, "not an unsigned integer");
    }
  }
  if (const char* env = std::getenv(kEnvOutDir)) {
    cfg.out_dir = env;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.epsilon) cfg.tolerance.epsilon = *o.epsilon;
  if (o.mode) cfg.mode = (*o.mode == "delete") ? VerifyMode::Delete : VerifyMode::Correct;
  validate(cfg);
}

void print_summary(const RunResult& r) {
  const PipelineStats& s = r.dataset.stats;
  std::cout << "signals: main " << r.main_frame.signals.size() << ", second "
            << r.second_frame.signals.size() << ", unassigned " << s.unassigned_signals << "\n"
            << "points: total " << s.total_points << ", correct " << s.correct_count
            << ", false " << s.false_count << ", corrected " << s.corrected_count << ", deleted "
            << s.deleted_count << "\n"
            << "false fraction: "
            << format_number(s.total_points ? double(s.false_count) / s.total_points : 0.0)
            << "\n"
            << "truth audit: wrong " << r.audit.wrong_index << ", detected "
            << r.audit.wrong_detected << ", leakage " << r.audit.leakage << ", false alarms "
            << r.audit.false_alarms << "/" << r.audit.right_index_both_visible
            << ", corrected to truth " << r.audit.corrected_to_truth << "\n";
}

int do_run(RunConfig cfg, const Overrides& o) {
  apply_overrides(cfg, o);
  std::cout << "# effective configuration\n" << echo_config(cfg);
  if (cfg.tolerance.below_noise_scale(cfg.noise_sigma)) {
    std::cerr << "warning: epsilon " << cfg.tolerance.epsilon
              << " px is below twice the noise sigma\n";
  }
  const RunResult result = run_pipeline(cfg);
  write_run_outputs(result, cfg.out_dir);
  print_summary(result);
  std::cout << "wrote " << cfg.out_dir << "/{raw,cleaned,corrected}.ply and stats.yaml\n";
  return kOk;
}

int do_sweep(RunConfig cfg, const Overrides& o) {
  apply_overrides(cfg, o);
  std::cout << "# effective configuration\n" << echo_config(cfg);
  const SweepReport report = run_sweep(cfg);
  for (const auto& e : report.entries) {
    std::cout << "dz [" << format_number(e.volume.z_min) << ", " << format_number(e.volume.z_max)
              << "] mm: n_max " << e.result.max_lines;
    if (e.result.first_overlap) {
      std::cout << " (N=" << *e.result.first_overlap << " overlaps lines "
                << e.result.overlap_first_line << "/" << e.result.overlap_second_line
                << " in row " << e.result.overlap_row << ")";
    }
    std::cout << "\n";
  }
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = (std::filesystem::path(cfg.out_dir) / "sweep.yaml").string();
  write_stats(StatsReport{PipelineStats{}, std::nullopt, report, cfg}, path);
  std::cout << "wrote " << path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-line light-sectioning simulator with stereo index verification"};
  app.require_subcommand(1);

  Overrides o;
  auto add_overrides = [&o](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "RNG seed (overrides config and $SECTIONLAB_SEED)");
    cmd->add_option("--mode", o.mode, "Post-failure handling")
        ->check(CLI::IsMember({"delete", "correct"}));
    cmd->add_option("--epsilon", o.epsilon, "Stereo match tolerance in pixels");
    cmd->add_option("--out-dir", o.out_dir, "Output directory (overrides $SECTIONLAB_OUT_DIR)");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Simulate, index, verify and write outputs");
  run->add_option("config", config_path, "YAML configuration")->required();
  add_overrides(run);

  auto* sweep = app.add_subcommand("sweep", "Find the largest non-overlapping line count");
  sweep->add_option("config", config_path, "YAML configuration")->required();
  add_overrides(sweep);

  std::string scenario;
  auto* demo = app.add_subcommand("demo", "Run a built-in scenario with default settings");
  demo->add_option("scenario", scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  add_overrides(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      return do_run(load_config(config_path), o);
    }
    if (*sweep) {
      return do_sweep(load_config(config_path), o);
    }
    const ScenarioName name = *parse_scenario_name(scenario);
    RunConfig cfg = demo_config(name);
    return name == ScenarioName::DensitySweep ? do_sweep(cfg, o) : do_run(cfg, o);
  } catch (const Error& e) {
    std::cerr << "error [" << category_name(e.category()) << "]: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return kInternal;
  }
}
