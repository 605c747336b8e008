#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "tfdash/errors.hpp"
#include "tfdash/metrics.hpp"
#include "tfdash/netsim.hpp"
#include "tfdash/report.hpp"
#include "tfdash/scenario.hpp"
#include "tfdash/sweep.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitHorizon = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool strict_formulas = false;
};

tfdash::ScenarioConfig load_config(const CommonFlags& flags) {
  tfdash::ScenarioConfig cfg = tfdash::load_scenario(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.strict_formulas) cfg.strict_formulas = true;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (cfg.out_dir.empty()) cfg.out_dir = "out";
  cfg.validate();
  return cfg;
}

int run_single(const CommonFlags& flags) {
  const tfdash::ScenarioConfig cfg = load_config(flags);
  const tfdash::SessionLog log = tfdash::run_scenario(cfg);
  tfdash::SummarizeOptions opts;
  opts.strict_formulas = cfg.strict_formulas;
  const tfdash::MetricsReport report = tfdash::summarize(log, cfg.schedule, opts);
  const std::string summary = tfdash::write_outputs(cfg, log, report, cfg.out_dir);
  std::cout << summary;
  std::cout << "wrote sessions.csv, metrics.csv, summary.txt to " << cfg.out_dir << "\n";
  return 0;
}

int run_sweep_cmd(const CommonFlags& flags, const std::string& sweep_text, int jobs) {
  const tfdash::SweepSpec spec = tfdash::parse_sweep_spec(sweep_text);
  if (spec.empty()) return run_single(flags);  // empty grid degenerates to a run

  const tfdash::ScenarioConfig cfg = load_config(flags);
  const auto rows = tfdash::run_sweep(cfg, spec, jobs);

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  std::ofstream out(std::filesystem::path(cfg.out_dir) / "comparison.csv", std::ios::binary);
  if (!out) throw tfdash::SimError("cannot write comparison.csv in " + cfg.out_dir);
  tfdash::write_comparison_csv(rows, out);
  tfdash::write_comparison_csv(rows, std::cout);
  std::cout << "wrote comparison.csv to " << cfg.out_dir << "\n";
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const tfdash::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const tfdash::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const tfdash::HorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHorizon;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-client adaptive-bitrate streaming simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sweep_text;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "scenario config file (JSON)")
        ->required();
    cmd->add_option("--seed", flags.seed, "override the scenario seed");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_flag("--strict-formulas", flags.strict_formulas,
                  "also emit the raw metric formula variants");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario and write CSV outputs");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario grid and write comparison.csv");
  add_common(sweep);
  sweep->add_option("--sweep", sweep_text,
                    "grid spec, e.g. \"clients=2..15; capacities=2000..10000:1000; "
                    "policies=tfdash,rate; seeds=0..9\"");
  sweep->add_option("--jobs", jobs, "parallel scenario runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return guarded([&] { return run_single(flags); });
  return guarded([&] { return run_sweep_cmd(flags, sweep_text, jobs); });
}
