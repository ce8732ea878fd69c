// hkctl: run opinion-dynamics scenarios and export plot-ready data.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hk/runner.hpp"
#include "hk/scenario.hpp"
#include "hk/version.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string scenario_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--scenario", args.scenario_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory for the run")
      ->required();
  cmd->add_option("--seed", args.seed_override,
                  "override the scenario master seed");
}

int run_kind(const RunArgs& args, hk::Scenario::Kind expected,
             const char* expected_name) {
  hk::Scenario scenario = hk::load_scenario_file(args.scenario_file);
  if (args.seed_override) scenario.seed = *args.seed_override;
  if (scenario.kind != expected) {
    throw std::invalid_argument(std::string("scenario kind is not '") +
                                expected_name + "'");
  }
  const hk::RunOutcome outcome = hk::run_scenario(scenario, args.out_dir);
  std::cout << "status: " << outcome.status << "\n"
            << "run dir: " << outcome.dir.string() << "\n";
  return 0;
}

void write_cli_error_manifest(const std::string& out_dir,
                              const std::string& message) {
  if (out_dir.empty()) return;
  try {
    fs::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["tool_version"] = hk::kToolVersion;
    manifest["status"] = "error";
    manifest["error"] = message;
    manifest["outputs"] = nlohmann::json::array();
    hk::write_file_atomic(fs::path(out_dir) / "manifest.json",
                          manifest.dump(2) + "\n");
  } catch (...) {
    // Nothing else to do; the error already goes to stderr.
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic opinion-dynamics laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hk::kToolVersion));

  RunArgs simulate_args, campaign_args, incentives_args, scaling_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a population to convergence");
  add_run_options(simulate, simulate_args);
  CLI::App* campaign = app.add_subcommand(
      "campaign", "steer a population across a target with an external agent");
  add_run_options(campaign, campaign_args);
  CLI::App* incentivize = app.add_subcommand(
      "incentivize", "allocate per-step incentive budgets toward a target");
  add_run_options(incentivize, incentives_args);
  CLI::App* scaling = app.add_subcommand(
      "scaling", "measure convergence steps across population sizes");
  add_run_options(scaling, scaling_args);

  std::string plot_run, plot_kind = "trajectory", plot_out;
  CLI::App* plot =
      app.add_subcommand("plot", "export plot-ready CSV and a static SVG");
  plot->add_option("--run", plot_run, "directory of a finished run")
      ->required()
      ->check(CLI::ExistingDirectory);
  plot->add_option("--kind", plot_kind, "trajectory | placements | scaling")
      ->check(CLI::IsMember({"trajectory", "placements", "scaling"}));
  plot->add_option("--out", plot_out,
                   "output directory (defaults to the run directory)");

  CLI11_PARSE(app, argc, argv);

  std::string active_out;
  try {
    if (simulate->parsed()) {
      active_out = simulate_args.out_dir;
      return run_kind(simulate_args, hk::Scenario::Kind::kSimulate, "simulate");
    }
    if (campaign->parsed()) {
      active_out = campaign_args.out_dir;
      return run_kind(campaign_args, hk::Scenario::Kind::kCampaign, "campaign");
    }
    if (incentivize->parsed()) {
      active_out = incentives_args.out_dir;
      return run_kind(incentives_args, hk::Scenario::Kind::kIncentivize,
                      "incentivize");
    }
    if (scaling->parsed()) {
      active_out = scaling_args.out_dir;
      return run_kind(scaling_args, hk::Scenario::Kind::kScaling, "scaling");
    }
    if (plot->parsed()) {
      const hk::PlotKind kind = plot_kind == "placements"
                                    ? hk::PlotKind::kPlacements
                                : plot_kind == "scaling" ? hk::PlotKind::kScaling
                                                         : hk::PlotKind::kTrajectory;
      const fs::path out = plot_out.empty() ? fs::path(plot_run) : fs::path(plot_out);
      const auto files = hk::emit_plot_data(plot_run, kind, out);
      for (const fs::path& file : files) {
        std::cout << "wrote: " << file.string() << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_cli_error_manifest(active_out, e.what());
    return 1;
  }
  return 0;
}
