#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hk/scenario.hpp"

namespace hk {

// 64-bit FNV-1a over a byte string; identifies scenario configurations in
// run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

// Writes via a temp file + rename so concurrent readers never observe a
// partially written artifact.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

struct RunOutcome {
  std::filesystem::path dir;
  std::string status;       // converged / not_converged / success / ...
  nlohmann::json manifest;  // copy of manifest.json
  nlohmann::json report;    // copy of report.json
};

// Executes a scenario of any kind and materializes the run directory:
// trajectory.csv (scaling: scaling.csv), report.json and manifest.json.
// Identical scenario + seed reproduce every artifact byte for byte. Errors
// are reported through a manifest with status "error" and then rethrown.
RunOutcome run_scenario(const Scenario& scenario,
                        const std::filesystem::path& out_dir);

enum class PlotKind { kTrajectory, kPlacements, kScaling };

// Derives plot-ready artifacts from a finished run directory: a wide CSV
// (or n/median/max table for scaling studies) plus a static SVG line chart.
// Campaign placements are overlaid as red star markers. Returns the paths
// written.
std::vector<std::filesystem::path> emit_plot_data(
    const std::filesystem::path& run_dir, PlotKind kind,
    const std::filesystem::path& out_dir);

}  // namespace hk
