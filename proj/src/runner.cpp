#include "hk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hk/csv.hpp"
#include "hk/rng.hpp"
#include "hk/version.hpp"

namespace hk {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
  }
  fs::rename(tmp, path);
}

namespace {

std::string hex64(std::uint64_t value) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

json clusters_to_json(const std::vector<Cluster>& clusters) {
  json out = json::array();
  for (const Cluster& c : clusters) {
    json members = json::array();
    for (std::size_t idx : c.members) members.push_back(idx + 1);  // agent ids
    out.push_back(json{{"representative", c.representative},
                       {"size", c.members.size()},
                       {"members", std::move(members)}});
  }
  return out;
}

struct Artifacts {
  std::string data_name;  // trajectory.csv or scaling.csv
  std::string data;
  json report;
  json summary;
  std::string status;
};

std::size_t effective_n(const Scenario& scenario) {
  if (scenario.init.kind == InitSpec::Kind::kExplicit) {
    return scenario.init.values.size();
  }
  return scenario.n;
}

Artifacts run_simulate_kind(const Scenario& scenario) {
  const NeighborhoodSpec spec = scenario.neighborhood();
  OpinionState init = generate_init(scenario.init, effective_n(scenario),
                                    scenario.seed);
  const StepFn step = scenario.dynamics.make_step(spec);
  SimulationResult result = simulate(init, step, scenario.stop.rule);
  result.trajectory.config = scenario.dynamics.describe();
  result.trajectory.seed = scenario.seed;

  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory);

  const ClusterReport clusters =
      cluster_equilibrium(result.trajectory.back(), spec, 1e-9);
  const RangeStats range = range_stats(result.trajectory.back());

  Artifacts artifacts;
  artifacts.data_name = "trajectory.csv";
  artifacts.data = csv.str();

  json report;
  report["converged"] = result.converged();
  switch (result.cause) {
    case StopCause::kFixedPoint: report["cause"] = "fixed_point"; break;
    case StopCause::kAsymptotic: report["cause"] = "asymptotic"; break;
    case StopCause::kMaxStepsExhausted: report["cause"] = "max_steps"; break;
  }
  if (result.convergence_step) {
    report["convergence_step"] = *result.convergence_step;
  } else {
    report["convergence_step"] = nullptr;
  }
  report["steps_recorded"] = result.trajectory.length() - 1;
  report["final_clusters"] = clusters_to_json(clusters.clusters);
  report["clusters_separated_beyond_gamma"] = clusters.separated_beyond_gamma;
  report["final_range"] = json{{"min", range.min}, {"max", range.max}};
  artifacts.report = report;

  if (result.converged()) {
    artifacts.status = "converged";
  } else if (scenario.stop.rule.kind == StopRule::Kind::kMaxSteps) {
    artifacts.status = "completed";
  } else {
    artifacts.status = "not_converged";
  }
  artifacts.summary = json{{"clusters", clusters.clusters.size()},
                           {"steps", result.trajectory.length() - 1}};
  return artifacts;
}

Artifacts run_campaign_kind(const Scenario& scenario) {
  const CampaignSection& section = *scenario.campaign;
  CampaignSpec spec;
  spec.theta = section.theta;
  spec.neighborhood = scenario.neighborhood();
  spec.strategy = section.strategy;
  spec.offset = section.offset;
  spec.script = section.script;
  spec.max_steps = section.max_steps;
  spec.crossing_tol = section.crossing_tol;

  OpinionState init = generate_init(scenario.init, effective_n(scenario),
                                    scenario.seed);
  CampaignResult result = run_campaign(init, spec);
  result.trajectory.config = "campaign(theta=" + std::to_string(section.theta) + ")";
  result.trajectory.seed = scenario.seed;

  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory, result.placements);

  Artifacts artifacts;
  artifacts.data_name = "trajectory.csv";
  artifacts.data = csv.str();

  json placements = json::array();
  for (std::size_t t = 0; t < result.placements.size(); ++t) {
    if (!result.placements[t]) continue;
    json entry{{"t", result.trajectory.states[t].step},
               {"placement", *result.placements[t]}};
    if (result.anchors[t]) {
      entry["anchor_agent"] = *result.anchors[t] + 1;
    }
    placements.push_back(std::move(entry));
  }

  const char* strategy_name =
      section.strategy == CampaignStrategy::kGreedyRecursive ? "greedy_recursive"
      : section.strategy == CampaignStrategy::kFixedOffset   ? "fixed_offset"
                                                             : "scripted";
  json report;
  report["success"] = result.success;
  if (result.crossing_step) {
    report["T"] = *result.crossing_step;
  } else {
    report["T"] = nullptr;
  }
  report["bound_cap"] = result.bound_cap;
  report["within_bound"] = result.within_bound;
  report["strategy"] = strategy_name;
  report["steps_recorded"] = result.trajectory.length() - 1;
  report["placements"] = std::move(placements);
  report["final_min"] = range_stats(result.trajectory.back()).min;
  artifacts.report = report;

  artifacts.status = result.success ? "success" : "not_reached";
  artifacts.summary = json{
      {"T", result.crossing_step ? json(*result.crossing_step) : json(nullptr)},
      {"bound_cap", result.bound_cap}};
  return artifacts;
}

Artifacts run_incentivize_kind(const Scenario& scenario) {
  const IncentiveSection& section = *scenario.incentive;
  const NeighborhoodSpec spec = scenario.neighborhood();
  OpinionState init = generate_init(scenario.init, effective_n(scenario),
                                    scenario.seed);

  HorizonResult result =
      greedy_horizon(init, spec, section.theta, section.rho, section.horizon,
                     section.split, section.tolerance);
  result.trajectory.config = "incentives(theta=" + std::to_string(section.theta) +
                             ",rho=" + std::to_string(section.rho) + ")";
  result.trajectory.seed = scenario.seed;

  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory);

  json steps = json::array();
  bool all_converged = true;
  for (std::size_t t = 0; t < result.allocations.size(); ++t) {
    const IncentiveAllocation& allocation = result.allocations[t];
    const UnconstrainedAllocation exact = unconstrained_allocation(
        result.trajectory.states[t], spec, section.theta);
    double spend = 0.0;
    for (double r : allocation.incentives) spend += r;
    json row;
    row["incentives"] = allocation.incentives;
    row["lambda"] = allocation.lambda;
    row["objective"] = allocation.objective;
    row["kkt_residual"] = allocation.kkt_residual;
    row["iterations"] = allocation.iterations;
    row["converged"] = allocation.converged;
    row["spend"] = spend;
    row["unreachable"] = exact.unreachable;
    steps.push_back(std::move(row));
    all_converged = all_converged && allocation.converged;
  }

  Artifacts artifacts;
  artifacts.data_name = "trajectory.csv";
  artifacts.data = csv.str();

  json report;
  report["aggregate_cost"] = result.aggregate_cost;
  report["spent"] = result.spent;
  report["horizon"] = section.horizon;
  report["split"] = section.split == BudgetSplit::kEven ? "even" : "front_loaded";
  report["theta"] = section.theta;
  report["rho"] = section.rho;
  report["steps"] = std::move(steps);
  artifacts.report = report;

  artifacts.status = all_converged ? "completed" : "solver_iteration_cap";
  artifacts.summary = json{{"aggregate_cost", result.aggregate_cost},
                           {"spent", result.spent}};
  return artifacts;
}

bool finite_time_dynamics(const DynamicsSpec& dynamics) {
  if (dynamics.kind == DynamicsSpec::Kind::kHk) return true;
  if (dynamics.kind != DynamicsSpec::Kind::kWeighted) return false;
  const InfluenceFamily family = dynamics.influence->family();
  return family == InfluenceFamily::kConstantOne ||
         family == InfluenceFamily::kPlateauLinear;
}

Artifacts run_scaling_kind(const Scenario& scenario) {
  const ScalingSection& section = *scenario.scaling;
  if (!finite_time_dynamics(scenario.dynamics)) {
    throw std::invalid_argument(
        "scaling study needs a finite-time dynamics (plain averaging or a "
        "plateau influence)");
  }
  if (section.spacing_ratio &&
      scenario.init.kind != InitSpec::Kind::kEquallySpaced) {
    throw std::invalid_argument(
        "scaling study: spacing_ratio applies to equally spaced inits only");
  }
  if (section.spacing_ratio &&
      scenario.dynamics.kind == DynamicsSpec::Kind::kWeighted &&
      scenario.dynamics.influence->family() != InfluenceFamily::kConstantOne) {
    throw std::invalid_argument(
        "scaling study: spacing_ratio supports distance-free influences only");
  }

  std::ostringstream csv;
  csv << "n,rep,seed,steps,converged,cap,exceeded_cap\n";

  json per_n = json::array();
  std::size_t total_censored = 0;
  std::size_t total_violations = 0;

  for (std::size_t n : section.n_values) {
    if (n == 0) throw std::invalid_argument("scaling study: n must be >= 1");
    NeighborhoodSpec spec = scenario.neighborhood();
    if (section.fixed_gamma) {
      spec = NeighborhoodSpec::bounded(*section.fixed_gamma);
    } else if (section.spacing_ratio) {
      const double spacing =
          n == 1 ? 0.0
                 : (scenario.init.hi - scenario.init.lo) /
                       static_cast<double>(n - 1);
      if (!(spacing > 0.0)) {
        throw std::invalid_argument("scaling study: degenerate spacing");
      }
      spec = NeighborhoodSpec::bounded(spacing / *section.spacing_ratio);
    }

    const StepFn step = scenario.dynamics.make_step(spec);
    const double cap = 10.0 * static_cast<double>(n) * static_cast<double>(n);

    std::vector<double> converged_steps;
    std::size_t censored = 0;
    std::size_t violations = 0;
    for (std::size_t rep = 0; rep < section.reps; ++rep) {
      const std::uint64_t run_seed = derive_run_seed(scenario.seed, n, rep);
      OpinionState init = generate_init(scenario.init, n, run_seed);
      const ConvergenceRun result =
          run_to_convergence(init, step, scenario.stop.rule);

      std::size_t steps;
      bool converged = result.converged();
      if (converged) {
        steps = *result.convergence_step;
        converged_steps.push_back(static_cast<double>(steps));
      } else {
        steps = result.final_state.step;  // censored at the horizon
        ++censored;
      }
      const bool exceeded = converged && static_cast<double>(steps) > cap;
      if (exceeded) ++violations;

      csv << n << "," << rep << "," << run_seed << "," << steps << ","
          << (converged ? 1 : 0) << "," << static_cast<std::size_t>(cap) << ","
          << (exceeded ? 1 : 0) << "\n";
    }

    json row;
    row["n"] = n;
    row["runs"] = section.reps;
    row["censored"] = censored;
    row["cap"] = cap;
    row["cap_violations"] = violations;
    if (converged_steps.empty()) {
      row["median_steps"] = nullptr;
      row["max_steps"] = nullptr;
    } else {
      std::sort(converged_steps.begin(), converged_steps.end());
      const std::size_t m = converged_steps.size();
      const double median =
          m % 2 == 1 ? converged_steps[m / 2]
                     : 0.5 * (converged_steps[m / 2 - 1] + converged_steps[m / 2]);
      row["median_steps"] = median;
      row["max_steps"] = converged_steps.back();
    }
    per_n.push_back(std::move(row));
    total_censored += censored;
    total_violations += violations;
  }

  Artifacts artifacts;
  artifacts.data_name = "scaling.csv";
  artifacts.data = csv.str();
  artifacts.report = json{{"per_n", per_n},
                          {"censored_runs", total_censored},
                          {"cap_violations", total_violations}};
  artifacts.status = total_censored == 0 ? "completed" : "censored_runs_present";
  artifacts.summary = json{{"censored_runs", total_censored},
                           {"cap_violations", total_violations}};
  return artifacts;
}

void write_error_manifest(const fs::path& dir, const Scenario& scenario,
                          const std::string& message) {
  json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["prng"] = kPrngName;
  manifest["status"] = "error";
  manifest["error"] = message;
  manifest["outputs"] = json::array();
  try {
    const json scenario_doc = scenario_to_json(scenario);
    manifest["scenario"] = scenario_doc;
    manifest["seed"] = scenario.seed;
    manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(scenario_doc.dump()));
  } catch (...) {
    // Scenario itself unserializable; report the error alone.
  }
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

RunOutcome run_scenario(const Scenario& scenario, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  Artifacts artifacts;
  try {
    switch (scenario.kind) {
      case Scenario::Kind::kSimulate:
        artifacts = run_simulate_kind(scenario);
        break;
      case Scenario::Kind::kCampaign:
        artifacts = run_campaign_kind(scenario);
        break;
      case Scenario::Kind::kIncentivize:
        artifacts = run_incentivize_kind(scenario);
        break;
      case Scenario::Kind::kScaling:
        artifacts = run_scaling_kind(scenario);
        break;
    }
  } catch (const std::exception& e) {
    write_error_manifest(out_dir, scenario, e.what());
    throw;
  }

  const json scenario_doc = scenario_to_json(scenario);
  json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["prng"] = kPrngName;
  manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(scenario_doc.dump()));
  manifest["scenario"] = scenario_doc;
  manifest["seed"] = scenario.seed;
  manifest["status"] = artifacts.status;
  manifest["summary"] = artifacts.summary;
  manifest["outputs"] = json::array({artifacts.data_name, "report.json"});

  write_file_atomic(out_dir / artifacts.data_name, artifacts.data);
  write_file_atomic(out_dir / "report.json", artifacts.report.dump(2) + "\n");
  write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

  RunOutcome outcome;
  outcome.dir = out_dir;
  outcome.status = artifacts.status;
  outcome.manifest = std::move(manifest);
  outcome.report = std::move(artifacts.report);
  return outcome;
}

namespace {

struct Series {
  std::vector<std::pair<double, double>> points;
  std::string color;
};

std::string format_coord(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// Minimal static line chart; enough to eyeball trajectories and studies.
std::string svg_line_chart(const std::vector<Series>& series,
                           const std::vector<std::pair<double, double>>& stars,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::string& title) {
  const double width = 880, height = 560;
  const double left = 70, right = 20, top = 40, bottom = 50;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  auto absorb = [&](double x, double y) {
    if (first) {
      x_min = x_max = x;
      y_min = y_max = y;
      first = false;
      return;
    }
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const Series& s : series) {
    for (auto [x, y] : s.points) absorb(x, y);
  }
  for (auto [x, y] : stars) absorb(x, y);
  if (x_max - x_min <= 0) { x_min -= 0.5; x_max += 0.5; }
  if (y_max - y_min <= 0) { y_min -= 0.5; y_max += 0.5; }
  const double x_pad = 0.03 * (x_max - x_min);
  const double y_pad = 0.05 * (y_max - y_min);
  x_min -= x_pad; x_max += x_pad;
  y_min -= y_pad; y_max += y_pad;

  auto sx = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  auto sy = [&](double y) {
    return height - bottom -
           (y - y_min) / (y_max - y_min) * (height - top - bottom);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes with five ticks per dimension.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
      << width - right << "\" y2=\"" << height - bottom << "\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << height - bottom << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x_min + (x_max - x_min) * k / 4.0;
    const double fy = y_min + (y_max - y_min) * k / 4.0;
    svg << "<text x=\"" << format_coord(sx(fx)) << "\" y=\""
        << height - bottom + 18 << "\" text-anchor=\"middle\">"
        << format_coord(fx) << "</text>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << format_coord(sy(fy) + 4)
        << "\" text-anchor=\"end\">" << format_coord(fy) << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\""
      << height - 12 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (top + height - bottom) / 2 << ")\">" << y_label << "</text>\n";
  svg << "</g>\n";

  for (const Series& s : series) {
    if (s.points.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1\" points=\"";
    for (auto [x, y] : s.points) {
      svg << format_coord(sx(x)) << "," << format_coord(sy(y)) << " ";
    }
    svg << "\"/>\n";
  }

  // Red five-pointed stars for external-agent placements.
  for (auto [x, y] : stars) {
    const double cx = sx(x), cy = sy(y);
    svg << "<polygon fill=\"red\" points=\"";
    for (int k = 0; k < 10; ++k) {
      const double radius = (k % 2 == 0) ? 6.0 : 2.4;
      const double angle = -M_PI / 2 + k * M_PI / 5;
      svg << format_coord(cx + radius * std::cos(angle)) << ","
          << format_coord(cy + radius * std::sin(angle)) << " ";
    }
    svg << "\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

std::string series_color(std::size_t index, std::size_t total) {
  const int hue = static_cast<int>(360.0 * static_cast<double>(index) /
                                   static_cast<double>(std::max<std::size_t>(total, 1)));
  std::ostringstream out;
  out << "hsl(" << hue << ",60%,40%)";
  return out.str();
}

struct ParsedTrajectory {
  // agent id -> ordered (t, opinion); id 0 holds external placements
  std::map<std::size_t, std::vector<std::pair<double, double>>> series;
};

ParsedTrajectory parse_trajectory_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open " + file.string());
  }
  ParsedTrajectory parsed;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw std::runtime_error("malformed trajectory row: " + line);
    }
    const std::size_t agent = std::stoull(fields[1]);
    parsed.series[agent].emplace_back(std::stod(fields[0]),
                                      std::stod(fields[2]));
  }
  return parsed;
}

}  // namespace

std::vector<fs::path> emit_plot_data(const fs::path& run_dir, PlotKind kind,
                                     const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  if (kind == PlotKind::kScaling) {
    std::ifstream in(run_dir / "report.json");
    if (!in) {
      throw std::runtime_error("cannot open scaling report in " +
                               run_dir.string());
    }
    const json report = json::parse(in);
    std::ostringstream csv;
    csv << "n,median_steps,max_steps\n";
    Series median_series{.points = {}, .color = "hsl(210,60%,40%)"};
    Series max_series{.points = {}, .color = "hsl(0,60%,40%)"};
    for (const json& row : report.at("per_n")) {
      const double n = row.at("n").get<double>();
      csv << static_cast<std::size_t>(n) << ",";
      if (row.at("median_steps").is_null()) {
        csv << ",";
      } else {
        const double median = row.at("median_steps").get<double>();
        const double max_steps = row.at("max_steps").get<double>();
        csv << format_opinion(median) << "," << format_opinion(max_steps);
        median_series.points.emplace_back(n, median);
        max_series.points.emplace_back(n, max_steps);
      }
      csv << "\n";
    }
    const fs::path csv_path = out_dir / "plot_scaling.csv";
    write_file_atomic(csv_path, csv.str());
    written.push_back(csv_path);

    const fs::path svg_path = out_dir / "plot_scaling.svg";
    write_file_atomic(svg_path,
                      svg_line_chart({median_series, max_series}, {}, "n",
                                     "steps to convergence",
                                     "convergence steps vs population size"));
    written.push_back(svg_path);
    return written;
  }

  const ParsedTrajectory parsed =
      parse_trajectory_csv(run_dir / "trajectory.csv");

  // Wide per-agent table over the union of recorded times.
  std::set<double> times;
  std::vector<std::size_t> agents;
  for (const auto& [agent, points] : parsed.series) {
    if (agent == 0) continue;
    agents.push_back(agent);
    for (auto [t, v] : points) times.insert(t);
  }

  std::ostringstream wide;
  wide << "t";
  for (std::size_t agent : agents) wide << ",agent_" << agent;
  wide << "\n";
  std::map<std::size_t, std::map<double, double>> lookup;
  for (const auto& [agent, points] : parsed.series) {
    for (auto [t, v] : points) lookup[agent][t] = v;
  }
  for (double t : times) {
    wide << format_opinion(t);
    for (std::size_t agent : agents) {
      wide << ",";
      const auto& table = lookup[agent];
      auto it = table.find(t);
      if (it != table.end()) wide << format_opinion(it->second);
    }
    wide << "\n";
  }

  const bool placements = kind == PlotKind::kPlacements;
  const std::string stem = placements ? "plot_placements" : "plot_trajectory";

  const fs::path csv_path = out_dir / (stem + ".csv");
  if (placements) {
    std::ostringstream csv;
    csv << "t,placement\n";
    auto it = parsed.series.find(0);
    if (it != parsed.series.end()) {
      for (auto [t, v] : it->second) {
        csv << format_opinion(t) << "," << format_opinion(v) << "\n";
      }
    }
    write_file_atomic(csv_path, csv.str());
    // The wide table is still useful next to the placement list.
    const fs::path wide_path = out_dir / "plot_trajectory.csv";
    write_file_atomic(wide_path, wide.str());
    written.push_back(wide_path);
  } else {
    write_file_atomic(csv_path, wide.str());
  }
  written.push_back(csv_path);

  std::vector<Series> series;
  std::size_t index = 0;
  for (std::size_t agent : agents) {
    Series s;
    s.color = series_color(index++, agents.size());
    s.points = parsed.series.at(agent);
    series.push_back(std::move(s));
  }
  std::vector<std::pair<double, double>> stars;
  if (placements) {
    auto it = parsed.series.find(0);
    if (it != parsed.series.end()) stars = it->second;
  }

  const fs::path svg_path = out_dir / (stem + ".svg");
  write_file_atomic(svg_path, svg_line_chart(series, stars, "t", "opinion",
                                             placements
                                                 ? "campaign trajectory"
                                                 : "opinion trajectory"));
  written.push_back(svg_path);
  return written;
}

}  // namespace hk
