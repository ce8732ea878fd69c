#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hk/cost.hpp"
#include "hk/dynamics.hpp"
#include "hk/incentives.hpp"
#include "hk/influence.hpp"
#include "hk/placement.hpp"
#include "hk/state.hpp"

namespace hk {

struct InitSpec {
  enum class Kind { kUniformRandom, kEquallySpaced, kTwoCluster, kExplicit };

  Kind kind = Kind::kUniformRandom;
  double lo = 0.0;
  double hi = 1.0;
  double center_a = 0.0, center_b = 0.0, width = 0.0;  // two-cluster bands
  std::vector<double> values;                          // explicit opinions
};

// Deterministic initial state for (spec, n, seed). Random draws consume one
// uniform per agent in agent order.
OpinionState generate_init(const InitSpec& spec, std::size_t n,
                           std::uint64_t seed);

struct DynamicsSpec {
  enum class Kind { kHk, kWeighted, kCost };

  Kind kind = Kind::kHk;
  std::optional<InfluenceFunction> influence;  // kWeighted
  std::optional<CostProfile> profile;          // kCost
  double argmin_tol = 1e-12;                   // kCost minimizer tolerance

  // Step operation over the given neighborhood; descriptive name included.
  StepFn make_step(const NeighborhoodSpec& spec) const;
  std::string describe() const;
};

struct StopSpec {
  StopRule rule = StopRule::fixed_point();
};

struct CampaignSection {
  double theta = 0.0;
  CampaignStrategy strategy = CampaignStrategy::kGreedyRecursive;
  double offset = 0.0;
  std::vector<std::optional<double>> script;
  std::size_t max_steps = 10000;
  double crossing_tol = 1e-9;
};

struct IncentiveSection {
  double theta = 0.0;
  double rho = 0.0;
  std::size_t horizon = 1;
  BudgetSplit split = BudgetSplit::kEven;
  double tolerance = 1e-8;
};

struct ScalingSection {
  std::vector<std::size_t> n_values;
  std::size_t reps = 1;
  // Either a fixed interaction radius or one derived per n from the initial
  // spacing: gamma_n = spacing / spacing_ratio (equally spaced inits only).
  std::optional<double> fixed_gamma;
  std::optional<double> spacing_ratio;
};

struct Scenario {
  enum class Kind { kSimulate, kCampaign, kIncentivize, kScaling };

  std::string name;
  Kind kind = Kind::kSimulate;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::optional<double> gamma;  // nullopt = unbounded interaction
  InitSpec init;
  DynamicsSpec dynamics;
  StopSpec stop;
  std::optional<CampaignSection> campaign;
  std::optional<IncentiveSection> incentive;
  std::optional<ScalingSection> scaling;

  NeighborhoodSpec neighborhood() const;
};

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario_file(const std::string& path);

bool operator==(const Scenario& a, const Scenario& b);

nlohmann::json influence_to_json(const InfluenceFunction& f);
InfluenceFunction influence_from_json(const nlohmann::json& doc);
nlohmann::json cost_function_to_json(const CostFunction& c);
CostFunction cost_function_from_json(const nlohmann::json& doc);

}  // namespace hk
