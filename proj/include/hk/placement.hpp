#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hk/dynamics.hpp"
#include "hk/state.hpp"

namespace hk {

// One averaging step with a non-updating external agent at
// `external_opinion`. Agents within gamma of the external opinion count it
// as one extra neighbor; everyone else moves exactly as under hk_step.
OpinionState step_with_external(const OpinionState& state,
                                const NeighborhoodSpec& spec,
                                double external_opinion);

// Maximal chains of agents whose sorted opinions never jump by more than
// gamma, ordered lowest to highest. Members carry original agent indices.
std::vector<std::vector<std::size_t>> group_partition(
    const OpinionState& state, const NeighborhoodSpec& spec);

struct GreedyPlacement {
  double placement = 0.0;        // external opinion for this step
  std::size_t anchor_agent = 0;  // minimum member of the targeted group
};

// One planning step of the group-herding strategy: pick the highest group
// whose minimum is still below theta and sit gamma above that minimum.
// Returns nothing when every opinion has reached theta.
std::optional<GreedyPlacement> greedy_recursive_plan_step(
    const OpinionState& state, const NeighborhoodSpec& spec, double theta);

enum class CampaignStrategy { kGreedyRecursive, kFixedOffset, kScripted };

struct CampaignSpec {
  double theta = 0.0;
  NeighborhoodSpec neighborhood = NeighborhoodSpec::bounded(1.0);
  CampaignStrategy strategy = CampaignStrategy::kGreedyRecursive;
  double offset = 0.0;  // kFixedOffset: placement = current minimum + offset
  std::vector<std::optional<double>> script;  // kScripted; nullopt = absent
  std::size_t max_steps = 0;
  // An opinion counts as across theta when >= theta - crossing_tol; absorbs
  // last-ulp rounding against decimal targets.
  double crossing_tol = 1e-9;
};

struct CampaignResult {
  bool success = false;
  std::optional<std::size_t> crossing_step;          // T on success
  std::vector<std::optional<double>> placements;     // one per transition
  std::vector<std::optional<std::size_t>> anchors;   // greedy anchor agents
  Trajectory trajectory;                             // states 0..T (or cap)
  double bound_cap = 0.0;       // (theta - min(0)) * n / gamma
  bool within_bound = false;    // success and T <= ceil(bound_cap)
};

// Drives the population until every opinion reaches theta or max_steps runs
// out. The external agent is re-placed (or withheld) each step per strategy;
// steps without a placement fall back to plain averaging.
CampaignResult run_campaign(const OpinionState& init, const CampaignSpec& spec);

// All n agents share one opinion: the worst case for single-agent herding,
// where every step gains at most gamma / (n + 1).
OpinionState lower_bound_scenario(std::size_t n, double gamma, double start);

}  // namespace hk
