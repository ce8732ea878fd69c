#include "hk/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hk {

OpinionState step_with_external(const OpinionState& state,
                                const NeighborhoodSpec& spec,
                                double external_opinion) {
  if (!std::isfinite(external_opinion)) {
    throw std::invalid_argument("step_with_external: placement must be finite");
  }
  const std::size_t n = state.size();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = state.opinions[i];
    double drift = 0.0;
    std::size_t count = 1;  // self
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double xj = state.opinions[j];
      if (!spec.within(xj, xi)) continue;
      drift += xj - xi;
      ++count;
    }
    if (spec.within(external_opinion, xi)) {
      drift += external_opinion - xi;
      ++count;
    }
    next[i] = xi + drift / static_cast<double>(count);
  }
  return OpinionState(std::move(next), state.step + 1);
}

std::vector<std::vector<std::size_t>> group_partition(
    const OpinionState& state, const NeighborhoodSpec& spec) {
  if (spec.is_unbounded()) {
    std::vector<std::size_t> all(state.size());
    std::iota(all.begin(), all.end(), 0);
    return {all};
  }
  const std::size_t n = state.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.opinions[a] < state.opinions[b];
  });

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> current{order[0]};
  for (std::size_t k = 1; k < n; ++k) {
    const double gap =
        state.opinions[order[k]] - state.opinions[order[k - 1]];
    if (gap > spec.gamma()) {
      groups.push_back(std::move(current));
      current.clear();
    }
    current.push_back(order[k]);
  }
  groups.push_back(std::move(current));
  return groups;
}

std::optional<GreedyPlacement> greedy_recursive_plan_step(
    const OpinionState& state, const NeighborhoodSpec& spec, double theta) {
  if (spec.is_unbounded()) {
    throw std::invalid_argument("greedy plan: needs a bounded neighborhood");
  }
  const auto groups = group_partition(state, spec);
  // Highest group whose minimum still trails theta.
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    std::size_t anchor = (*it)[0];
    double group_min = state.opinions[anchor];
    for (std::size_t idx : *it) {
      if (state.opinions[idx] < group_min) {
        group_min = state.opinions[idx];
        anchor = idx;
      }
    }
    if (group_min < theta) {
      // min + gamma can round up past the reach of the anchor itself, which
      // would freeze the whole campaign (the planted agent influences nobody
      // and the group never moves). Walk back to the nearest double that the
      // anchor still sees.
      double placement = group_min + spec.gamma();
      while (placement > group_min &&
             !spec.within(placement, group_min)) {
        placement = std::nextafter(placement, group_min);
      }
      return GreedyPlacement{placement, anchor};
    }
  }
  return std::nullopt;  // every opinion has crossed theta
}

namespace {

bool all_crossed(const OpinionState& state, double theta, double tol) {
  for (double v : state.opinions) {
    if (v < theta - tol) return false;
  }
  return true;
}

}  // namespace

CampaignResult run_campaign(const OpinionState& init, const CampaignSpec& spec) {
  if (spec.neighborhood.is_unbounded()) {
    throw std::invalid_argument("run_campaign: needs a bounded neighborhood");
  }
  const double gamma = spec.neighborhood.gamma();
  CampaignResult result;
  result.trajectory.states.push_back(init);
  result.bound_cap = (spec.theta - range_stats(init).min) *
                     static_cast<double>(init.size()) / gamma;

  for (std::size_t t = 0;; ++t) {
    const OpinionState& current = result.trajectory.states.back();
    if (all_crossed(current, spec.theta, spec.crossing_tol)) {
      result.success = true;
      result.crossing_step = current.step;
      break;
    }
    if (t >= spec.max_steps) break;  // NOT_REACHED

    std::optional<double> placement;
    std::optional<std::size_t> anchor;
    switch (spec.strategy) {
      case CampaignStrategy::kGreedyRecursive: {
        const auto plan =
            greedy_recursive_plan_step(current, spec.neighborhood, spec.theta);
        if (plan) {
          placement = plan->placement;
          anchor = plan->anchor_agent;
        }
        break;
      }
      case CampaignStrategy::kFixedOffset:
        placement = range_stats(current).min + spec.offset;
        break;
      case CampaignStrategy::kScripted:
        if (t < spec.script.size()) placement = spec.script[t];
        break;
    }

    OpinionState next = placement
                            ? step_with_external(current, spec.neighborhood,
                                                 *placement)
                            : hk_step(current, spec.neighborhood);
    result.placements.push_back(placement);
    result.anchors.push_back(anchor);
    result.trajectory.states.push_back(std::move(next));
  }

  result.within_bound =
      result.success &&
      static_cast<double>(*result.crossing_step) <= std::ceil(result.bound_cap);
  return result;
}

OpinionState lower_bound_scenario(std::size_t n, double gamma, double start) {
  if (n == 0) {
    throw std::invalid_argument("lower_bound_scenario: need at least one agent");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("lower_bound_scenario: gamma must be positive");
  }
  if (!std::isfinite(start)) {
    throw std::invalid_argument("lower_bound_scenario: start must be finite");
  }
  return OpinionState(std::vector<double>(n, start), 0);
}

}  // namespace hk
