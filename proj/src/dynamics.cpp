#include "hk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hk {

std::vector<std::size_t> neighbors(const OpinionState& state, std::size_t agent,
                                   const NeighborhoodSpec& spec) {
  const std::size_t n = state.size();
  if (agent >= n) {
    throw std::out_of_range("neighbors: agent index out of range");
  }
  std::vector<std::size_t> result;
  const double xi = state.opinions[agent];
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.within(state.opinions[j], xi)) result.push_back(j);
  }
  return result;
}

OpinionState hk_step(const OpinionState& state, const NeighborhoodSpec& spec) {
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
    next[i] = xi + drift / static_cast<double>(count);
  }
  return OpinionState(std::move(next), state.step + 1);
}

OpinionState weighted_step(const OpinionState& state, const NeighborhoodSpec& spec,
                           const InfluenceFunction& influence) {
  const std::size_t n = state.size();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = state.opinions[i];
    double drift = 0.0;
    std::size_t count = 1;  // self; its drift term is exactly zero
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double xj = state.opinions[j];
      if (!spec.within(xj, xi)) continue;
      drift += influence(std::abs(xj - xi)) * (xj - xi);
      ++count;
    }
    next[i] = xi + drift / static_cast<double>(count);
  }
  return OpinionState(std::move(next), state.step + 1);
}

StopRule StopRule::max_steps_only(std::size_t max_steps) {
  StopRule rule;
  rule.kind = Kind::kMaxSteps;
  rule.max_steps = max_steps;
  return rule;
}

StopRule StopRule::fixed_point(double delta, std::size_t max_steps) {
  if (delta < 0.0) throw std::invalid_argument("StopRule: negative tolerance");
  StopRule rule;
  rule.kind = Kind::kFixedPoint;
  rule.max_steps = max_steps;
  rule.tolerance = delta;
  return rule;
}

StopRule StopRule::asymptotic(double delta, std::size_t window,
                              std::size_t max_steps) {
  if (delta < 0.0) throw std::invalid_argument("StopRule: negative tolerance");
  if (window == 0) throw std::invalid_argument("StopRule: window must be >= 1");
  StopRule rule;
  rule.kind = Kind::kAsymptotic;
  rule.max_steps = max_steps;
  rule.tolerance = delta;
  rule.window = window;
  return rule;
}

namespace {

double max_displacement(const OpinionState& a, const OpinionState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(b.opinions[i] - a.opinions[i]));
  }
  return d;
}

}  // namespace

SimulationResult simulate(const OpinionState& init, const StepFn& step,
                          const StopRule& stop) {
  SimulationResult result;
  result.trajectory.states.push_back(init);

  std::size_t quiet_run = 0;
  for (std::size_t t = 0; t < stop.max_steps; ++t) {
    const OpinionState& current = result.trajectory.states.back();
    OpinionState next = step(current);
    const double moved = max_displacement(current, next);

    if (stop.kind == StopRule::Kind::kFixedPoint && moved <= stop.tolerance) {
      // `current` is already (numerically) stationary; drop the verifier.
      result.cause = StopCause::kFixedPoint;
      result.convergence_step = current.step;
      return result;
    }

    result.trajectory.states.push_back(std::move(next));

    if (stop.kind == StopRule::Kind::kAsymptotic) {
      quiet_run = (moved <= stop.tolerance) ? quiet_run + 1 : 0;
      if (quiet_run >= stop.window) {
        result.cause = StopCause::kAsymptotic;
        result.convergence_step =
            result.trajectory.states.back().step - stop.window;
        return result;
      }
    }
  }

  result.cause = StopCause::kMaxStepsExhausted;
  return result;
}

ConvergenceRun run_to_convergence(const OpinionState& init, const StepFn& step,
                                  const StopRule& stop) {
  ConvergenceRun run;
  run.final_state = init;

  std::size_t quiet_run = 0;
  for (std::size_t t = 0; t < stop.max_steps; ++t) {
    OpinionState next = step(run.final_state);
    const double moved = max_displacement(run.final_state, next);

    if (stop.kind == StopRule::Kind::kFixedPoint && moved <= stop.tolerance) {
      run.cause = StopCause::kFixedPoint;
      run.convergence_step = run.final_state.step;
      return run;
    }

    run.final_state = std::move(next);

    if (stop.kind == StopRule::Kind::kAsymptotic) {
      quiet_run = (moved <= stop.tolerance) ? quiet_run + 1 : 0;
      if (quiet_run >= stop.window) {
        run.cause = StopCause::kAsymptotic;
        run.convergence_step = run.final_state.step - stop.window;
        return run;
      }
    }
  }

  run.cause = StopCause::kMaxStepsExhausted;
  return run;
}

ConvergenceReport detect_convergence(const Trajectory& trajectory,
                                     ConvergenceMode mode, double tolerance,
                                     std::size_t window, double merge_tol) {
  if (trajectory.states.empty()) {
    throw std::invalid_argument("detect_convergence: empty trajectory");
  }
  if (mode == ConvergenceMode::kAsymptotic && window == 0) {
    throw std::invalid_argument("detect_convergence: window must be >= 1");
  }

  ConvergenceReport report;
  report.mode = mode;

  const auto& states = trajectory.states;
  const std::size_t pairs = states.size() >= 1 ? states.size() - 1 : 0;

  if (mode == ConvergenceMode::kFixedPoint) {
    for (std::size_t t = 0; t < pairs; ++t) {
      if (max_displacement(states[t], states[t + 1]) <= tolerance) {
        report.converged = true;
        report.convergence_step = states[t].step;
        break;
      }
    }
  } else {
    std::size_t quiet_run = 0;
    for (std::size_t t = 0; t < pairs; ++t) {
      quiet_run = (max_displacement(states[t], states[t + 1]) <= tolerance)
                      ? quiet_run + 1
                      : 0;
      if (quiet_run >= window) {
        report.converged = true;
        report.convergence_step = states[t + 1 - window].step;
        break;
      }
    }
  }

  // Clusters of the last state are informative either way.
  ClusterReport clusters = cluster_equilibrium(
      states.back(), NeighborhoodSpec::unbounded(), merge_tol);
  report.final_clusters = std::move(clusters.clusters);
  return report;
}

ClusterReport cluster_equilibrium(const OpinionState& state,
                                  const NeighborhoodSpec& spec,
                                  double merge_tol) {
  if (merge_tol < 0.0) {
    throw std::invalid_argument("cluster_equilibrium: negative merge_tol");
  }
  const std::size_t n = state.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.opinions[a] < state.opinions[b];
  });

  ClusterReport report;
  report.separated_beyond_gamma = true;

  std::vector<std::size_t> members{order[0]};
  double cluster_max = state.opinions[order[0]];
  auto flush = [&](void) {
    double sum = 0.0;
    for (std::size_t idx : members) sum += state.opinions[idx];
    Cluster c;
    c.representative = sum / static_cast<double>(members.size());
    c.members = members;
    report.clusters.push_back(std::move(c));
  };

  for (std::size_t k = 1; k < n; ++k) {
    const double v = state.opinions[order[k]];
    if (v - cluster_max <= merge_tol) {
      members.push_back(order[k]);
      cluster_max = std::max(cluster_max, v);
      continue;
    }
    flush();
    // Gap between the closest members of adjacent clusters.
    const double gap = v - cluster_max;
    if (spec.is_unbounded() || gap <= spec.gamma()) {
      report.separated_beyond_gamma = false;
    }
    members = {order[k]};
    cluster_max = v;
  }
  flush();

  if (spec.is_unbounded()) {
    report.separated_beyond_gamma = report.clusters.size() == 1;
  }
  return report;
}

bool is_order_preserved(const Trajectory& trajectory, double slack) {
  if (trajectory.states.empty()) return true;
  const OpinionState& first = trajectory.states.front();
  const std::size_t n = first.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps original index order among equal initial opinions.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return first.opinions[a] < first.opinions[b];
  });

  for (const OpinionState& state : trajectory.states) {
    for (std::size_t k = 1; k < n; ++k) {
      if (state.opinions[order[k]] < state.opinions[order[k - 1]] - slack) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace hk
