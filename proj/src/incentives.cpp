#include "hk/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hk {

OpinionState post_incentive_update(const OpinionState& state,
                                   std::span<const double> incentives,
                                   const NeighborhoodSpec& spec) {
  const std::size_t n = state.size();
  if (incentives.size() != n) {
    throw std::invalid_argument("post_incentive_update: incentive size mismatch");
  }
  for (double r : incentives) {
    if (!(r >= 0.0) || !(r <= 1.0)) {
      throw std::invalid_argument("post_incentive_update: incentives must be in [0, 1]");
    }
  }

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
    if (count == 1) {
      // No influence to amplify: the 0/0 limit at r_i = 1 keeps x_i.
      next[i] = xi;
      continue;
    }
    next[i] = xi + drift / (static_cast<double>(count) - incentives[i]);
  }
  return OpinionState(std::move(next), state.step + 1);
}

double squared_distance_to_target(const OpinionState& state, double theta) {
  double total = 0.0;
  for (double v : state.opinions) {
    const double gap = theta - v;
    total += gap * gap;
  }
  return total;
}

UnconstrainedAllocation unconstrained_allocation(const OpinionState& state,
                                                 const NeighborhoodSpec& spec,
                                                 double theta) {
  const std::size_t n = state.size();
  UnconstrainedAllocation out;
  out.incentives.assign(n, 0.0);
  out.unreachable.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    const double xi = state.opinions[i];
    double neighbor_sum = xi;
    std::size_t count = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double xj = state.opinions[j];
      if (!spec.within(xj, xi)) continue;
      neighbor_sum += xj;
      ++count;
    }

    if (count == 1) {
      // Incentives only reweight inertia; they cannot move a lone agent.
      out.incentives[i] = 0.0;
      out.unreachable[i] = xi != theta;
      continue;
    }

    const double numerator = neighbor_sum - static_cast<double>(count) * theta;
    if (xi == theta) {
      // Already on target: reachable only if the neighborhood pull vanishes.
      out.incentives[i] = 0.0;
      out.unreachable[i] = numerator != 0.0;
      continue;
    }

    const double raw = numerator / (xi - theta);
    if (raw < 0.0) {
      out.incentives[i] = 0.0;
      out.unreachable[i] = true;
    } else if (raw > 1.0) {
      out.incentives[i] = 1.0;
      out.unreachable[i] = true;
    } else {
      out.incentives[i] = raw;
      out.unreachable[i] = false;
    }
  }
  return out;
}

namespace {

// Per-agent constants of the one-step problem: x_i'(r_i) = x_i + S_i/(n_i - r_i).
struct StepTerms {
  std::vector<double> drift;   // S_i
  std::vector<double> degree;  // |N_i| as double
};

StepTerms collect_terms(const OpinionState& state, const NeighborhoodSpec& spec) {
  const std::size_t n = state.size();
  StepTerms terms;
  terms.drift.assign(n, 0.0);
  terms.degree.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = state.opinions[i];
    double drift = 0.0;
    std::size_t count = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double xj = state.opinions[j];
      if (!spec.within(xj, xi)) continue;
      drift += xj - xi;
      ++count;
    }
    terms.drift[i] = drift;
    terms.degree[i] = static_cast<double>(count);
  }
  return terms;
}

double objective_value(const StepTerms& terms, const OpinionState& state,
                       double theta, const std::vector<double>& r) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double xi2 = state.opinions[i];
    if (terms.degree[i] > 1.0) {
      xi2 += terms.drift[i] / (terms.degree[i] - r[i]);
    }
    const double gap = theta - xi2;
    total += gap * gap;
  }
  return total;
}

std::vector<double> objective_gradient(const StepTerms& terms,
                                       const OpinionState& state, double theta,
                                       const std::vector<double>& r) {
  std::vector<double> grad(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (terms.degree[i] <= 1.0) continue;  // isolated: objective flat in r_i
    const double denom = terms.degree[i] - r[i];
    const double xi2 = state.opinions[i] + terms.drift[i] / denom;
    grad[i] = -2.0 * (theta - xi2) * terms.drift[i] / (denom * denom);
  }
  return grad;
}

// Euclidean projection onto {0 <= r <= 1} intersected with {sum r <= rho}.
std::vector<double> project_feasible(std::vector<double> v, double rho) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum <= rho) return v;

  // Find the shift tau with sum_i clamp(v_i - tau, 0, 1) = rho; the map is
  // non-increasing in tau, so bisect. Take the upper end to keep the result
  // inside the budget.
  double lo = 0.0;
  double hi = 0.0;
  for (double x : v) hi = std::max(hi, x);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : v) s += std::clamp(x - mid, 0.0, 1.0);
    if (s > rho) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16) break;
  }
  for (double& x : v) x = std::clamp(x - hi, 0.0, 1.0);
  return v;
}

struct KktEstimate {
  double lambda = 0.0;
  double residual = 0.0;
};

double kkt_residual_for(const std::vector<double>& r,
                        const std::vector<double>& grad, double rho,
                        double lambda) {
  constexpr double kBoundary = 1e-9;
  double residual = std::max(0.0, -lambda);
  double sum = 0.0;
  for (double x : r) sum += x;
  residual = std::max(residual, sum - rho);
  residual = std::max(residual, std::abs(lambda * (sum - rho)));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double slope = grad[i] + lambda;
    if (r[i] <= kBoundary) {
      residual = std::max(residual, -slope);  // must point outward (>= 0)
    } else if (r[i] >= 1.0 - kBoundary) {
      residual = std::max(residual, slope);  // must point outward (<= 0)
    } else {
      residual = std::max(residual, std::abs(slope));
    }
  }
  return residual;
}

KktEstimate estimate_kkt(const std::vector<double>& r,
                         const std::vector<double>& grad, double rho,
                         const std::vector<double>& degree) {
  constexpr double kBoundary = 1e-9;
  double sum = 0.0;
  for (double x : r) sum += x;
  const bool budget_active = sum >= rho - 1e-9;

  std::vector<double> candidates{0.0};
  if (budget_active) {
    double interior_sum = 0.0;
    std::size_t interior_count = 0;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (degree[i] <= 1.0) continue;  // flat coordinates say nothing
      if (r[i] <= kBoundary) {
        lower = std::max(lower, -grad[i]);
      } else if (r[i] >= 1.0 - kBoundary) {
        upper = std::min(upper, -grad[i]);
      } else {
        interior_sum += -grad[i];
        ++interior_count;
      }
    }
    if (interior_count > 0) {
      candidates.push_back(std::max(0.0, interior_sum / interior_count));
    }
    candidates.push_back(std::max(0.0, lower));
    if (std::isfinite(upper)) candidates.push_back(std::max(0.0, upper));
    if (std::isfinite(upper) && upper >= lower) {
      candidates.push_back(std::max(0.0, 0.5 * (lower + upper)));
    }
  }

  KktEstimate best;
  best.lambda = candidates.front();
  best.residual = kkt_residual_for(r, grad, rho, best.lambda);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double res = kkt_residual_for(r, grad, rho, candidates[k]);
    if (res < best.residual) {
      best.residual = res;
      best.lambda = candidates[k];
    }
  }
  return best;
}

struct DescentRun {
  std::vector<double> r;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  KktEstimate kkt;
};

DescentRun projected_gradient_descent(const StepTerms& terms,
                                      const OpinionState& state, double theta,
                                      double rho, std::vector<double> start,
                                      double tol, std::size_t max_iterations) {
  DescentRun run;
  run.r = project_feasible(std::move(start), rho);
  run.value = objective_value(terms, state, theta, run.r);

  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-18;

  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    const std::vector<double> grad =
        objective_gradient(terms, state, theta, run.r);
    run.kkt = estimate_kkt(run.r, grad, rho, terms.degree);
    if (run.kkt.residual <= tol) {
      run.converged = true;
      break;
    }

    // Backtracking along the projection arc.
    bool moved = false;
    while (step >= kMinStep) {
      std::vector<double> trial(run.r.size());
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] = run.r[i] - step * grad[i];
      }
      trial = project_feasible(std::move(trial), rho);

      double decrease = 0.0;
      double movement = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        const double delta = trial[i] - run.r[i];
        decrease += grad[i] * delta;
        movement = std::max(movement, std::abs(delta));
      }
      if (movement <= 1e-18) break;  // projection fixed point

      const double trial_value = objective_value(terms, state, theta, trial);
      if (trial_value <= run.value + kArmijo * decrease) {
        run.r = std::move(trial);
        run.value = trial_value;
        step = std::min(step * 1.5, 1e6);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // Stalled at a projection fixed point; the residual above stands.
      break;
    }
  }
  run.iterations = it;
  // The loop may exit on the iteration cap right after a move; make the
  // reported multiplier and residual match the final iterate.
  run.kkt = estimate_kkt(run.r, objective_gradient(terms, state, theta, run.r),
                         rho, terms.degree);
  if (run.kkt.residual <= tol) run.converged = true;
  return run;
}

IncentiveAllocation finish_allocation(const IncentiveProblem& problem,
                                      const StepTerms& terms,
                                      const DescentRun& run) {
  IncentiveAllocation out;
  out.incentives = run.r;
  out.lambda = run.kkt.lambda;
  out.kkt_residual = run.kkt.residual;
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.next_state = post_incentive_update(problem.state, out.incentives,
                                         problem.neighborhood);
  out.objective = squared_distance_to_target(out.next_state, problem.theta);
  return out;
}

}  // namespace

IncentiveAllocation solve_one_step(const IncentiveProblem& problem, double tol,
                                   std::size_t max_iterations) {
  if (!(problem.rho >= 0.0)) {
    throw std::invalid_argument("solve_one_step: budget must be non-negative");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_one_step: tolerance must be positive");
  }
  const std::size_t n = problem.state.size();
  const StepTerms terms = collect_terms(problem.state, problem.neighborhood);

  // The objective is per-coordinate unimodal but its restriction to the
  // budget face need not be; a couple of extra deterministic starts guard
  // against landing in the wrong valley.
  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 0.0);
  const UnconstrainedAllocation exact = unconstrained_allocation(
      problem.state, problem.neighborhood, problem.theta);
  starts.push_back(exact.incentives);
  if (n <= 4) {
    const double lump = std::min(problem.rho, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> s(n, 0.0);
      s[i] = lump;
      starts.push_back(std::move(s));
    }
  }

  std::optional<DescentRun> best;
  for (auto& start : starts) {
    DescentRun run = projected_gradient_descent(
        terms, problem.state, problem.theta, problem.rho, std::move(start), tol,
        max_iterations);
    if (!best || run.value < best->value ||
        (run.value == best->value && run.kkt.residual < best->kkt.residual)) {
      best = std::move(run);
    }
  }
  return finish_allocation(problem, terms, *best);
}

IncentiveAllocation brute_force_oracle(const IncentiveProblem& problem,
                                       double grid_step) {
  const std::size_t n = problem.state.size();
  if (n > 3) {
    throw std::invalid_argument("brute_force_oracle: supports at most 3 agents");
  }
  if (!(grid_step > 0.0) || !(grid_step <= 1.0)) {
    throw std::invalid_argument("brute_force_oracle: grid_step must be in (0, 1]");
  }
  const StepTerms terms = collect_terms(problem.state, problem.neighborhood);

  const std::size_t points =
      static_cast<std::size_t>(std::floor(1.0 / grid_step + 0.5)) + 1;
  auto grid_value = [&](std::size_t k) {
    return std::min(1.0, static_cast<double>(k) * grid_step);
  };

  std::vector<double> best(n, 0.0);
  double best_value = objective_value(terms, problem.state, problem.theta, best);
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<double> r(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = grid_value(idx[i]);
      sum += r[i];
    }
    if (sum <= problem.rho) {
      const double value =
          objective_value(terms, problem.state, problem.theta, r);
      if (value < best_value) {
        best_value = value;
        best = r;
      }
    }
    std::size_t d = 0;
    for (; d < n; ++d) {
      if (++idx[d] < points) break;
      idx[d] = 0;
    }
    if (d == n) break;
  }

  // Step-halving pattern search around the best grid point; axis moves plus
  // paired moves that slide along the budget face.
  double step = grid_step;
  auto feasible = [&](const std::vector<double>& r) {
    double sum = 0.0;
    for (double x : r) {
      if (x < 0.0 || x > 1.0) return false;
      sum += x;
    }
    return sum <= problem.rho;
  };
  while (step > 1e-6) {
    bool improved = false;
    auto try_move = [&](std::vector<double> cand) {
      if (!feasible(cand)) return;
      const double value =
          objective_value(terms, problem.state, problem.theta, cand);
      if (value < best_value) {
        best_value = value;
        best = std::move(cand);
        improved = true;
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> cand = best;
        cand[i] += sign * step;
        try_move(std::move(cand));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<double> cand = best;
        cand[i] += step;
        cand[j] -= step;
        try_move(std::move(cand));
      }
    }
    if (!improved) step *= 0.5;
  }

  DescentRun run;
  run.r = best;
  run.value = best_value;
  run.converged = true;
  run.kkt = estimate_kkt(
      best, objective_gradient(terms, problem.state, problem.theta, best),
      problem.rho, terms.degree);
  return finish_allocation(problem, terms, run);
}

HorizonResult greedy_horizon(const OpinionState& init,
                             const NeighborhoodSpec& spec, double theta,
                             double rho_total, std::size_t horizon,
                             BudgetSplit split, double tol) {
  if (horizon == 0) {
    throw std::invalid_argument("greedy_horizon: horizon must be >= 1");
  }
  if (!(rho_total >= 0.0)) {
    throw std::invalid_argument("greedy_horizon: budget must be non-negative");
  }

  HorizonResult result;
  result.trajectory.states.push_back(init);

  double remaining = rho_total;
  for (std::size_t t = 0; t < horizon; ++t) {
    IncentiveProblem problem;
    problem.state = result.trajectory.states.back();
    problem.neighborhood = spec;
    problem.theta = theta;
    problem.rho = (split == BudgetSplit::kEven)
                      ? rho_total / static_cast<double>(horizon)
                      : remaining;

    IncentiveAllocation allocation = solve_one_step(problem, tol);
    double spend = 0.0;
    for (double r : allocation.incentives) spend += r;
    remaining = std::max(0.0, remaining - spend);
    result.spent += spend;

    result.trajectory.states.push_back(allocation.next_state);
    result.aggregate_cost +=
        squared_distance_to_target(allocation.next_state, theta);
    result.allocations.push_back(std::move(allocation));
  }
  return result;
}

}  // namespace hk
