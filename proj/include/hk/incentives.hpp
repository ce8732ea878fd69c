#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hk/dynamics.hpp"
#include "hk/state.hpp"

namespace hk {

// One averaging step in which agent i's self-weight is reduced by an
// incentive r_i in [0, 1]:
//   x_i' = x_i + (sum_{j in N_i} (x_j - x_i)) / (|N_i| - r_i)
// With r = 0 this is exactly hk_step; an isolated agent never moves (the
// 0/0 case at r_i = 1 resolves to its own opinion).
OpinionState post_incentive_update(const OpinionState& state,
                                   std::span<const double> incentives,
                                   const NeighborhoodSpec& spec);

// sum_i (theta - x_i)^2.
double squared_distance_to_target(const OpinionState& state, double theta);

struct UnconstrainedAllocation {
  std::vector<double> incentives;  // clipped to [0, 1]
  std::vector<bool> unreachable;   // true when theta cannot be hit exactly
};

// Per-agent incentive that lands x_i' exactly on theta where possible:
//   r_i = (sum_{j in N_i} x_j - |N_i| theta) / (x_i - theta)
// Results outside [0, 1] are clipped and flagged; isolated agents off the
// target and agents already at theta but still being dragged are flagged.
UnconstrainedAllocation unconstrained_allocation(const OpinionState& state,
                                                 const NeighborhoodSpec& spec,
                                                 double theta);

struct IncentiveProblem {
  OpinionState state;  // opinions the incentives act on
  NeighborhoodSpec neighborhood = NeighborhoodSpec::bounded(1.0);
  double theta = 0.0;
  double rho = 0.0;  // total incentive budget, sum r_i <= rho
};

struct IncentiveAllocation {
  std::vector<double> incentives;
  double lambda = 0.0;        // budget multiplier estimate (0 when slack)
  double objective = 0.0;     // squared_distance_to_target after the update
  double kkt_residual = 0.0;  // max stationarity/complementarity violation
  OpinionState next_state;
  std::size_t iterations = 0;
  bool converged = true;  // false when the iteration cap was reached
};

// Minimizes the post-update squared distance to theta over the box
// 0 <= r <= 1 intersected with the budget half-space sum r <= rho, by
// projected gradient descent with backtracking line search. The best
// iterate is reported with its KKT residual even when the cap is hit.
IncentiveAllocation solve_one_step(const IncentiveProblem& problem,
                                   double tol = 1e-8,
                                   std::size_t max_iterations = 10000);

// Exhaustive reference search for populations of up to three agents: scans
// the feasible grid {0, grid_step, ..., 1}^n, then refines around the best
// point with a step-halving pattern search down to 1e-6 resolution.
IncentiveAllocation brute_force_oracle(const IncentiveProblem& problem,
                                       double grid_step);

enum class BudgetSplit { kEven, kFrontLoaded };

struct HorizonResult {
  std::vector<IncentiveAllocation> allocations;  // one per step
  Trajectory trajectory;                         // states 0..T
  double aggregate_cost = 0.0;  // sum over post-update states of the objective
  double spent = 0.0;           // total incentive actually allocated
};

// Greedy multi-step schedule: each of the `horizon` steps solves the
// one-step problem with its share of rho_total (kEven: rho_total/horizon per
// step; kFrontLoaded: all remaining budget offered each step).
HorizonResult greedy_horizon(const OpinionState& init,
                             const NeighborhoodSpec& spec, double theta,
                             double rho_total, std::size_t horizon,
                             BudgetSplit split, double tol = 1e-8);

}  // namespace hk
