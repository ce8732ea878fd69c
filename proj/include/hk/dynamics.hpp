#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hk/influence.hpp"
#include "hk/state.hpp"

namespace hk {

// Indices (ascending, self included) of agents within the interaction radius
// of `agent`. Throws std::out_of_range for a bad index.
std::vector<std::size_t> neighbors(const OpinionState& state, std::size_t agent,
                                   const NeighborhoodSpec& spec);

// Synchronous averaging step: every agent moves to the mean of its neighbor
// opinions (self included). Computed in drift form
//   x_i' = x_i + (sum_j (x_j - x_i)) / |N_i|
// so the weighted step with a constant-one influence reproduces it bit for
// bit.
OpinionState hk_step(const OpinionState& state, const NeighborhoodSpec& spec);

// Influence-weighted averaging step:
//   x_i' = x_i + (sum_{j in N_i} f(|x_j - x_i|) (x_j - x_i)) / |N_i|
// The divisor is the neighbor count, not the weight sum.
OpinionState weighted_step(const OpinionState& state, const NeighborhoodSpec& spec,
                           const InfluenceFunction& influence);

using StepFn = std::function<OpinionState(const OpinionState&)>;

struct Trajectory {
  std::vector<OpinionState> states;
  std::string config;       // human-readable description of the dynamics
  std::uint64_t seed = 0;   // seed that generated the initial state (0 if n/a)

  std::size_t length() const { return states.size(); }
  const OpinionState& front() const { return states.front(); }
  const OpinionState& back() const { return states.back(); }
};

// Stopping policy for simulate(). Every rule carries a hard max_steps cap;
// reaching the cap before the rule fires reports kMaxStepsExhausted.
struct StopRule {
  enum class Kind { kMaxSteps, kFixedPoint, kAsymptotic };

  Kind kind = Kind::kMaxSteps;
  std::size_t max_steps = 0;
  double tolerance = 0.0;   // fixed point: delta; asymptotic: delta_c
  std::size_t window = 0;   // asymptotic: consecutive quiet steps required

  static StopRule max_steps_only(std::size_t max_steps);
  static StopRule fixed_point(double delta = 1e-12, std::size_t max_steps = 1000000);
  static StopRule asymptotic(double delta = 1e-9, std::size_t window = 10,
                             std::size_t max_steps = 1000000);
};

enum class StopCause { kFixedPoint, kAsymptotic, kMaxStepsExhausted };

struct SimulationResult {
  Trajectory trajectory;
  StopCause cause = StopCause::kMaxStepsExhausted;
  // Fixed point: first t whose next step moves nothing beyond tolerance.
  // Asymptotic: first t opening the quiet window.
  std::optional<std::size_t> convergence_step;

  bool converged() const { return cause != StopCause::kMaxStepsExhausted; }
};

// Applies `step` repeatedly starting from `init` until the stop rule fires.
// The recorded trajectory never includes the redundant state that verified a
// fixed point, so an initial fixed point yields a length-1 trajectory.
SimulationResult simulate(const OpinionState& init, const StepFn& step,
                          const StopRule& stop);

struct ConvergenceRun {
  OpinionState final_state;
  StopCause cause = StopCause::kMaxStepsExhausted;
  std::optional<std::size_t> convergence_step;

  bool converged() const { return cause != StopCause::kMaxStepsExhausted; }
};

// simulate() minus the trajectory: keeps only the terminal state, so long
// sweeps over large populations stay O(n) in memory.
ConvergenceRun run_to_convergence(const OpinionState& init, const StepFn& step,
                                  const StopRule& stop);

enum class ConvergenceMode { kFixedPoint, kAsymptotic };

struct Cluster {
  double representative = 0.0;           // mean opinion of the members
  std::vector<std::size_t> members;      // original agent indices
};

struct ConvergenceReport {
  bool converged = false;
  ConvergenceMode mode = ConvergenceMode::kFixedPoint;
  std::optional<std::size_t> convergence_step;
  std::vector<Cluster> final_clusters;
};

// Scans a recorded trajectory. Fixed-point mode reports the first t with
// max_i |x_i(t+1) - x_i(t)| <= tolerance; asymptotic mode reports the first
// t where that displacement stays below tolerance for `window` consecutive
// steps. Clusters of the final state are grouped at merge_tol.
ConvergenceReport detect_convergence(const Trajectory& trajectory,
                                     ConvergenceMode mode, double tolerance,
                                     std::size_t window = 10,
                                     double merge_tol = 1e-9);

struct ClusterReport {
  std::vector<Cluster> clusters;           // ordered by opinion, low to high
  bool separated_beyond_gamma = false;     // all inter-cluster gaps > gamma
};

// Groups agents whose opinions chain together within merge_tol and flags
// whether adjacent clusters sit farther than gamma apart (an equilibrium
// certificate for bounded interaction). With an unbounded spec the flag is
// true only for a single cluster.
ClusterReport cluster_equilibrium(const OpinionState& state,
                                  const NeighborhoodSpec& spec,
                                  double merge_tol = 1e-9);

// True when the agent ordering induced by the initial state (stable on ties)
// stays sorted at every recorded step, with `slack` tolerance per pair.
bool is_order_preserved(const Trajectory& trajectory, double slack = 1e-12);

}  // namespace hk
