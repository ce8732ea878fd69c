#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hk/state.hpp"

namespace hk {

enum class CostFamily { kPower, kTable };

// Distance penalty c with c(0) = 0, strictly increasing and convex. The
// power family is d^p with p >= 1; the table family interpolates sampled
// values linearly and rejects non-monotone or non-convex samples at
// construction rather than approximating them.
class CostFunction {
 public:
  static CostFunction power(double exponent);
  static CostFunction table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double distance) const;

  CostFamily family() const { return family_; }
  double exponent() const { return exponent_; }
  const std::vector<double>& table_xs() const { return xs_; }
  const std::vector<double>& table_ys() const { return ys_; }

  std::string describe() const;

 private:
  explicit CostFunction(CostFamily family) : family_(family) {}

  CostFamily family_;
  double exponent_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Inertial cost is paid for moving away from one's own opinion, disharmonic
// cost for disagreeing with each neighbor.
struct CostProfile {
  CostFunction inertial;
  CostFunction disharmonic;
};

// Either one shared profile or one profile per agent.
class CostProfileSet {
 public:
  explicit CostProfileSet(CostProfile shared);
  explicit CostProfileSet(std::vector<CostProfile> per_agent);

  const CostProfile& for_agent(std::size_t agent) const;
  bool is_shared() const { return shared_; }
  std::size_t size() const { return profiles_.size(); }

 private:
  bool shared_;
  std::vector<CostProfile> profiles_;
};

// Cost of agent `agent` declaring `candidate` against the current state:
//   inertial(|candidate - x_i|) + sum over neighbors j != i of
//   disharmonic(|candidate - x_j|).
double local_cost(double candidate, std::size_t agent, const OpinionState& state,
                  const NeighborhoodSpec& spec, const CostProfile& profile);

// Minimizer of local_cost over the neighbor opinion hull. The supported
// cost families keep the objective convex there, so the minimizer is found
// by bisecting the sign of the one-sided derivative, which localizes it to
// adjacent doubles (well inside tol; value-comparison searches stall at
// ~sqrt(eps) around the flat bottom). Isolated agents keep their opinion
// exactly.
double argmin_update(std::size_t agent, const OpinionState& state,
                     const NeighborhoodSpec& spec, const CostProfile& profile,
                     double tol = 1e-12);

// Synchronous cost-minimization step from a frozen snapshot.
OpinionState cost_step(const OpinionState& state, const NeighborhoodSpec& spec,
                       const CostProfileSet& profiles, double tol = 1e-12);

}  // namespace hk
