#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hk {

// Snapshot of all agent opinions at one time step. Opinions must be finite;
// the population may not be empty.
struct OpinionState {
  std::size_t step = 0;
  std::vector<double> opinions;

  OpinionState() = default;
  explicit OpinionState(std::vector<double> values, std::size_t at_step = 0);

  std::size_t size() const { return opinions.size(); }
};

struct RangeStats {
  double min = 0.0;
  double max = 0.0;
};

// Minimum and maximum opinion of a state.
RangeStats range_stats(const OpinionState& state);

// Interaction radius. Two opinions interact when |a - b| <= gamma (closed
// ball); the unbounded variant makes every agent everyone's neighbor.
class NeighborhoodSpec {
 public:
  static NeighborhoodSpec bounded(double gamma);
  static NeighborhoodSpec unbounded();

  bool is_unbounded() const { return unbounded_; }
  double gamma() const;  // throws std::logic_error when unbounded

  // Closed-ball membership test used by every dynamics in this library.
  bool within(double a, double b) const;

 private:
  NeighborhoodSpec(double gamma, bool unbounded)
      : gamma_(gamma), unbounded_(unbounded) {}

  double gamma_ = 0.0;
  bool unbounded_ = false;
};

}  // namespace hk
