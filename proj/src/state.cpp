#include "hk/state.hpp"

#include <cmath>
#include <stdexcept>

namespace hk {

OpinionState::OpinionState(std::vector<double> values, std::size_t at_step)
    : step(at_step), opinions(std::move(values)) {
  if (opinions.empty()) {
    throw std::invalid_argument("OpinionState: population must not be empty");
  }
  for (double v : opinions) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("OpinionState: opinions must be finite");
    }
  }
}

RangeStats range_stats(const OpinionState& state) {
  if (state.opinions.empty()) {
    throw std::invalid_argument("range_stats: empty state");
  }
  RangeStats r{state.opinions.front(), state.opinions.front()};
  for (double v : state.opinions) {
    if (v < r.min) r.min = v;
    if (v > r.max) r.max = v;
  }
  return r;
}

NeighborhoodSpec NeighborhoodSpec::bounded(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("NeighborhoodSpec: gamma must be positive and finite");
  }
  return NeighborhoodSpec(gamma, false);
}

NeighborhoodSpec NeighborhoodSpec::unbounded() {
  return NeighborhoodSpec(0.0, true);
}

double NeighborhoodSpec::gamma() const {
  if (unbounded_) {
    throw std::logic_error("NeighborhoodSpec: unbounded spec has no gamma");
  }
  return gamma_;
}

bool NeighborhoodSpec::within(double a, double b) const {
  if (unbounded_) return true;
  return std::abs(a - b) <= gamma_;
}

}  // namespace hk
