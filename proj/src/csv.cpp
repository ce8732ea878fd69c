#include "hk/csv.hpp"

#include <cstdio>

namespace hk {

std::string format_opinion(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const std::optional<double>> placements) {
  out << "t,agent,opinion\n";
  for (std::size_t t = 0; t < trajectory.states.size(); ++t) {
    const OpinionState& state = trajectory.states[t];
    if (t < placements.size() && placements[t].has_value()) {
      out << state.step << ",0," << format_opinion(*placements[t]) << "\n";
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
      out << state.step << "," << (i + 1) << ","
          << format_opinion(state.opinions[i]) << "\n";
    }
  }
}

}  // namespace hk
