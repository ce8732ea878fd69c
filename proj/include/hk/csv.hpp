#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "hk/dynamics.hpp"

namespace hk {

// Shortest round-trip-exact decimal form of a double (17 significant digits).
std::string format_opinion(double value);

// Long-format trajectory table: header `t,agent,opinion`, one row per
// (step, agent) with agents numbered from 1. Agent id 0 is reserved for the
// external agent: when `placements` is non-empty, row (t, 0, x0) precedes the
// population rows of every step t whose transition used a placement.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const std::optional<double>> placements = {});

}  // namespace hk
