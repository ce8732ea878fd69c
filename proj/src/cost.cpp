#include "hk/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hk {
namespace {

constexpr double kMonotoneSlack = 1e-15;

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                   double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) {
    // Extend the last segment's slope so costs keep growing off the table.
    const std::size_t m = xs.size();
    const double slope =
        (ys[m - 1] - ys[m - 2]) / (xs[m - 1] - xs[m - 2]);
    return ys[m - 1] + slope * (x - xs[m - 1]);
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

// One-sided slopes of the cost at radial distance u >= 0. Both exist
// everywhere for the supported families and are non-decreasing in u
// (convexity), which is what the sign bisection in argmin_update needs.
double slope_from_right(const CostFunction& c, double u) {
  if (c.family() == CostFamily::kPower) {
    const double p = c.exponent();
    return p * std::pow(u, p - 1.0);  // pow(0, 0) == 1 covers p == 1
  }
  const auto& xs = c.table_xs();
  const auto& ys = c.table_ys();
  const std::size_t m = xs.size();
  if (u >= xs[m - 1]) {
    return (ys[m - 1] - ys[m - 2]) / (xs[m - 1] - xs[m - 2]);
  }
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(xs.begin(), xs.end(), u) - xs.begin());
  return (ys[hi] - ys[hi - 1]) / (xs[hi] - xs[hi - 1]);
}

double slope_from_left(const CostFunction& c, double u) {
  if (c.family() == CostFamily::kPower) {
    const double p = c.exponent();
    return p * std::pow(u, p - 1.0);
  }
  const auto& xs = c.table_xs();
  const auto& ys = c.table_ys();
  const std::size_t m = xs.size();
  if (u >= xs[m - 1]) {
    return (ys[m - 1] - ys[m - 2]) / (xs[m - 1] - xs[m - 2]);
  }
  // First knot >= u; the segment ending there carries the left slope.
  const std::size_t hi = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(
          1, std::lower_bound(xs.begin(), xs.end(), u) - xs.begin()));
  return (ys[hi] - ys[hi - 1]) / (xs[hi] - xs[hi - 1]);
}

// Right derivative at y of cost(|y - center|): the radial slope carries the
// sign of the direction that grows the distance.
double term_slope_right(const CostFunction& c, double y, double center) {
  const double u = y - center;
  if (u >= 0.0) return slope_from_right(c, u);
  return -slope_from_left(c, -u);
}

}  // namespace

CostFunction CostFunction::power(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("cost power: exponent must be >= 1");
  }
  CostFunction c(CostFamily::kPower);
  c.exponent_ = exponent;
  return c;
}

CostFunction CostFunction::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("cost table: need >= 2 matching samples");
  }
  if (xs.front() != 0.0 || ys.front() != 0.0) {
    throw std::invalid_argument("cost table: must start at (0, 0)");
  }
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("cost table: sample points must increase");
    }
    if (!(ys[i] > ys[i - 1])) {
      throw std::invalid_argument("cost table: values must increase strictly");
    }
    const double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    if (slope < prev_slope - kMonotoneSlack) {
      // A decreasing slope would make the local objective multimodal.
      throw std::invalid_argument("cost table: samples must be convex");
    }
    prev_slope = slope;
  }
  CostFunction c(CostFamily::kTable);
  c.xs_ = std::move(xs);
  c.ys_ = std::move(ys);
  return c;
}

double CostFunction::operator()(double distance) const {
  const double x = std::abs(distance);
  switch (family_) {
    case CostFamily::kPower:
      return std::pow(x, exponent_);
    case CostFamily::kTable:
      return interpolate(xs_, ys_, x);
  }
  throw std::logic_error("CostFunction: unknown family");
}

std::string CostFunction::describe() const {
  std::ostringstream out;
  switch (family_) {
    case CostFamily::kPower:
      out << "power(" << exponent_ << ")";
      break;
    case CostFamily::kTable:
      out << "table(" << xs_.size() << " samples)";
      break;
  }
  return out.str();
}

CostProfileSet::CostProfileSet(CostProfile shared)
    : shared_(true), profiles_{std::move(shared)} {}

CostProfileSet::CostProfileSet(std::vector<CostProfile> per_agent)
    : shared_(false), profiles_(std::move(per_agent)) {
  if (profiles_.empty()) {
    throw std::invalid_argument("CostProfileSet: need at least one profile");
  }
}

const CostProfile& CostProfileSet::for_agent(std::size_t agent) const {
  if (shared_) return profiles_.front();
  if (agent >= profiles_.size()) {
    throw std::out_of_range("CostProfileSet: agent index out of range");
  }
  return profiles_[agent];
}

double local_cost(double candidate, std::size_t agent, const OpinionState& state,
                  const NeighborhoodSpec& spec, const CostProfile& profile) {
  const std::size_t n = state.size();
  if (agent >= n) {
    throw std::out_of_range("local_cost: agent index out of range");
  }
  const double xi = state.opinions[agent];
  double total = profile.inertial(std::abs(candidate - xi));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    const double xj = state.opinions[j];
    if (!spec.within(xj, xi)) continue;
    total += profile.disharmonic(std::abs(candidate - xj));
  }
  return total;
}

double argmin_update(std::size_t agent, const OpinionState& state,
                     const NeighborhoodSpec& spec, const CostProfile& profile,
                     double tol) {
  const std::size_t n = state.size();
  if (agent >= n) {
    throw std::out_of_range("argmin_update: agent index out of range");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("argmin_update: tolerance must be positive");
  }

  const double xi = state.opinions[agent];
  double lo = xi;
  double hi = xi;
  bool has_other = false;
  std::vector<double> centers;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    const double xj = state.opinions[j];
    if (!spec.within(xj, xi)) continue;
    lo = std::min(lo, xj);
    hi = std::max(hi, xj);
    centers.push_back(xj);
    has_other = true;
  }
  // Isolated agents (and single-point hulls) stay put at zero cost.
  if (!has_other || hi - lo <= 0.0) return xi;

  // Right derivative of the local cost: non-decreasing on the hull because
  // every term is convex in y. Bisecting its sign localizes the minimizer
  // to adjacent doubles; comparing cost values cannot (the objective is
  // flat to rounding within ~sqrt(eps) of the bottom, far wider than tol).
  const auto dplus = [&](double y) {
    double total = term_slope_right(profile.inertial, y, xi);
    for (double c : centers) total += term_slope_right(profile.disharmonic, y, c);
    return total;
  };

  double a = lo;
  double b = hi;
  if (dplus(a) >= 0.0) return a;  // cost non-decreasing across the hull
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (dplus(mid) < 0.0 ? a : b) = mid;
  }
  // Prefer the side where the slope turned non-negative; on an exact
  // stationary hit that is the minimizer itself.
  return local_cost(b, agent, state, spec, profile) <=
                 local_cost(a, agent, state, spec, profile)
             ? b
             : a;
}

OpinionState cost_step(const OpinionState& state, const NeighborhoodSpec& spec,
                       const CostProfileSet& profiles, double tol) {
  if (!profiles.is_shared() && profiles.size() != state.size()) {
    throw std::invalid_argument("cost_step: profile count must match agents");
  }
  const std::size_t n = state.size();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = argmin_update(i, state, spec, profiles.for_agent(i), tol);
  }
  return OpinionState(std::move(next), state.step + 1);
}

}  // namespace hk
