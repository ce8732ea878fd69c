#include "hk/influence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hk {
namespace {

constexpr double kGridSlack = 1e-12;

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                   double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace

InfluenceFunction InfluenceFunction::constant_one() {
  return InfluenceFunction(InfluenceFamily::kConstantOne);
}

InfluenceFunction InfluenceFunction::exp_squared() {
  return InfluenceFunction(InfluenceFamily::kExpSquared);
}

InfluenceFunction InfluenceFunction::exp_abs() {
  return InfluenceFunction(InfluenceFamily::kExpAbs);
}

InfluenceFunction InfluenceFunction::exp_sqrt() {
  return InfluenceFunction(InfluenceFamily::kExpSqrt);
}

InfluenceFunction InfluenceFunction::plateau_linear(double epsilon, double gamma,
                                                    double terminal) {
  if (!(epsilon > 0.0) || !(epsilon < gamma)) {
    throw std::invalid_argument("plateau_linear: need 0 < epsilon < gamma");
  }
  if (!(terminal > 0.0) || !(terminal <= 1.0)) {
    throw std::invalid_argument("plateau_linear: terminal value must be in (0, 1]");
  }
  InfluenceFunction f(InfluenceFamily::kPlateauLinear);
  f.epsilon_ = epsilon;
  f.gamma_ = gamma;
  f.terminal_ = terminal;
  return f;
}

InfluenceFunction InfluenceFunction::table(std::vector<double> xs,
                                           std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("influence table: need >= 2 matching samples");
  }
  if (xs.front() != 0.0) {
    throw std::invalid_argument("influence table: first sample must be at 0");
  }
  if (ys.front() != 1.0) {
    throw std::invalid_argument("influence table: f(0) must be 1");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("influence table: sample points must increase");
    }
    if (ys[i] > ys[i - 1] + kGridSlack) {
      throw std::invalid_argument("influence table: values must be non-increasing");
    }
  }
  for (double y : ys) {
    if (!(y >= 0.0) || !(y <= 1.0)) {
      throw std::invalid_argument("influence table: values must lie in [0, 1]");
    }
  }
  InfluenceFunction f(InfluenceFamily::kTable);
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

double InfluenceFunction::operator()(double distance) const {
  const double x = std::abs(distance);
  switch (family_) {
    case InfluenceFamily::kConstantOne:
      return 1.0;
    case InfluenceFamily::kExpSquared:
      return std::exp(-x * x);
    case InfluenceFamily::kExpAbs:
      return std::exp(-x);
    case InfluenceFamily::kExpSqrt:
      return std::exp(-std::sqrt(x));
    case InfluenceFamily::kPlateauLinear:
      if (x <= epsilon_) return 1.0;
      if (x >= gamma_) return terminal_;
      return 1.0 + (terminal_ - 1.0) * (x - epsilon_) / (gamma_ - epsilon_);
    case InfluenceFamily::kTable:
      return interpolate(xs_, ys_, x);
  }
  throw std::logic_error("InfluenceFunction: unknown family");
}

std::string InfluenceFunction::describe() const {
  std::ostringstream out;
  switch (family_) {
    case InfluenceFamily::kConstantOne: out << "constant_one"; break;
    case InfluenceFamily::kExpSquared: out << "exp_sq"; break;
    case InfluenceFamily::kExpAbs: out << "exp_abs"; break;
    case InfluenceFamily::kExpSqrt: out << "exp_sqrt"; break;
    case InfluenceFamily::kPlateauLinear:
      out << "plateau_linear(epsilon=" << epsilon_ << ",gamma=" << gamma_
          << ",terminal=" << terminal_ << ")";
      break;
    case InfluenceFamily::kTable:
      out << "table(" << xs_.size() << " samples)";
      break;
  }
  return out.str();
}

AssumptionReport check_influence_assumptions(const InfluenceFunction& f,
                                             double gamma, double epsilon,
                                             std::size_t grid_points) {
  if (!(gamma > 0.0) || !(epsilon > 0.0) || !(epsilon < gamma)) {
    throw std::invalid_argument(
        "check_influence_assumptions: need 0 < epsilon < gamma");
  }
  if (grid_points < 2) {
    throw std::invalid_argument("check_influence_assumptions: grid too small");
  }

  AssumptionReport report;
  report.plateau_near_origin = true;
  report.xfx_nondecreasing = true;
  double worst = 0.0;

  double prev_xfx = 0.0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x = gamma * static_cast<double>(k) /
                     static_cast<double>(grid_points - 1);
    const double fx = f(x);
    if (x <= epsilon) {
      const double breach = std::abs(fx - 1.0);
      if (breach > kGridSlack) {
        report.plateau_near_origin = false;
        worst = std::max(worst, breach);
      }
    }
    const double xfx = x * fx;
    if (k > 0) {
      const double drop = prev_xfx - xfx;
      if (drop > kGridSlack) {
        report.xfx_nondecreasing = false;
        worst = std::max(worst, drop);
      }
    }
    prev_xfx = xfx;
  }

  const double at_gamma = f(gamma);
  report.positive_at_gamma = at_gamma > 0.0;
  if (!report.positive_at_gamma) {
    worst = std::max(worst, -at_gamma + kGridSlack);
  }

  report.worst_violation = worst;
  return report;
}

InfluenceValidation validate_influence(const InfluenceFunction& f, double gamma,
                                       std::size_t grid_points) {
  if (!(gamma > 0.0) || grid_points < 2) {
    throw std::invalid_argument("validate_influence: bad gamma or grid");
  }
  InfluenceValidation v;
  double worst = 0.0;

  const double at_zero = f(0.0);
  v.unit_at_zero = std::abs(at_zero - 1.0) <= kGridSlack;
  if (!v.unit_at_zero) worst = std::max(worst, std::abs(at_zero - 1.0));

  v.within_unit_range = true;
  v.non_increasing = true;
  double prev = at_zero;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x = gamma * static_cast<double>(k) /
                     static_cast<double>(grid_points - 1);
    const double fx = f(x);
    if (fx < -kGridSlack || fx > 1.0 + kGridSlack) {
      v.within_unit_range = false;
      worst = std::max(worst, std::max(-fx, fx - 1.0));
    }
    if (fx > prev + kGridSlack) {
      v.non_increasing = false;
      worst = std::max(worst, fx - prev);
    }
    prev = fx;
  }
  v.worst_violation = worst;
  return v;
}

}  // namespace hk
