#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hk {

enum class InfluenceFamily {
  kConstantOne,
  kExpSquared,    // exp(-x^2)
  kExpAbs,        // exp(-|x|)
  kExpSqrt,       // exp(-sqrt(|x|))
  kPlateauLinear, // 1 on [0, epsilon], linear down to terminal at gamma
  kTable,         // piecewise-linear interpolation of sampled values
};

// Distance-dependent interaction strength. Values live in [0, 1] with
// f(0) = 1 and f non-increasing; validate_influence() spot-checks this on a
// dense grid for the table family and for out-of-family parameters.
class InfluenceFunction {
 public:
  static InfluenceFunction constant_one();
  static InfluenceFunction exp_squared();
  static InfluenceFunction exp_abs();
  static InfluenceFunction exp_sqrt();

  // plateau width epsilon must satisfy 0 < epsilon < gamma; the terminal
  // value f(gamma) must lie in (0, 1]. Beyond gamma the terminal value is
  // held constant.
  static InfluenceFunction plateau_linear(double epsilon, double gamma,
                                          double terminal);

  // Sampled influence values; xs must start at 0 and increase strictly,
  // ys[0] must be 1, ys must be non-increasing within [0, 1]. Evaluation
  // interpolates linearly and clamps to the last sample beyond the range.
  static InfluenceFunction table(std::vector<double> xs,
                                 std::vector<double> ys);

  double operator()(double distance) const;

  InfluenceFamily family() const { return family_; }
  double plateau_epsilon() const { return epsilon_; }
  double plateau_gamma() const { return gamma_; }
  double plateau_terminal() const { return terminal_; }
  const std::vector<double>& table_xs() const { return xs_; }
  const std::vector<double>& table_ys() const { return ys_; }

  std::string describe() const;

 private:
  explicit InfluenceFunction(InfluenceFamily family) : family_(family) {}

  InfluenceFamily family_;
  double epsilon_ = 0.0;
  double gamma_ = 0.0;
  double terminal_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Admissibility of an influence function for finite-time convergence:
//   plateau_near_origin : f(x) = 1 for all x <= epsilon
//   positive_at_gamma   : f(gamma) > 0
//   xfx_nondecreasing   : x * f(x) non-decreasing on [0, gamma]
// Checked on a grid of `grid_points` samples (>= 1000 by default) with
// slack 1e-12; worst_violation reports the largest observed breach.
struct AssumptionReport {
  bool plateau_near_origin = false;
  bool positive_at_gamma = false;
  bool xfx_nondecreasing = false;
  double worst_violation = 0.0;

  bool all() const {
    return plateau_near_origin && positive_at_gamma && xfx_nondecreasing;
  }
};

AssumptionReport check_influence_assumptions(const InfluenceFunction& f,
                                             double gamma, double epsilon,
                                             std::size_t grid_points = 1001);

// Basic admissibility of the function itself on [0, gamma]: f(0) = 1,
// values within [0, 1], non-increasing. Grid-checked with slack 1e-12.
struct InfluenceValidation {
  bool unit_at_zero = false;
  bool within_unit_range = false;
  bool non_increasing = false;
  double worst_violation = 0.0;

  bool all() const { return unit_at_zero && within_unit_range && non_increasing; }
};

InfluenceValidation validate_influence(const InfluenceFunction& f, double gamma,
                                       std::size_t grid_points = 1001);

}  // namespace hk
