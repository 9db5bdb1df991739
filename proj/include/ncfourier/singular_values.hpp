#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ncfourier/trace_algebra.hpp"

namespace ncf {

/// Nonincreasing, right-continuous, finitely supported step function on
/// [0, inf):
///   f(t) = values[i]  for breakpoints[i-1] <= t < breakpoints[i]  (breakpoints[-1] = 0),
///   f(t) = 0          for t >= breakpoints.back().
/// Breakpoints strictly increase, values strictly decrease and are positive.
/// The empty function is the zero function.
class StepFunction {
 public:
  /// Relative gap below which adjacent values are merged.
  static constexpr double kMergeTolerance = 1e-12;

  StepFunction() = default;
  /// Strict form; throws ContractViolation unless the invariants hold exactly.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// Builds from consecutive pieces (right ends, values). Drops empty pieces,
  /// stops at the first nonpositive value, merges values within
  /// kMergeTolerance. Values must be nonincreasing up to that tolerance.
  static StepFunction from_pieces(std::span<const double> right_ends, std::span<const double> values);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// Right end of the support (0 for the zero function).
  double support() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
  /// f(0), i.e. the sup norm.
  double head() const { return values_.empty() ? 0.0 : values_.front(); }

  double operator()(double t) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

double evaluate(const StepFunction& f, double t);
StepFunction pointwise_product(const StepFunction& f, const StepFunction& g);
/// t -> f(t / c); breakpoints scale by c.
StepFunction dilate(const StepFunction& f, double c);
/// t -> c * f(t), c >= 0.
StepFunction scale_values(const StepFunction& f, double c);

/// Eigenvalue of |x| together with the trace weight of its block.
struct WeightedSingularValue {
  double value = 0;
  double weight = 0;
  std::size_t block = 0;
  Eigen::Index position = 0;
};

/// All eigenvalues of |x| with multiplicity, sorted descending. Ties keep
/// (block, position) order.
std::vector<WeightedSingularValue> weighted_singular_values(const Operator& x);

/// d(s; |x|) = tau(e^{|x|}(s, inf)).
double distribution(const Operator& x, double s);
double distribution(std::span<const WeightedSingularValue> spectrum, double s);

/// mu(t; x) = inf{ s > 0 : d(s; |x|) <= t }: the j-th largest eigenvalue of
/// |x| held on the j-th cumulative-weight interval.
StepFunction singular_function(const Operator& x);
StepFunction singular_function(std::span<const WeightedSingularValue> spectrum);

struct SubmultiplicativeCheck {
  /// max over the corner grid of mu(t+s; xy) - mu(t; x) mu(s; y). <= 0 passes.
  double max_violation = 0;
  double t = 0;
  double s = 0;
  /// mu(0; x) * mu(0; y), the natural size of both sides.
  double scale = 0;
  std::size_t corners = 0;
};

/// Checks mu(t + s; xy) <= mu(t; x) mu(s; y) for all t, s >= 0.
///
/// The right side is constant on every cell [t_i, t_{i+1}) x [s_j, s_{j+1})
/// of the grid spanned by {0} u breakpoints(mu(x)) and {0} u breakpoints(mu(y)),
/// and vanishes past the last breakpoints. The left side depends on t + s
/// only and is nonincreasing, so on each cell it peaks at the lower-left
/// corner. Evaluating at every corner is therefore exhaustive.
///
/// Breakpoints of mu(xy) that coincide with a corner sum up to 1e-12
/// relative (cumulative weights summed in different orders) are treated as
/// coincident: the left side is read at (t + s)(1 + 1e-12).
SubmultiplicativeCheck check_submultiplicative(const Operator& x, const Operator& y);

}  // namespace ncf
