#include "ncfourier/singular_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncfourier/errors.hpp"

namespace ncf {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() != values_.size())
    throw ContractViolation("StepFunction: breakpoints and values differ in length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double prev_t = i == 0 ? 0.0 : breakpoints_[i - 1];
    if (!(breakpoints_[i] > prev_t) || !std::isfinite(breakpoints_[i]))
      throw ContractViolation("StepFunction: breakpoints must be finite, positive, strictly increasing");
    if (!(values_[i] > 0) || !std::isfinite(values_[i]))
      throw ContractViolation("StepFunction: values must be finite and positive");
    if (i > 0 && !(values_[i] < values_[i - 1]))
      throw ContractViolation("StepFunction: values must strictly decrease");
  }
}

StepFunction StepFunction::from_pieces(std::span<const double> right_ends, std::span<const double> values) {
  if (right_ends.size() != values.size())
    throw ContractViolation("StepFunction::from_pieces: length mismatch");
  std::vector<double> bps;
  std::vector<double> vals;
  double left = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double right = right_ends[i];
    const double v = values[i];
    if (right < left) throw ContractViolation("StepFunction::from_pieces: right ends must not decrease");
    if (!(v > 0)) break;
    if (right == left) continue;
    if (!vals.empty()) {
      const double prev = vals.back();
      if (v > prev * (1 + kMergeTolerance))
        throw ContractViolation("StepFunction::from_pieces: values must not increase");
      if (prev - v <= kMergeTolerance * prev) {
        bps.back() = right;
        left = right;
        continue;
      }
    }
    bps.push_back(right);
    vals.push_back(v);
    left = right;
  }
  return StepFunction(std::move(bps), std::move(vals));
}

double StepFunction::operator()(double t) const {
  if (t < 0) throw ContractViolation("StepFunction: evaluation at t < 0");
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double evaluate(const StepFunction& f, double t) { return f(t); }

StepFunction pointwise_product(const StepFunction& f, const StepFunction& g) {
  const double end = std::min(f.support(), g.support());
  std::vector<double> ends;
  for (double t : f.breakpoints())
    if (t <= end) ends.push_back(t);
  for (double t : g.breakpoints())
    if (t <= end) ends.push_back(t);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  std::vector<double> vals;
  vals.reserve(ends.size());
  double left = 0;
  for (double right : ends) {
    // constant on [left, right); sample at the left end
    vals.push_back(f(left) * g(left));
    left = right;
  }
  return StepFunction::from_pieces(ends, vals);
}

StepFunction dilate(const StepFunction& f, double c) {
  if (!(c > 0) || !std::isfinite(c)) throw ContractViolation("dilate: factor must be finite and > 0");
  std::vector<double> bps = f.breakpoints();
  for (double& t : bps) t *= c;
  return StepFunction::from_pieces(bps, f.values());
}

StepFunction scale_values(const StepFunction& f, double c) {
  if (!(c >= 0)) throw ContractViolation("scale_values: factor must be >= 0");
  std::vector<double> vals = f.values();
  for (double& v : vals) v *= c;
  return StepFunction::from_pieces(f.breakpoints(), vals);
}

std::vector<WeightedSingularValue> weighted_singular_values(const Operator& x) {
  std::vector<WeightedSingularValue> out;
  for (std::size_t k = 0; k < x.block_count(); ++k) {
    const double w = x.algebra().block(k).weight;
    const Eigen::VectorXd lambda = gram_eigenvalues(x.block(k), k);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) out.push_back({std::sqrt(lambda(i)), w, k, i});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WeightedSingularValue& a, const WeightedSingularValue& b) { return a.value > b.value; });
  return out;
}

double distribution(std::span<const WeightedSingularValue> spectrum, double s) {
  double d = 0;
  for (const auto& sv : spectrum)
    if (sv.value > s) d += sv.weight;
  return d;
}

double distribution(const Operator& x, double s) {
  const auto spectrum = weighted_singular_values(x);
  return distribution(spectrum, s);
}

StepFunction singular_function(std::span<const WeightedSingularValue> spectrum) {
  std::vector<double> ends;
  std::vector<double> vals;
  ends.reserve(spectrum.size());
  vals.reserve(spectrum.size());
  double t = 0;
  for (const auto& sv : spectrum) {
    t += sv.weight;
    ends.push_back(t);
    vals.push_back(sv.value);
  }
  return StepFunction::from_pieces(ends, vals);
}

StepFunction singular_function(const Operator& x) {
  const auto spectrum = weighted_singular_values(x);
  return singular_function(spectrum);
}

SubmultiplicativeCheck check_submultiplicative(const Operator& x, const Operator& y) {
  require_same_algebra(x, y, "check_submultiplicative");
  const StepFunction mx = singular_function(x);
  const StepFunction my = singular_function(y);
  const StepFunction mxy = singular_function(x * y);

  std::vector<double> ts{0.0};
  ts.insert(ts.end(), mx.breakpoints().begin(), mx.breakpoints().end());
  std::vector<double> ss{0.0};
  ss.insert(ss.end(), my.breakpoints().begin(), my.breakpoints().end());

  SubmultiplicativeCheck out;
  out.scale = mx.head() * my.head();
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (double t : ts) {
    for (double s : ss) {
      const double lhs = mxy((t + s) * (1 + 1e-12));
      const double rhs = mx(t) * my(s);
      const double v = lhs - rhs;
      ++out.corners;
      if (v > out.max_violation) {
        out.max_violation = v;
        out.t = t;
        out.s = s;
      }
    }
  }
  return out;
}

}  // namespace ncf
