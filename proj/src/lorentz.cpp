#include "ncfourier/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncfourier/errors.hpp"

namespace ncf {

double conjugate_exponent(double p) {
  if (!(p >= 1)) throw ContractViolation("conjugate_exponent: p must be >= 1");
  if (p == 1) return kInf;
  if (std::isinf(p)) return 1;
  return p / (p - 1);
}

HormanderExponents HormanderExponents::hormander(double p, double q) {
  if (!(p > 1 && p <= 2 && q >= 2 && std::isfinite(q)))
    throw ContractViolation("HormanderExponents: need 1 < p <= 2 <= q < inf");
  HormanderExponents e;
  e.p = p;
  e.q = q;
  e.p_conj = conjugate_exponent(p);
  e.q_conj = conjugate_exponent(q);
  const double inv_r = 1 / p - 1 / q;
  e.r = inv_r > 0 ? 1 / inv_r : kInf;
  const double inv_s = 2 / p - 1;
  e.s = inv_s > 0 ? 1 / inv_s : kInf;
  return e;
}

HormanderExponents HormanderExponents::paley(double p) {
  if (!(p > 1 && p <= 2)) throw ContractViolation("HormanderExponents: Paley mode needs 1 < p <= 2");
  HormanderExponents e;
  e.p = p;
  e.p_conj = conjugate_exponent(p);
  e.q = e.q_conj = e.r = std::numeric_limits<double>::quiet_NaN();
  const double inv_s = 2 / p - 1;
  e.s = inv_s > 0 ? 1 / inv_s : kInf;
  return e;
}

double lp_norm(std::span<const WeightedSingularValue> spectrum, double p) {
  if (!(p > 0)) throw ContractViolation("lp_norm: p must be > 0");
  if (spectrum.empty()) return 0;
  if (std::isinf(p)) return spectrum.front().value;
  double sum = 0;
  for (const auto& sv : spectrum)
    if (sv.value > 0) sum += sv.weight * std::pow(sv.value, p);
  return std::pow(sum, 1 / p);
}

double lp_norm(const Operator& x, double p) {
  const auto spectrum = weighted_singular_values(x);
  return lp_norm(spectrum, p);
}

double lorentz_norm(const StepFunction& f, double p, double q) {
  if (!(p > 0) || !(q > 0)) throw ContractViolation("lorentz_norm: exponents must be > 0");
  if (std::isinf(p) && !std::isinf(q)) throw ContractViolation("lorentz_norm: p = inf needs q = inf");
  if (f.empty()) return 0;
  const auto& t = f.breakpoints();
  const auto& v = f.values();
  if (std::isinf(q)) {
    if (std::isinf(p)) return v.front();
    double best = 0;
    for (std::size_t i = 0; i < v.size(); ++i) best = std::max(best, v[i] * std::pow(t[i], 1 / p));
    return best;
  }
  const double e = q / p;
  double sum = 0;
  double prev = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cur = std::pow(t[i], e);
    sum += std::pow(v[i], q) * (p / q) * (cur - prev);
    prev = cur;
  }
  return std::pow(sum, 1 / q);
}

double lorentz_norm(const Operator& x, double p, double q) { return lorentz_norm(singular_function(x), p, q); }

double weak_norm_via_distribution(const Operator& x, double r) {
  if (!(r > 0) || std::isinf(r)) throw ContractViolation("weak_norm_via_distribution: need 0 < r < inf");
  const auto spectrum = weighted_singular_values(x);
  double best = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double lambda = spectrum[i].value;
    if (!(lambda > 0)) break;
    if (i > 0 && spectrum[i - 1].value == lambda) continue;
    const double d = distribution(spectrum, lambda * (1 - 1e-12));
    best = std::max(best, lambda * std::pow(d, 1 / r));
  }
  return best;
}

namespace {

void require_embedding_exponents(double p, double q, double rr) {
  if (!(p >= 1 && std::isfinite(p) && q >= 1 && q <= rr))
    throw ContractViolation("check_embedding: need 1 <= p < inf and 1 <= q <= rr <= inf");
}

}  // namespace

EmbeddingCheck check_embedding(const StepFunction& f, double p, double q, double rr, double cap) {
  require_embedding_exponents(p, q, rr);
  EmbeddingCheck out;
  const double num = lorentz_norm(f, p, rr);
  const double den = lorentz_norm(f, p, q);
  if (den == 0) {
    if (num != 0) throw std::logic_error("check_embedding: zero L^{p,q} norm with nonzero L^{p,r} norm");
    out.degenerate = true;
    out.ratio = 0;
  } else {
    out.ratio = num / den;
  }
  out.pass = out.ratio <= cap;
  return out;
}

EmbeddingCheck check_embedding(const Operator& x, double p, double q, double rr, double cap) {
  require_embedding_exponents(p, q, rr);
  return check_embedding(singular_function(x), p, q, rr, cap);
}

HolderCheck check_holder(const Operator& x, const Operator& y, double p0, double p1, double q) {
  require_same_algebra(x, y, "check_holder");
  if (!(p0 > 0 && p1 > 0 && q > 0 && std::isfinite(p0) && std::isfinite(p1) && std::isfinite(q)))
    throw ContractViolation("check_holder: need 0 < p0, p1, q < inf");
  const double p = 1 / (1 / p0 + 1 / p1);
  HolderCheck out;
  out.lhs = lorentz_norm(x * y, p, q);
  out.rhs = std::pow(2.0, 1 / p) * lorentz_norm(x, p0, kInf) * lorentz_norm(y, p1, q);
  out.pass = out.lhs <= out.rhs * (1 + 1e-10);
  return out;
}

double embedding_cap_search(double p, double q, double rr, int grid) {
  require_embedding_exponents(p, q, rr);
  if (grid < 2) throw ContractViolation("embedding_cap_search: grid must be >= 2");
  std::vector<double> heights(static_cast<std::size_t>(grid));
  std::vector<double> widths(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double u = static_cast<double>(i) / (grid - 1);
    heights[static_cast<std::size_t>(i)] = std::pow(1e-3, 1 - u);
    widths[static_cast<std::size_t>(i)] = std::pow(10.0, -3 + 6 * u);
  }
  auto ratio = [&](std::span<const double> ends, std::span<const double> vals) {
    const StepFunction f = StepFunction::from_pieces(ends, vals);
    return lorentz_norm(f, p, rr) / lorentz_norm(f, p, q);
  };

  const double one[] = {1.0};
  double best = ratio(one, one);
  for (double h2 : heights) {
    for (double w2 : widths) {
      const double ends2[] = {1.0, 1.0 + w2};
      const double vals2[] = {1.0, h2};
      best = std::max(best, ratio(ends2, vals2));
      for (double h3r : heights) {
        for (double w3 : widths) {
          const double ends3[] = {1.0, 1.0 + w2, 1.0 + w2 + w3};
          const double vals3[] = {1.0, h2, h2 * h3r};
          best = std::max(best, ratio(ends3, vals3));
        }
      }
    }
  }
  return best;
}

}  // namespace ncf
