#pragma once

#include <limits>

#include "ncfourier/singular_values.hpp"

namespace ncf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// p' with 1/p + 1/p' = 1 (1 <-> inf).
double conjugate_exponent(double p);

/// Exponent bookkeeping for the multiplier theorem and the Paley inequality.
///   Hormander mode: 1 < p <= 2 <= q < inf, 1/r = 1/p - 1/q (r = inf when p = q).
///   Paley mode:     1 < p <= 2, q and r are NaN.
/// Both modes carry 1/s = 2/p - 1 (s = inf at p = 2).
struct HormanderExponents {
  double p = 2, q = 2;
  double p_conj = 2, q_conj = 2;
  double r = kInf;
  double s = kInf;

  static HormanderExponents hormander(double p, double q);
  static HormanderExponents paley(double p);
};

/// ||x||_p = tau(|x|^p)^{1/p}; p = inf gives mu(0; x). Sums the raw weighted
/// eigenvalues, not the merged step function.
double lp_norm(const Operator& x, double p);
double lp_norm(std::span<const WeightedSingularValue> spectrum, double p);

/// ||f||_{L^{p,q}(R+)} of a step function, in closed form:
///   q < inf:  ( sum_i v_i^q (p/q) (t_i^{q/p} - t_{i-1}^{q/p}) )^{1/q}
///   q = inf:  max_i v_i t_i^{1/p}   (the sup over [t_{i-1}, t_i) is the limit at t_i)
/// p = inf is accepted together with q = inf and gives f(0).
double lorentz_norm(const StepFunction& f, double p, double q);
double lorentz_norm(const Operator& x, double p, double q);

/// sup over eigenvalues lambda of |x| of lambda * d(lambda (1 - 1e-12); |x|)^{1/r}:
/// the weak-type quantity sup_l l * tau(e^{|x|}[l, inf))^{1/r} read off the
/// distribution function. Equals lorentz_norm(x, r, inf).
double weak_norm_via_distribution(const Operator& x, double r);

struct EmbeddingCheck {
  double ratio = 0;
  bool pass = true;
  /// 0/0: zero operator.
  bool degenerate = false;
};

/// ratio = ||x||_{p,rr} / ||x||_{p,q}; requires 1 <= p < inf, 1 <= q <= rr <= inf.
EmbeddingCheck check_embedding(const Operator& x, double p, double q, double rr, double cap);
EmbeddingCheck check_embedding(const StepFunction& f, double p, double q, double rr, double cap);

struct HolderCheck {
  double lhs = 0;
  double rhs = 0;
  bool pass = true;
};

/// ||xy||_{p,q} <= 2^{1/p} ||x||_{p0,inf} ||y||_{p1,q}, 1/p = 1/p0 + 1/p1.
/// pass allows 1e-10 relative slack.
HolderCheck check_holder(const Operator& x, const Operator& y, double p0, double p1, double q);

/// Brute-force supremum of ||f||_{p,rr} / ||f||_{p,q} over one-, two- and
/// three-step decreasing shapes. Both norms are invariant (up to the same
/// factor) under dilation and value scaling, so the first step is pinned at
/// height 1 and width 1; later heights and widths run over geometric grids
/// of `grid` points spanning [1e-3, 1] and [1e-3, 1e3].
double embedding_cap_search(double p, double q, double rr, int grid = 24);

}  // namespace ncf
