#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "ncfourier/multiplier.hpp"

namespace ncf {

/// Unitarily invariant norm of an operator read off its weighted singular
/// values: the Schatten norm ||z||_p or the Lorentz norm ||z||_{p,q}.
struct SpectralNorm {
  enum class Kind { Schatten, Lorentz };
  Kind kind = Kind::Schatten;
  double p = 2;
  double q = 2;

  static SpectralNorm schatten(double p) { return {Kind::Schatten, p, p}; }
  static SpectralNorm lorentz(double p, double q) { return {Kind::Lorentz, p, q}; }
};

/// log N_num(L_num x) - log N_den(L_den x) as a function of the real vector
/// theta = (Re x, Im x) of flattened entries of x in the source algebra.
/// The maps are dense matrices on flattened entries; an absent map is the
/// identity.
///
/// Gradients use per-block SVDs z_k = U S V^*: the norm is a function of the
/// singular values s_j and dN = sum_j (dN/ds_j) Re <u_j v_j^*, dz>. Where the
/// norm is not differentiable (ties in the max for p or q = inf, zero
/// singular values) the gradient is that of a point displaced by a fixed
/// 1e-12 relative jitter, so one deterministic subgradient is chosen.
class RatioObjective {
 public:
  RatioObjective(AlgebraPtr source, AlgebraPtr num_target, std::optional<Eigen::MatrixXcd> num_map, SpectralNorm num,
                 AlgebraPtr den_target, std::optional<Eigen::MatrixXcd> den_map, SpectralNorm den);

  /// ||A_sigma x||_q / ||x||_p.
  static RatioObjective multiplier(const FourierStructure& fs, const MultiplierSymbol& sigma, double p, double q);

  Eigen::Index dimension() const { return 2 * source_->entry_count(); }
  const AlgebraPtr& source() const { return source_; }

  /// Log ratio; -inf or NaN when a side vanishes.
  double value(const Eigen::VectorXd& theta) const;
  /// Log ratio at theta, gradient at the jittered point.
  double value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const;

  Eigen::VectorXd to_theta(const Operator& x) const;
  Operator to_operator(const Eigen::VectorXd& theta) const;

 private:
  struct Side {
    AlgebraPtr target;
    std::optional<Eigen::MatrixXcd> map;
    SpectralNorm norm;
  };
  double side_value(const Side& s, const Eigen::VectorXcd& x) const;
  double side_log_gradient(const Side& s, const Eigen::VectorXcd& x, Eigen::VectorXcd& grad) const;

  AlgebraPtr source_;
  Side num_, den_;
  Eigen::VectorXd jitter_;
};

struct AscentOptions {
  int restarts = 32;
  int max_iters = 2000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  /// Also start from every basis vector (point masses on the function side).
  bool basis_starts = true;
};

struct AscentResult {
  double log_ratio = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd theta;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// Multi-start L-BFGS ascent (memory 8, Armijo backtracking) of the log
/// ratio. A run stops when the objective changed by at most tol (relative)
/// over the last 10 iterations, or after max_iters. Starts that hit a
/// non-finite objective are redrawn.
AscentResult maximize_ratio(const RatioObjective& objective, const AscentOptions& opts);
/// Single run from theta0.
AscentResult ascend_from(const RatioObjective& objective, Eigen::VectorXd theta0, int max_iters, double tol);

struct NormEstimate {
  double lower_bound = 0;
  Operator witness;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// Lower bound on ||A_sigma||_{L^p -> L^q}, 1 <= p, q <= inf. lower_bound is
/// recomputed from the witness with lp_norm.
NormEstimate estimate_opnorm(const FourierStructure& fs, const MultiplierSymbol& sigma, double p, double q,
                             const AscentOptions& opts = {});

}  // namespace ncf
