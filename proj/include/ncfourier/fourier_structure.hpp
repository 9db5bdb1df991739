#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncfourier/group.hpp"
#include "ncfourier/trace_algebra.hpp"

namespace ncf {

/// function-side: M = functions on G (counting trace), M^ = block algebra
///   (+)_pi M_{d_pi} with weights d_pi / |G|.
/// block-side: the same pair swapped, so M is noncommutative whenever G is.
enum class Direction { FunctionSide, BlockSide };

const char* to_string(Direction d);
/// Accepts "function", "function-side", "block", "block-side".
Direction parse_direction(std::string_view text);

/// Fourier transform pair between M and M^ built from a validated group.
///   F[x](pi)  = sum_g x(g) pi(g)^*                         (functions -> blocks)
///   F^[y](g)  = (1/|G|) sum_pi d_pi Tr(y_pi pi(g))          (blocks -> functions)
/// forward() is F on the function side and F^ on the block side; inverse()
/// is the other one. Both are exact inverses and Plancherel isometries.
class FourierStructure {
 public:
  FourierStructure(GroupPtr group, Direction direction);

  const GroupData& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  Direction direction() const { return direction_; }
  const std::string& name() const { return name_; }

  const AlgebraPtr& M() const { return m_; }
  const AlgebraPtr& M_hat() const { return m_hat_; }
  const AlgebraPtr& function_algebra() const { return direction_ == Direction::FunctionSide ? m_ : m_hat_; }
  const AlgebraPtr& block_algebra() const { return direction_ == Direction::FunctionSide ? m_hat_ : m_; }

  /// Function on G -> operator of the function algebra.
  Operator function(const Eigen::VectorXcd& values) const;
  /// Point mass at g in the function algebra.
  Operator delta(std::size_t g) const;
  /// Function values of an element of the function algebra.
  Eigen::VectorXcd values(const Operator& f) const;

 private:
  GroupPtr group_;
  Direction direction_;
  std::string name_;
  AlgebraPtr m_;
  AlgebraPtr m_hat_;
};

FourierStructure group_fourier_structure(GroupPtr group, Direction direction);

/// F: function algebra -> block algebra.
Operator group_transform(const FourierStructure& fs, const Operator& f);
/// F^: block algebra -> function algebra.
Operator group_cotransform(const FourierStructure& fs, const Operator& y);

/// Throws StructuralError when x is not in fs.M().
Operator forward(const FourierStructure& fs, const Operator& x);
/// Throws StructuralError when y is not in fs.M_hat().
Operator inverse(const FourierStructure& fs, const Operator& y);

/// Dense matrix of forward() on flattened entries (M -> M^).
Eigen::MatrixXcd forward_matrix(const FourierStructure& fs);

/// (x * y)(g) = sum_h x(h) y(h^{-1} g) on the function algebra.
/// With the pi(g)^* convention, F[x * y] = F[y] F[x].
Operator convolution(const FourierStructure& fs, const Operator& x, const Operator& y);

/// Left translation (lambda_g x)(h) = x(g^{-1} h) on the function algebra.
Operator left_translate(const FourierStructure& fs, std::size_t g, const Operator& x);

struct AxiomWorst {
  double value = 0;
  std::uint64_t seed = 0;
};

/// Worst observed quantities over `trials` random pairs (x, y) in M
/// (general complex ensemble, trial seed derive_seed(seed, {trial})).
///   f1_forward:  ||forward x||_inf / ||x||_1           (must be <= 1 + 1e-12)
///   f1_backward: ||x||_inf / ||forward x||_1           (must be <= 1 + 1e-12)
///   plancherel:  |tau^(Fx (Fy)^*) - tau(x y^*)| / (||x||_2 ||y||_2 + 1)   (<= 1e-10)
///   inversion:   max entry error of both round trips  (<= 1e-9)
/// F3 holds structurally: one transform implementation serves every
/// exponent, so there is nothing to compare on the intersection.
struct AxiomReport {
  std::string structure;
  int trials = 0;
  AxiomWorst f1_forward, f1_backward, plancherel, inversion;
  int violations = 0;
  bool f3_structural = true;
};

AxiomReport verify_axioms(const FourierStructure& fs, int trials, std::uint64_t seed);

/// Every built-in group in both directions.
std::vector<FourierStructure> builtin_structures();

}  // namespace ncf
