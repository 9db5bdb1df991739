#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ncfourier/jacobi.hpp"

namespace ncf {

using Complex = std::complex<double>;

/// One matrix block M_dim of the algebra, carrying the trace weight.
struct Block {
  Eigen::Index dim = 1;
  double weight = 1.0;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Finite-dimensional tracial algebra: a direct sum of full matrix blocks,
///   M = M_{d_1} (+) ... (+) M_{d_k},   tau(x) = sum_k w_k Tr(x_k).
/// Every finite-dimensional algebra with a faithful trace has this shape;
/// non-uniform weights model a non-normalized trace.
class TraceAlgebra {
 public:
  TraceAlgebra(std::vector<Block> blocks, std::string name = {});

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Block& block(std::size_t k) const { return blocks_[k]; }
  const std::string& name() const { return name_; }

  /// tau(1) = sum_k w_k d_k.
  double total_mass() const { return total_mass_; }
  /// Number of complex entries, sum_k d_k^2.
  Eigen::Index entry_count() const { return entry_count_; }
  bool is_commutative() const;

  /// Same block layout and weights. Names are labels and do not take part.
  bool same_layout(const TraceAlgebra& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<Block> blocks_;
  std::string name_;
  double total_mass_ = 0;
  Eigen::Index entry_count_ = 0;
};

using AlgebraPtr = std::shared_ptr<const TraceAlgebra>;

AlgebraPtr make_algebra(std::vector<Block> blocks, std::string name = {});

/// Element of a TraceAlgebra: one square complex matrix per block.
class Operator {
 public:
  Operator(AlgebraPtr algebra, std::vector<Eigen::MatrixXcd> blocks);

  static Operator zero(AlgebraPtr algebra);
  static Operator identity(AlgebraPtr algebra);
  /// Diagonal operator; `diagonal` runs through the blocks in order and has
  /// one entry per basis vector (sum_k d_k entries).
  static Operator from_diagonal(AlgebraPtr algebra, const std::vector<Complex>& diagonal);
  /// Inverse of flatten(): blocks concatenated column-major.
  static Operator unflatten(AlgebraPtr algebra, const Eigen::VectorXcd& entries);

  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const TraceAlgebra& algebra() const { return *algebra_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Eigen::MatrixXcd& block(std::size_t k) const { return blocks_[k]; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }

  Eigen::VectorXcd flatten() const;
  double max_abs_entry() const;
  bool is_zero() const { return max_abs_entry() == 0.0; }

 private:
  AlgebraPtr algebra_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Throws StructuralError unless x and y share the block layout.
void require_same_algebra(const Operator& x, const Operator& y, const char* what);

Operator operator+(const Operator& x, const Operator& y);
Operator operator-(const Operator& x, const Operator& y);
Operator operator*(const Operator& x, const Operator& y);
Operator operator*(Complex c, const Operator& x);
Operator adjoint(const Operator& x);

/// Largest entrywise |x - y|.
double max_abs_difference(const Operator& x, const Operator& y);

/// tau(x) = sum_k w_k Tr(x_k).
Complex trace(const Operator& x);

/// Per-block spectral data of a Hermitian operator. Throws ContractViolation
/// when a block is not Hermitian within 1e-10 (relative to max(1, max|entry|)),
/// NumericalError naming the block when the sweep does not converge.
std::vector<HermitianEigen<double>> hermitian_eig(const Operator& x);

/// |x|^p with |x| = (x^* x)^{1/2}. The eigenpairs of x^* x are read off the
/// SVD of each block, so singular values keep absolute error ~ eps ||x||.
/// Singular values at or below dim * eps * ||x_k|| are set to zero.
Operator abs_power(const Operator& x, double p);

/// Eigenvalues of x_k^* x_k (squared singular values of x_k), descending.
Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& block, std::size_t block_index);

enum class Ensemble { GeneralComplex, Hermitian, Positive, Unitary };

const char* to_string(Ensemble e);

/// Deterministic draw. General entries are (a + ib)/sqrt(2) with a, b
/// standard normal; hermitian symmetrizes a general draw; positive is g^* g;
/// unitary is the Q factor of a general draw with the phases of R's diagonal
/// moved into Q (Haar distributed).
Operator random_operator(AlgebraPtr algebra, std::uint64_t seed, Ensemble ensemble);

}  // namespace ncf
