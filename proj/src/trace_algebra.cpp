#include "ncfourier/trace_algebra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"

namespace ncf {

TraceAlgebra::TraceAlgebra(std::vector<Block> blocks, std::string name)
    : blocks_(std::move(blocks)), name_(std::move(name)) {
  if (blocks_.empty()) throw ContractViolation("TraceAlgebra: at least one block is required");
  for (const Block& b : blocks_) {
    if (b.dim < 1) throw ContractViolation("TraceAlgebra: block dimension must be >= 1");
    if (!(b.weight > 0) || !std::isfinite(b.weight))
      throw ContractViolation("TraceAlgebra: block weight must be finite and > 0");
    total_mass_ += b.weight * static_cast<double>(b.dim);
    entry_count_ += b.dim * b.dim;
  }
}

bool TraceAlgebra::is_commutative() const {
  for (const Block& b : blocks_)
    if (b.dim != 1) return false;
  return true;
}

AlgebraPtr make_algebra(std::vector<Block> blocks, std::string name) {
  return std::make_shared<const TraceAlgebra>(std::move(blocks), std::move(name));
}

Operator::Operator(AlgebraPtr algebra, std::vector<Eigen::MatrixXcd> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw StructuralError("Operator: null algebra");
  if (blocks_.size() != algebra_->block_count())
    throw StructuralError("Operator: expected " + std::to_string(algebra_->block_count()) +
                          " blocks, got " + std::to_string(blocks_.size()));
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Eigen::Index d = algebra_->block(k).dim;
    if (blocks_[k].rows() != d || blocks_[k].cols() != d)
      throw StructuralError("Operator: block " + std::to_string(k) + " must be " +
                            std::to_string(d) + "x" + std::to_string(d));
    if (!blocks_[k].allFinite())
      throw ContractViolation("Operator: block " + std::to_string(k) + " has a non-finite entry");
  }
}

Operator Operator::zero(AlgebraPtr algebra) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const Block& b : algebra->blocks()) blocks.push_back(Eigen::MatrixXcd::Zero(b.dim, b.dim));
  return Operator(std::move(algebra), std::move(blocks));
}

Operator Operator::identity(AlgebraPtr algebra) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const Block& b : algebra->blocks())
    blocks.push_back(Eigen::MatrixXcd::Identity(b.dim, b.dim));
  return Operator(std::move(algebra), std::move(blocks));
}

Operator Operator::from_diagonal(AlgebraPtr algebra, const std::vector<Complex>& diagonal) {
  std::vector<Eigen::MatrixXcd> blocks;
  std::size_t at = 0;
  for (const Block& b : algebra->blocks()) {
    if (at + static_cast<std::size_t>(b.dim) > diagonal.size())
      throw StructuralError("Operator::from_diagonal: too few diagonal entries");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(b.dim, b.dim);
    for (Eigen::Index i = 0; i < b.dim; ++i) m(i, i) = diagonal[at++];
    blocks.push_back(std::move(m));
  }
  if (at != diagonal.size()) throw StructuralError("Operator::from_diagonal: too many diagonal entries");
  return Operator(std::move(algebra), std::move(blocks));
}

Operator Operator::unflatten(AlgebraPtr algebra, const Eigen::VectorXcd& entries) {
  if (entries.size() != algebra->entry_count())
    throw StructuralError("Operator::unflatten: expected " + std::to_string(algebra->entry_count()) +
                          " entries, got " + std::to_string(entries.size()));
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::Index at = 0;
  for (const Block& b : algebra->blocks()) {
    blocks.push_back(entries.segment(at, b.dim * b.dim).reshaped(b.dim, b.dim));
    at += b.dim * b.dim;
  }
  return Operator(std::move(algebra), std::move(blocks));
}

Eigen::VectorXcd Operator::flatten() const {
  Eigen::VectorXcd out(algebra_->entry_count());
  Eigen::Index at = 0;
  for (const auto& m : blocks_) {
    out.segment(at, m.size()) = m.reshaped();
    at += m.size();
  }
  return out;
}

double Operator::max_abs_entry() const {
  double m = 0;
  for (const auto& b : blocks_)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

void require_same_algebra(const Operator& x, const Operator& y, const char* what) {
  if (x.algebra_ptr() == y.algebra_ptr()) return;
  if (!x.algebra().same_layout(y.algebra()))
    throw StructuralError(std::string(what) + ": operands belong to different algebras");
}

namespace {

template <typename F>
Operator blockwise(const Operator& x, const Operator& y, const char* what, F&& f) {
  require_same_algebra(x, y, what);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(x.block_count());
  for (std::size_t k = 0; k < x.block_count(); ++k) out.push_back(f(x.block(k), y.block(k)));
  return Operator(x.algebra_ptr(), std::move(out));
}

template <typename F>
Operator blockwise(const Operator& x, F&& f) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(x.block_count());
  for (std::size_t k = 0; k < x.block_count(); ++k) out.push_back(f(x.block(k)));
  return Operator(x.algebra_ptr(), std::move(out));
}

}  // namespace

Operator operator+(const Operator& x, const Operator& y) {
  return blockwise(x, y, "add", [](const auto& a, const auto& b) -> Eigen::MatrixXcd { return a + b; });
}

Operator operator-(const Operator& x, const Operator& y) {
  return blockwise(x, y, "subtract", [](const auto& a, const auto& b) -> Eigen::MatrixXcd { return a - b; });
}

Operator operator*(const Operator& x, const Operator& y) {
  return blockwise(x, y, "multiply", [](const auto& a, const auto& b) -> Eigen::MatrixXcd { return a * b; });
}

Operator operator*(Complex c, const Operator& x) {
  return blockwise(x, [c](const auto& a) -> Eigen::MatrixXcd { return c * a; });
}

Operator adjoint(const Operator& x) {
  return blockwise(x, [](const auto& a) -> Eigen::MatrixXcd { return a.adjoint(); });
}

double max_abs_difference(const Operator& x, const Operator& y) {
  require_same_algebra(x, y, "max_abs_difference");
  double m = 0;
  for (std::size_t k = 0; k < x.block_count(); ++k)
    m = std::max(m, (x.block(k) - y.block(k)).cwiseAbs().maxCoeff());
  return m;
}

Complex trace(const Operator& x) {
  Complex t = 0;
  for (std::size_t k = 0; k < x.block_count(); ++k) t += x.algebra().block(k).weight * x.block(k).trace();
  return t;
}

std::vector<HermitianEigen<double>> hermitian_eig(const Operator& x) {
  std::vector<HermitianEigen<double>> out;
  out.reserve(x.block_count());
  for (std::size_t k = 0; k < x.block_count(); ++k) {
    const auto& b = x.block(k);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (hermitian_defect(b) > 1e-10 * scale)
      throw ContractViolation("hermitian_eig: block " + std::to_string(k) + " is not Hermitian");
    try {
      out.push_back(jacobi_eigen(b));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (block " + std::to_string(k) + ")");
    }
  }
  return out;
}

namespace {

// Eigenpairs of x^* x from the SVD x = U S V^*: values S^2, vectors V. Forming
// x^* x first would cost small singular values all accuracy below eps ||x||.
HermitianEigen<double> gram_eigen(const Eigen::MatrixXcd& block, std::size_t block_index) {
  if (!block.allFinite()) throw NumericalError("abs_power: non-finite entry in block " + std::to_string(block_index));
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeFullV);
  // below the rank tolerance a singular value is roundoff from an exact zero
  Eigen::VectorXd sv = svd.singularValues();
  const double tol = static_cast<double>(block.rows()) * std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) sv(i) = 0;
  HermitianEigen<double> out;
  out.values = sv.array().square();
  out.vectors = svd.matrixV();
  return out;
}

}  // namespace

Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& block, std::size_t block_index) {
  if (block.rows() == 1) return Eigen::VectorXd::Constant(1, std::norm(block(0, 0)));
  return gram_eigen(block, block_index).values;
}

Operator abs_power(const Operator& x, double p) {
  if (!(p > 0)) throw ContractViolation("abs_power: exponent must be > 0");
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(x.block_count());
  for (std::size_t k = 0; k < x.block_count(); ++k) {
    const auto& b = x.block(k);
    if (b.rows() == 1) {
      out.push_back(Eigen::MatrixXcd::Constant(1, 1, std::pow(std::abs(b(0, 0)), p)));
      continue;
    }
    const auto eig = gram_eigen(b, k);
    const Eigen::VectorXd powered = eig.values.unaryExpr([p](double l) { return std::pow(l, p / 2); });
    out.push_back(eig.vectors * powered.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
  }
  return Operator(x.algebra_ptr(), std::move(out));
}

const char* to_string(Ensemble e) {
  switch (e) {
    case Ensemble::GeneralComplex: return "general-complex";
    case Ensemble::Hermitian: return "hermitian";
    case Ensemble::Positive: return "positive";
    case Ensemble::Unitary: return "unitary";
  }
  return "?";
}

Operator random_operator(AlgebraPtr algebra, std::uint64_t seed, Ensemble ensemble) {
  std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(ensemble)}));
  std::normal_distribution<double> normal;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<Eigen::MatrixXcd> blocks;
  for (const Block& blk : algebra->blocks()) {
    Eigen::MatrixXcd g(blk.dim, blk.dim);
    for (Eigen::Index j = 0; j < blk.dim; ++j)
      for (Eigen::Index i = 0; i < blk.dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        g(i, j) = Complex(re, im) * inv_sqrt2;
      }
    switch (ensemble) {
      case Ensemble::GeneralComplex:
        break;
      case Ensemble::Hermitian:
        g = (0.5 * (g + g.adjoint())).eval();
        break;
      case Ensemble::Positive:
        g = (g.adjoint() * g).eval();
        g = (0.5 * (g + g.adjoint())).eval();
        break;
      case Ensemble::Unitary: {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        Eigen::MatrixXcd q = qr.householderQ();
        const Eigen::MatrixXcd& r = qr.matrixQR();
        for (Eigen::Index i = 0; i < blk.dim; ++i) {
          const double mag = std::abs(r(i, i));
          if (mag > 0) q.col(i) *= r(i, i) / mag;
        }
        g = std::move(q);
        break;
      }
    }
    blocks.push_back(std::move(g));
  }
  return Operator(std::move(algebra), std::move(blocks));
}

}  // namespace ncf
