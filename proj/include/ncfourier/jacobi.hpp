#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "ncfourier/errors.hpp"

namespace ncf {

template <typename Real>
struct HermitianEigen {
  using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

  /// Descending; ties keep the order in which the sweep left them on the diagonal.
  RealVector values;
  /// Column k is the eigenvector for values[k].
  ComplexMatrix vectors;
};

/// Largest |a - a^*| entry.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix.
///
/// Sweeps over all (p, q) pairs, annihilating each off-diagonal entry with a
/// complex plane rotation, until the off-diagonal Frobenius mass is at most
/// `rel_tol * ||a||_F`. Works on any Eigen expression with complex scalar.
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& a,
                                                          typename Derived::RealScalar rel_tol = 1e-12,
                                                          int max_sweeps = 64) {
  using Real = typename Derived::RealScalar;
  using Complex = std::complex<Real>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  if (a.rows() != a.cols()) throw ContractViolation("jacobi_eigen: matrix is not square");
  const Eigen::Index n = a.rows();

  Matrix m = a.template cast<Complex>();
  Matrix v = Matrix::Identity(n, n);
  const Real target = rel_tol * m.norm();

  auto off_diagonal = [&] {
    Real s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_diagonal() > target) {
    if (++sweep > max_sweeps) throw NumericalError("jacobi_eigen: no convergence");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (m(p, q) == Complex(0)) continue;
        Eigen::JacobiRotation<Complex> rot;
        rot.makeJacobi(std::real(m(p, p)), m(p, q), std::real(m(q, q)));
        m.applyOnTheLeft(p, q, rot.adjoint());
        m.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        m(p, q) = m(q, p) = Complex(0);
        m(p, p) = std::real(m(p, p));
        m(q, q) = std::real(m(q, q));
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(m(i, i)) > std::real(m(j, j));
  });

  HermitianEigen<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = std::real(m(order[k], order[k]));
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace ncf
