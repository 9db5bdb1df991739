#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ncfourier/errors.hpp"
#include "support.hpp"

using namespace ncf;
using namespace ncf::testing;

TEST_CASE("algebra construction rejects bad blocks") {
  CHECK_THROWS_AS(make_algebra({}), ContractViolation);
  CHECK_THROWS_AS(make_algebra({Block{0, 1.0}}), ContractViolation);
  CHECK_THROWS_AS(make_algebra({Block{2, 0.0}}), ContractViolation);
  CHECK_THROWS_AS(make_algebra({Block{2, -1.0}}), ContractViolation);
  auto a = make_algebra({Block{1, 0.5}, Block{2, 2.0}});
  CHECK(a->total_mass() == doctest::Approx(4.5));
  CHECK(a->entry_count() == 5);
  CHECK_FALSE(a->is_commutative());
  CHECK(make_algebra({Block{1, 1}, Block{1, 3}})->is_commutative());
}

TEST_CASE("block arithmetic examples") {
  const Operator x = random_operator(random_algebra(3), 11, Ensemble::GeneralComplex);
  const Operator id = Operator::identity(x.algebra_ptr());
  CHECK(max_abs_difference(id * x, x) == 0);
  CHECK(max_abs_difference(adjoint(adjoint(x)), x) == 0);

  auto m2 = make_algebra({Block{2, 1.0}});
  const Operator a = Operator::from_diagonal(m2, {2, 1});
  const Operator b = Operator::from_diagonal(m2, {3, 1});
  CHECK(max_abs_difference(a * b, Operator::from_diagonal(m2, {6, 1})) == 0);
  CHECK(max_abs_difference(Complex(2, 0) * a - a, a) == 0);
}

TEST_CASE("mismatched algebras are structural errors") {
  auto a = make_algebra({Block{2, 1.0}});
  auto b = make_algebra({Block{2, 2.0}});
  auto c = make_algebra({Block{1, 1.0}, Block{1, 1.0}});
  const Operator x = Operator::identity(a);
  CHECK_THROWS_AS(x + Operator::identity(b), StructuralError);
  CHECK_THROWS_AS(x * Operator::identity(c), StructuralError);
  CHECK_THROWS_AS(Operator(a, {Eigen::MatrixXcd::Zero(3, 3)}), StructuralError);
  CHECK_THROWS_AS(Operator(c, {Eigen::MatrixXcd::Zero(1, 1)}), StructuralError);
  // same layout under a different name is the same algebra
  auto a2 = make_algebra({Block{2, 1.0}}, "other");
  CHECK_NOTHROW(x + Operator::identity(a2));
}

TEST_CASE("non-finite entries are rejected") {
  auto a = make_algebra({Block{1, 1.0}});
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Operator(a, {m}));
}

TEST_CASE("trace examples") {
  CHECK(trace(Operator::identity(make_algebra({Block{2, 1.0}}))).real() == doctest::Approx(2));
  CHECK(trace(Operator::identity(make_algebra({Block{1, 0.5}, Block{2, 2.0}}))).real() == doctest::Approx(4.5));
}

TEST_CASE("property: tau(xy) = tau(yx) and faithfulness") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    CAPTURE(s);
    auto alg = random_algebra(s);
    const Operator x = random_element(alg, 2 * s);
    const Operator y = random_element(alg, 2 * s + 1);
    const double scale = std::sqrt(trace(adjoint(x) * x).real() * trace(adjoint(y) * y).real());
    CHECK(std::abs(trace(x * y) - trace(y * x)) <= 1e-9 * scale + 1e-300);
    const double t = trace(adjoint(x) * x).real();
    CHECK(t >= 0);
    CHECK(std::abs(trace(adjoint(x) * x).imag()) <= 1e-12 * (1 + t));
  }
  const Operator z = Operator::zero(random_algebra(1));
  CHECK(trace(adjoint(z) * z).real() == 0);
  CHECK(z.max_abs_entry() == 0);
}

TEST_CASE("hermitian_eig examples") {
  auto e = hermitian_eig(single_block_diag({1, 5}));
  CHECK(e[0].values(0) == doctest::Approx(5));
  CHECK(e[0].values(1) == doctest::Approx(1));

  auto m2 = make_algebra({Block{2, 1.0}});
  Eigen::MatrixXcd px(2, 2);
  px << 0, 1, 1, 0;
  auto ep = hermitian_eig(Operator(m2, {px}));
  CHECK(ep[0].values(0) == doctest::Approx(1));
  CHECK(ep[0].values(1) == doctest::Approx(-1));

  Eigen::MatrixXcd nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eig(Operator(m2, {nh})), ContractViolation);
}

TEST_CASE("oracle: Jacobi agrees with Eigen's SelfAdjointEigenSolver") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    CAPTURE(s);
    const int n = 1 + static_cast<int>(s % 12);
    auto alg = make_algebra({Block{n, 1.0}});
    const Eigen::MatrixXcd h = random_operator(alg, s, Ensemble::Hermitian).block(0);
    const auto mine = jacobi_eigen(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(h);
    const Eigen::VectorXd expect = ref.eigenvalues().reverse();
    const double scale = std::max(1.0, h.norm());
    CHECK((mine.values - expect).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    // reconstruction and orthonormality
    const Eigen::MatrixXcd rec = mine.vectors * mine.values.asDiagonal() * mine.vectors.adjoint();
    CHECK((rec - h).norm() <= 1e-9 * h.norm() + 1e-300);
    CHECK((mine.vectors.adjoint() * mine.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-10);
  }
}

TEST_CASE("random Hermitian 8x8 reconstruction") {
  auto alg = make_algebra({Block{8, 1.0}});
  const Operator h = random_operator(alg, 99, Ensemble::Hermitian);
  const auto e = hermitian_eig(h)[0];
  const Eigen::MatrixXcd rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  CHECK((rec - h.block(0)).norm() <= 1e-9 * h.block(0).norm());
}

TEST_CASE("property: eigenvalues invariant under unitary conjugation") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    CAPTURE(s);
    auto alg = random_algebra(s + 500);
    const Operator h = random_operator(alg, s, Ensemble::Hermitian);
    const Operator u = random_operator(alg, s + 1000, Ensemble::Unitary);
    const auto a = hermitian_eig(h);
    const auto b = hermitian_eig(u * h * adjoint(u));
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK((a[k].values - b[k].values).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, a[k].values.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("abs_power examples") {
  CHECK(max_abs_difference(abs_power(single_block_diag({-3, 1}), 1), single_block_diag({3, 1})) <= 1e-12);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto alg = random_algebra(s);
    const Operator u = random_operator(alg, s, Ensemble::Unitary);
    CHECK(max_abs_difference(abs_power(u, 1.7), Operator::identity(alg)) <= 1e-9);
    const Operator x = random_element(alg, s);
    const Operator xx = adjoint(x) * x;
    CHECK(max_abs_difference(abs_power(x, 2), xx) <= 1e-10 * std::max(1.0, xx.max_abs_entry()));
  }
}

TEST_CASE("property: abs_power(abs_power(x, p), 1/p) recovers |x|") {
  for (std::uint64_t s = 0; s < 150; ++s) {
    CAPTURE(s);
    auto alg = random_algebra(s + 77);
    const Operator x = random_element(alg, s);
    const Operator ax = abs_power(x, 1);
    for (double p : {0.5, 2.0, 3.0}) {
      const Operator back = abs_power(abs_power(x, p), 1 / p);
      // |x|^p carries entry error ~ eps ||x||^p; t^{1/p} maps that to (eps ||x||^p)^{1/p} near 0
      const double scale = std::max(1.0, ax.max_abs_entry());
      const double floor = p > 1 ? std::pow(64 * 2.2e-16 * std::pow(scale, p), 1 / p) : 0.0;
      CHECK(max_abs_difference(back, ax) <= 1e-8 * scale + floor);
    }
  }
}

TEST_CASE("random_operator determinism and ensembles") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto alg = random_algebra(s);
    for (Ensemble e : {Ensemble::GeneralComplex, Ensemble::Hermitian, Ensemble::Positive, Ensemble::Unitary}) {
      const Operator a = random_operator(alg, s, e);
      const Operator b = random_operator(alg, s, e);
      CHECK(max_abs_difference(a, b) == 0);
    }
    for (const auto& ev : hermitian_eig(random_operator(alg, s, Ensemble::Positive)))
      CHECK(ev.values.minCoeff() >= -1e-12);
    const Operator u = random_operator(alg, s, Ensemble::Unitary);
    CHECK(max_abs_difference(adjoint(u) * u, Operator::identity(alg)) <= 1e-9);
    CHECK(hermitian_defect(random_operator(alg, s, Ensemble::Hermitian).block(0)) == 0);
  }
  auto alg = random_algebra(5);
  CHECK(max_abs_difference(random_operator(alg, 1, Ensemble::GeneralComplex),
                           random_operator(alg, 2, Ensemble::GeneralComplex)) > 0);
}

TEST_CASE("flatten and unflatten are inverse") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto alg = random_algebra(s);
    const Operator x = random_element(alg, s);
    const Eigen::VectorXcd v = x.flatten();
    CHECK(v.size() == alg->entry_count());
    CHECK(max_abs_difference(Operator::unflatten(alg, v), x) == 0);
  }
}
