#include "doctest.h"
#include "ncfourier/ascent.hpp"
#include "support.hpp"

using namespace ncf;
using namespace ncf::testing;

namespace {

double fd_rel_error(const RatioObjective& obj, const Eigen::VectorXd& theta) {
  Eigen::VectorXd g;
  obj.value_and_gradient(theta, g);
  Eigen::VectorXd fd(theta.size());
  const double h = 1e-6 * std::max(1.0, theta.norm());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd a = theta, b = theta;
    a(i) += h;
    b(i) -= h;
    fd(i) = (obj.value(a) - obj.value(b)) / (2 * h);
  }
  return (g - fd).norm() / std::max(g.norm(), 1e-300);
}

AscentOptions quick(std::uint64_t seed) {
  AscentOptions o;
  o.restarts = 8;
  o.max_iters = 1000;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("objective value matches the direct ratio") {
  for (const auto& fs : builtin_structures()) {
    const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), 3));
    const auto obj = RatioObjective::multiplier(fs, sigma, 1.5, 3);
    const Operator x = random_operator(fs.M(), 8, Ensemble::GeneralComplex);
    const double direct = lp_norm(apply_multiplier(fs, sigma, x), 3) / lp_norm(x, 1.5);
    CHECK(std::exp(obj.value(obj.to_theta(x))) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(max_abs_difference(obj.to_operator(obj.to_theta(x)), x) == 0);
  }
}

TEST_CASE("oracle: gradients agree with central finite differences") {
  int points = 0;
  double worst = 0;
  const auto structures = builtin_structures();
  for (std::uint64_t s = 0; points < 100; ++s) {
    const auto& fs = structures[s % structures.size()];
    const MultiplierSymbol sigma(fs, random_operator(fs.M_hat(), s, Ensemble::GeneralComplex));
    const double p = 1.2 + 0.1 * static_cast<double>(s % 9);
    const double q = 2.0 + 0.5 * static_cast<double>(s % 5);
    const auto obj = RatioObjective::multiplier(fs, sigma, p, q);
    const Eigen::VectorXd theta = obj.to_theta(random_operator(fs.M(), s + 99, Ensemble::GeneralComplex));
    const double err = fd_rel_error(obj, theta);
    CAPTURE(fs.name());
    CAPTURE(p);
    CAPTURE(q);
    CHECK(err <= 1e-5);
    worst = std::max(worst, err);
    ++points;
  }
  MESSAGE("worst finite-difference relative error " << worst);
}

TEST_CASE("oracle: Lorentz-norm gradients agree with finite differences") {
  for (const auto& fs : builtin_structures()) {
    const auto obj = RatioObjective(fs.M(), fs.M_hat(), forward_matrix(fs), SpectralNorm::lorentz(3, 1.5), fs.M(),
                                    std::nullopt, SpectralNorm::schatten(1.5));
    const Eigen::VectorXd theta = obj.to_theta(random_operator(fs.M(), 5, Ensemble::GeneralComplex));
    CHECK(fd_rel_error(obj, theta) <= 1e-5);
  }
}

TEST_CASE("estimate examples") {
  const FourierStructure z2(make_group("cyclic:2"), Direction::FunctionSide);
  const MultiplierSymbol proj(z2, Operator::from_diagonal(z2.M_hat(), {1, 0}));
  CHECK(estimate_opnorm(z2, proj, 1, kInf, quick(1)).lower_bound == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(estimate_opnorm(z2, proj, 2, 2, quick(1)).lower_bound == doctest::Approx(1).epsilon(1e-6));

  for (const auto& fs : builtin_structures()) {
    const MultiplierSymbol id(fs, Operator::identity(fs.M_hat()));
    for (double p : {1.0, 1.5, 3.0}) CHECK(estimate_opnorm(fs, id, p, p, quick(2)).lower_bound == doctest::Approx(1).epsilon(1e-6));
  }
}

TEST_CASE("abelian p = q = 2 matches max |sigma|") {
  for (const auto& spec : builtin_group_specs()) {
    const auto g = make_group(spec);
    if (!g->is_abelian()) continue;
    const FourierStructure fs(g, Direction::FunctionSide);
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Operator sym = random_symbol(fs.M_hat(), s);
      double mx = 0;
      for (std::size_t k = 0; k < sym.block_count(); ++k) mx = std::max(mx, std::abs(sym.block(k)(0, 0)));
      const auto est = estimate_opnorm(fs, MultiplierSymbol(fs, sym), 2, 2, quick(s));
      CHECK(rel_err(est.lower_bound, mx) <= 1e-6);
    }
  }
}

TEST_CASE("property: estimates are witnessed and never beat an exact norm") {
  for (const auto& fs : builtin_structures()) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), s + 40));
      for (auto [p, q] : {std::pair{1.0, 2.0}, {1.5, kInf}, {2.0, 2.0}, {1.25, 3.0}}) {
        const auto est = estimate_opnorm(fs, sigma, p, q, quick(s));
        const Operator w = est.witness;
        const double direct = lp_norm(apply_multiplier(fs, sigma, w), q) / lp_norm(w, p);
        CHECK(rel_err(est.lower_bound, direct) <= 1e-12);
        if (const auto exact = exact_opnorm_endpoint(fs, sigma, p, q)) CHECK(est.lower_bound <= *exact * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("ascent is deterministic given the seed") {
  const FourierStructure fs(make_group("quaternion8"), Direction::BlockSide);
  const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), 5));
  const auto a = estimate_opnorm(fs, sigma, 1.5, 3, quick(11));
  const auto b = estimate_opnorm(fs, sigma, 1.5, 3, quick(11));
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(a.iterations == b.iterations);
  CHECK(max_abs_difference(a.witness, b.witness) == 0);
}

TEST_CASE("zero symbol has norm zero") {
  const FourierStructure fs(make_group("cyclic:3"), Direction::FunctionSide);
  const auto est = estimate_opnorm(fs, MultiplierSymbol(fs, Operator::zero(fs.M_hat())), 1.5, 2);
  CHECK(est.lower_bound == 0);
}
