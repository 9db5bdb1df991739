#pragma once

// Hand-rolled generators for property tests. Every draw is a pure function of
// its seed so a failing case is reproduced by the printed seed alone.

#include <random>
#include <string>
#include <vector>

#include "ncfourier/fourier_structure.hpp"
#include "ncfourier/seed.hpp"
#include "ncfourier/trace_algebra.hpp"

namespace ncf::testing {

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

/// 1..4 blocks of dims 1..4 with weights in [0.1, 3].
inline AlgebraPtr random_algebra(std::uint64_t seed) {
  auto rng = rng_for(seed);
  std::uniform_int_distribution<int> count(1, 4), dim(1, 4);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  std::vector<Block> blocks(static_cast<std::size_t>(count(rng)));
  for (auto& b : blocks) b = Block{dim(rng), weight(rng)};
  return make_algebra(std::move(blocks), "gen-" + std::to_string(seed));
}

/// Cycles through the ensembles, plus low-rank and degenerate-spectrum draws
/// that exercise ties in the singular values.
inline Operator random_element(const AlgebraPtr& alg, std::uint64_t seed) {
  switch (seed % 6) {
    case 0:
      return random_operator(alg, seed, Ensemble::GeneralComplex);
    case 1:
      return random_operator(alg, seed, Ensemble::Hermitian);
    case 2:
      return random_operator(alg, seed, Ensemble::Positive);
    case 3:
      return random_operator(alg, seed, Ensemble::Unitary);
    case 4: {
      // rank one per block
      std::vector<Eigen::MatrixXcd> b;
      const Operator g = random_operator(alg, seed, Ensemble::GeneralComplex);
      for (std::size_t k = 0; k < alg->block_count(); ++k) b.push_back(g.block(k).col(0) * g.block(k).row(0));
      return Operator(alg, std::move(b));
    }
    default: {
      // integer diagonal, conjugated by a unitary: repeated singular values
      auto rng = rng_for(seed);
      std::uniform_int_distribution<int> v(0, 3);
      const Operator u = random_operator(alg, seed ^ 0x55, Ensemble::Unitary);
      std::vector<Eigen::MatrixXcd> b;
      for (std::size_t k = 0; k < alg->block_count(); ++k) {
        Eigen::VectorXcd d(alg->block(k).dim);
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = v(rng);
        b.push_back(u.block(k) * d.asDiagonal() * u.block(k).adjoint());
      }
      return Operator(alg, std::move(b));
    }
  }
}

inline Operator single_block_diag(std::vector<Complex> d, double weight = 1.0) {
  auto alg = make_algebra({Block{static_cast<Eigen::Index>(d.size()), weight}});
  return Operator::from_diagonal(alg, d);
}

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

}  // namespace ncf::testing
