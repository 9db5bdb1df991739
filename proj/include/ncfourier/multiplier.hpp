#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "ncfourier/fourier_structure.hpp"
#include "ncfourier/lorentz.hpp"

namespace ncf {

/// Symbol sigma of a Fourier multiplier: an element of the dual algebra M^.
class MultiplierSymbol {
 public:
  /// Throws StructuralError unless sigma lies in fs.M_hat().
  MultiplierSymbol(const FourierStructure& fs, Operator sigma);

  const Operator& symbol() const { return sigma_; }

 private:
  Operator sigma_;
};

/// Random symbol for sweeps. The ensemble cycles with the seed through
/// general complex, positive, unitary and a general draw with a random
/// nonempty subset of blocks zeroed (projection-like shapes).
Operator random_symbol(const AlgebraPtr& algebra, std::uint64_t seed);

/// A_sigma x = inverse(sigma * forward(x)).
Operator apply_multiplier(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x);

/// Dense matrix of A_sigma acting on flattened entries of M.
Eigen::MatrixXcd multiplier_matrix(const FourierStructure& fs, const MultiplierSymbol& sigma);

struct RatioParts {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};

enum class HyMode { Forward, Inverse };

const char* to_string(HyMode m);

/// forward: ||F x||_{p',p} / ||x||_p.   inverse: ||x||_{p'} / ||F x||_{p,p'}.
/// Needs 1 < p <= 2 and x != 0.
RatioParts hy_check(const FourierStructure& fs, const Operator& x, double p, HyMode mode);

/// ||A_sigma x||_q / (||sigma||_{r,inf} ||x||_p); r = inf reads ||sigma||_{inf,inf} = mu(0; sigma).
RatioParts hormander_ratio(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x,
                           const HormanderExponents& e);

/// ||y F x||_p / (||y||_{s,inf} ||x||_p), 1/s = 2/p - 1; needs 1 < p <= 2.
RatioParts paley_ratio(const FourierStructure& fs, const Operator& y, const Operator& x, double p);

/// Caps for the five steps of the chain. dilation and holder default to the
/// exact constant 2^{1/q'}; the other three come from calibration.
struct ChainCaps {
  double hy_inverse = kInf;
  double dilation = kInf;
  double holder = kInf;
  double embedding = kInf;
  double hy_forward = kInf;
};

/// Steps, with y = sigma F[x] in M^:
///   (a) ||A_sigma x||_q              / ||y||_{q',q}                          inverse HY at q'
///   (b) ||mu(y)||_{q',q}             / ||mu(sigma) mu(F x)||_{q',q}          rearrangement + dilation
///   (c) ||mu(sigma) mu(F x)||_{q',q} / (||sigma||_{r,inf} ||F x||_{p',q})    Lorentz Hoelder
///   (d) ||F x||_{p',q}               / ||F x||_{p',p}                        embedding, p <= q
///   (e) ||F x||_{p',p}               / ||x||_p                               forward HY at p
/// The five ratios multiply to the end-to-end Hormander ratio.
struct ChainStep {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double cap = kInf;
  bool pass = true;
};

struct ChainReport {
  std::array<ChainStep, 5> steps;
  double end_to_end = 0;
  double product = 0;
  bool pass = true;
};

ChainCaps exact_chain_caps(const HormanderExponents& e);

/// A step passes when ratio <= cap (1 + 1e-10) and both sides are finite.
ChainReport chain_report(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x,
                         const HormanderExponents& e, const ChainCaps& caps);

struct EquivarianceResult {
  double residual = 0;
  /// max |A_sigma x| over the samples, at least mu(0; sigma) max |x|.
  double scale = 0;
};

/// max over `samples` random x of max_h |A_sigma(lambda_g x)(h) - (lambda_g A_sigma x)(h)|.
/// Function-side only; nullopt on block-side structures.
std::optional<EquivarianceResult> translation_equivariance(const FourierStructure& fs, const MultiplierSymbol& sigma,
                                                           std::size_t g, std::uint64_t seed, int samples = 10);

/// Exact ||A_sigma||_{L^p -> L^q} where a closed form exists:
///   p = q = 2, any structure: mu(0; sigma), since F is a unitary between the L^2 spaces;
///   function side, p = 1:     max_g ||A_sigma delta_g||_q;
///   function side, q = inf:   max_g ||row g of A_sigma||_{p'}.
/// nullopt otherwise.
std::optional<double> exact_opnorm_endpoint(const FourierStructure& fs, const MultiplierSymbol& sigma, double p,
                                            double q);

}  // namespace ncf
