#include "ncfourier/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"

namespace ncf {

MultiplierSymbol::MultiplierSymbol(const FourierStructure& fs, Operator sigma) : sigma_(std::move(sigma)) {
  if (!sigma_.algebra().same_layout(*fs.M_hat()))
    throw StructuralError("multiplier symbol is not in M^ of " + fs.name());
}

Operator random_symbol(const AlgebraPtr& algebra, std::uint64_t seed) {
  switch (seed % 4) {
    case 0:
      return random_operator(algebra, seed, Ensemble::GeneralComplex);
    case 1:
      return random_operator(algebra, seed, Ensemble::Positive);
    case 2:
      return random_operator(algebra, seed, Ensemble::Unitary);
    default:
      break;
  }
  Operator g = random_operator(algebra, seed, Ensemble::GeneralComplex);
  std::vector<Eigen::MatrixXcd> blocks = g.blocks();
  const std::uint64_t bits = splitmix64(seed);
  const std::size_t k = blocks.size();
  std::size_t kept = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if ((bits >> (i % 64)) & 1U)
      blocks[i].setZero();
    else
      ++kept;
  }
  if (kept == 0) blocks[bits % k] = g.block(bits % k);
  return Operator(algebra, std::move(blocks));
}

Operator apply_multiplier(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x) {
  return inverse(fs, sigma.symbol() * forward(fs, x));
}

Eigen::MatrixXcd multiplier_matrix(const FourierStructure& fs, const MultiplierSymbol& sigma) {
  const Eigen::Index n = fs.M()->entry_count();
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1;
    a.col(j) = apply_multiplier(fs, sigma, Operator::unflatten(fs.M(), e)).flatten();
  }
  return a;
}

const char* to_string(HyMode m) { return m == HyMode::Forward ? "forward" : "inverse"; }

namespace {

RatioParts make_ratio(double lhs, double rhs) { return {lhs, rhs, lhs / rhs}; }

void require_nonzero(const Operator& x, const char* what) {
  if (x.is_zero()) throw DegenerateInput(std::string(what) + ": zero operator");
}

double weak_norm(const Operator& x, double r) {
  return std::isinf(r) ? lorentz_norm(x, kInf, kInf) : lorentz_norm(x, r, kInf);
}

}  // namespace

RatioParts hy_check(const FourierStructure& fs, const Operator& x, double p, HyMode mode) {
  if (!(p > 1 && p <= 2)) throw ContractViolation("hy_check: need 1 < p <= 2");
  require_nonzero(x, "hy_check");
  const double pc = conjugate_exponent(p);
  const Operator fx = forward(fs, x);
  if (mode == HyMode::Forward) return make_ratio(lorentz_norm(fx, pc, p), lp_norm(x, p));
  return make_ratio(lp_norm(x, pc), lorentz_norm(fx, p, pc));
}

RatioParts hormander_ratio(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x,
                           const HormanderExponents& e) {
  require_nonzero(sigma.symbol(), "hormander_ratio");
  require_nonzero(x, "hormander_ratio");
  const Operator ax = apply_multiplier(fs, sigma, x);
  return make_ratio(lp_norm(ax, e.q), weak_norm(sigma.symbol(), e.r) * lp_norm(x, e.p));
}

RatioParts paley_ratio(const FourierStructure& fs, const Operator& y, const Operator& x, double p) {
  const HormanderExponents e = HormanderExponents::paley(p);
  if (!y.algebra().same_layout(*fs.M_hat())) throw StructuralError("paley_ratio: y is not in M^ of " + fs.name());
  require_nonzero(y, "paley_ratio");
  require_nonzero(x, "paley_ratio");
  const Operator yfx = y * forward(fs, x);
  return make_ratio(lp_norm(yfx, p), weak_norm(y, e.s) * lp_norm(x, p));
}

ChainCaps exact_chain_caps(const HormanderExponents& e) {
  ChainCaps c;
  c.dilation = std::pow(2.0, 1 / e.q_conj);
  c.holder = c.dilation;
  return c;
}

ChainReport chain_report(const FourierStructure& fs, const MultiplierSymbol& sigma, const Operator& x,
                         const HormanderExponents& e, const ChainCaps& caps) {
  require_nonzero(sigma.symbol(), "chain_report");
  require_nonzero(x, "chain_report");
  const Operator fx = forward(fs, x);
  const Operator y = sigma.symbol() * fx;
  const Operator ax = inverse(fs, y);
  const StepFunction mu_sigma = singular_function(sigma.symbol());
  const StepFunction mu_fx = singular_function(fx);
  const StepFunction product = pointwise_product(mu_sigma, mu_fx);

  const double n_ax = lp_norm(ax, e.q);
  const double n_y = lorentz_norm(y, e.q_conj, e.q);
  const double n_prod = lorentz_norm(product, e.q_conj, e.q);
  const double n_sigma = weak_norm(sigma.symbol(), e.r);
  const double n_fx_q = lorentz_norm(fx, e.p_conj, e.q);
  const double n_fx_p = lorentz_norm(fx, e.p_conj, e.p);
  const double n_x = lp_norm(x, e.p);

  ChainReport rep;
  auto step = [](const char* name, double lhs, double rhs, double cap) {
    ChainStep s;
    s.name = name;
    s.lhs = lhs;
    s.rhs = rhs;
    // 0/0 is a vacuous step
    s.ratio = (lhs == 0 && rhs == 0) ? 0 : lhs / rhs;
    s.cap = cap;
    s.pass = std::isfinite(lhs) && std::isfinite(rhs) && std::isfinite(s.ratio) && s.ratio <= cap * (1 + 1e-10);
    return s;
  };
  rep.steps[0] = step("inverse-hausdorff-young", n_ax, n_y, caps.hy_inverse);
  rep.steps[1] = step("rearrangement", n_y, n_prod, caps.dilation);
  rep.steps[2] = step("lorentz-holder", n_prod, n_sigma * n_fx_q, caps.holder);
  rep.steps[3] = step("embedding", n_fx_q, n_fx_p, caps.embedding);
  rep.steps[4] = step("hausdorff-young", n_fx_p, n_x, caps.hy_forward);
  rep.end_to_end = n_ax / (n_sigma * n_x);
  rep.product = 1;
  for (const auto& s : rep.steps) {
    rep.product *= s.ratio;
    rep.pass = rep.pass && s.pass;
  }
  return rep;
}

std::optional<EquivarianceResult> translation_equivariance(const FourierStructure& fs, const MultiplierSymbol& sigma,
                                                           std::size_t g, std::uint64_t seed, int samples) {
  if (fs.direction() != Direction::FunctionSide) return std::nullopt;
  EquivarianceResult out;
  const double sigma_norm = lorentz_norm(sigma.symbol(), kInf, kInf);
  for (int i = 0; i < samples; ++i) {
    const Operator x = random_operator(fs.M(), derive_seed(seed, {static_cast<std::uint64_t>(i)}),
                                       Ensemble::GeneralComplex);
    const Operator ax = apply_multiplier(fs, sigma, x);
    const Operator lhs = apply_multiplier(fs, sigma, left_translate(fs, g, x));
    const Operator rhs = left_translate(fs, g, ax);
    out.residual = std::max(out.residual, max_abs_difference(lhs, rhs));
    out.scale = std::max({out.scale, ax.max_abs_entry(), sigma_norm * x.max_abs_entry()});
  }
  return out;
}

std::optional<double> exact_opnorm_endpoint(const FourierStructure& fs, const MultiplierSymbol& sigma, double p,
                                            double q) {
  if (p == 2 && q == 2) return lorentz_norm(sigma.symbol(), kInf, kInf);
  if (fs.direction() != Direction::FunctionSide) return std::nullopt;
  if (!(p >= 1 && q >= 1)) return std::nullopt;
  const Eigen::MatrixXcd a = multiplier_matrix(fs, sigma);
  auto lq = [](const Eigen::VectorXcd& v, double e) {
    if (std::isinf(e)) return v.cwiseAbs().maxCoeff();
    return std::pow(v.cwiseAbs().array().pow(e).sum(), 1 / e);
  };
  double best = 0;
  if (p == 1) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) best = std::max(best, lq(a.col(j), q));
    return best;
  }
  if (std::isinf(q)) {
    const double pc = conjugate_exponent(p);
    for (Eigen::Index i = 0; i < a.rows(); ++i) best = std::max(best, lq(a.row(i).transpose(), pc));
    return best;
  }
  return std::nullopt;
}

}  // namespace ncf
