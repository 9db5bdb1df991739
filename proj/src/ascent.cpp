#include "ncfourier/ascent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"

namespace ncf {

namespace {

struct SvEntry {
  double value;
  double weight;
  std::size_t block;
  Eigen::Index index;
};

std::vector<SvEntry> sorted_entries(const std::vector<Eigen::VectorXd>& svals, const TraceAlgebra& alg) {
  std::vector<SvEntry> out;
  for (std::size_t k = 0; k < svals.size(); ++k)
    for (Eigen::Index j = 0; j < svals[k].size(); ++j) out.push_back({svals[k](j), alg.block(k).weight, k, j});
  std::stable_sort(out.begin(), out.end(), [](const SvEntry& a, const SvEntry& b) { return a.value > b.value; });
  return out;
}

/// Norm value and d(log N)/d s for each entry (in entry order).
double log_norm_and_weights(const std::vector<SvEntry>& sv, const SpectralNorm& n, std::vector<double>* dlog) {
  if (dlog) dlog->assign(sv.size(), 0.0);
  if (sv.empty() || !(sv.front().value > 0)) return -std::numeric_limits<double>::infinity();
  if (n.kind == SpectralNorm::Kind::Schatten) {
    if (std::isinf(n.p)) {
      if (dlog) (*dlog)[0] = 1 / sv[0].value;
      return std::log(sv[0].value);
    }
    double sum = 0;
    for (const auto& e : sv) sum += e.weight * std::pow(e.value, n.p);
    if (dlog)
      for (std::size_t j = 0; j < sv.size(); ++j) (*dlog)[j] = sv[j].weight * std::pow(sv[j].value, n.p - 1) / sum;
    return std::log(sum) / n.p;
  }
  // Lorentz: sorted values on consecutive intervals of cumulative weight.
  if (std::isinf(n.q)) {
    if (std::isinf(n.p)) {
      if (dlog) (*dlog)[0] = 1 / sv[0].value;
      return std::log(sv[0].value);
    }
    double best = -1;
    std::size_t arg = 0;
    double cum = 0;
    for (std::size_t j = 0; j < sv.size(); ++j) {
      cum += sv[j].weight;
      const double v = sv[j].value * std::pow(cum, 1 / n.p);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    if (dlog) (*dlog)[arg] = 1 / sv[arg].value;
    return std::log(best);
  }
  const double e = n.q / n.p;
  double sum = 0;
  double cum = 0, prev = 0;
  std::vector<double> c(sv.size());
  for (std::size_t j = 0; j < sv.size(); ++j) {
    cum += sv[j].weight;
    const double cur = std::pow(cum, e);
    c[j] = (n.p / n.q) * (cur - prev);
    prev = cur;
    sum += c[j] * std::pow(sv[j].value, n.q);
  }
  if (dlog)
    for (std::size_t j = 0; j < sv.size(); ++j) (*dlog)[j] = c[j] * std::pow(sv[j].value, n.q - 1) / sum;
  return std::log(sum) / n.q;
}

Eigen::VectorXcd apply_map(const std::optional<Eigen::MatrixXcd>& map, const Eigen::VectorXcd& x) {
  return map ? Eigen::VectorXcd(*map * x) : x;
}

}  // namespace

RatioObjective::RatioObjective(AlgebraPtr source, AlgebraPtr num_target, std::optional<Eigen::MatrixXcd> num_map,
                               SpectralNorm num, AlgebraPtr den_target, std::optional<Eigen::MatrixXcd> den_map,
                               SpectralNorm den)
    : source_(std::move(source)),
      num_{std::move(num_target), std::move(num_map), num},
      den_{std::move(den_target), std::move(den_map), den} {
  const Eigen::Index n = source_->entry_count();
  for (const Side* s : {&num_, &den_}) {
    const Eigen::Index rows = s->map ? s->map->rows() : n;
    if ((s->map && s->map->cols() != n) || rows != s->target->entry_count())
      throw StructuralError("RatioObjective: map shape does not match the algebras");
    if (!(s->norm.p >= 1 && s->norm.q >= 1)) throw ContractViolation("RatioObjective: exponents must be >= 1");
  }
  std::mt19937_64 rng(0x6A177E5EEDULL);
  std::normal_distribution<double> normal;
  jitter_.resize(dimension());
  for (Eigen::Index i = 0; i < jitter_.size(); ++i) jitter_(i) = normal(rng);
  jitter_.normalize();
}

RatioObjective RatioObjective::multiplier(const FourierStructure& fs, const MultiplierSymbol& sigma, double p,
                                          double q) {
  return RatioObjective(fs.M(), fs.M(), multiplier_matrix(fs, sigma), SpectralNorm::schatten(q), fs.M(), std::nullopt,
                        SpectralNorm::schatten(p));
}

Eigen::VectorXd RatioObjective::to_theta(const Operator& x) const {
  const Eigen::VectorXcd v = x.flatten();
  Eigen::VectorXd t(2 * v.size());
  t << v.real(), v.imag();
  return t;
}

Operator RatioObjective::to_operator(const Eigen::VectorXd& theta) const {
  const Eigen::Index n = source_->entry_count();
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(theta(i), theta(n + i));
  return Operator::unflatten(source_, v);
}

double RatioObjective::side_value(const Side& s, const Eigen::VectorXcd& x) const {
  const Eigen::VectorXcd z = apply_map(s.map, x);
  std::vector<Eigen::VectorXd> svals;
  Eigen::Index at = 0;
  for (const Block& b : s.target->blocks()) {
    const Eigen::MatrixXcd m = z.segment(at, b.dim * b.dim).reshaped(b.dim, b.dim);
    at += b.dim * b.dim;
    if (b.dim == 1)
      svals.push_back(Eigen::VectorXd::Constant(1, std::abs(m(0, 0))));
    else
      svals.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues());
  }
  return log_norm_and_weights(sorted_entries(svals, *s.target), s.norm, nullptr);
}

double RatioObjective::side_log_gradient(const Side& s, const Eigen::VectorXcd& x, Eigen::VectorXcd& grad) const {
  const Eigen::VectorXcd z = apply_map(s.map, x);
  const auto& blocks = s.target->blocks();
  std::vector<Eigen::VectorXd> svals;
  std::vector<Eigen::MatrixXcd> us, vs;
  Eigen::Index at = 0;
  for (const Block& b : blocks) {
    const Eigen::MatrixXcd m = z.segment(at, b.dim * b.dim).reshaped(b.dim, b.dim);
    at += b.dim * b.dim;
    if (b.dim == 1) {
      const double a = std::abs(m(0, 0));
      svals.push_back(Eigen::VectorXd::Constant(1, a));
      us.push_back(Eigen::MatrixXcd::Constant(1, 1, a > 0 ? m(0, 0) / a : Complex(1)));
      vs.push_back(Eigen::MatrixXcd::Identity(1, 1));
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      svals.push_back(svd.singularValues());
      us.push_back(svd.matrixU());
      vs.push_back(svd.matrixV());
    }
  }
  const auto sv = sorted_entries(svals, *s.target);
  std::vector<double> dlog;
  const double value = log_norm_and_weights(sv, s.norm, &dlog);

  std::vector<Eigen::MatrixXcd> gblocks;
  for (const Block& b : blocks) gblocks.push_back(Eigen::MatrixXcd::Zero(b.dim, b.dim));
  for (std::size_t j = 0; j < sv.size(); ++j) {
    if (dlog[j] == 0) continue;
    const auto& e = sv[j];
    gblocks[e.block] += dlog[j] * us[e.block].col(e.index) * vs[e.block].col(e.index).adjoint();
  }
  Eigen::VectorXcd gz(z.size());
  at = 0;
  for (const auto& g : gblocks) {
    gz.segment(at, g.size()) = g.reshaped();
    at += g.size();
  }
  grad = s.map ? Eigen::VectorXcd(s.map->adjoint() * gz) : gz;
  return value;
}

double RatioObjective::value(const Eigen::VectorXd& theta) const {
  const Operator x = to_operator(theta);
  const Eigen::VectorXcd v = x.flatten();
  return side_value(num_, v) - side_value(den_, v);
}

double RatioObjective::value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
  const double f = value(theta);
  const Eigen::VectorXd shifted = theta + (1e-12 * theta.norm()) * jitter_;
  const Eigen::VectorXcd v = to_operator(shifted).flatten();
  Eigen::VectorXcd gn, gd;
  side_log_gradient(num_, v, gn);
  side_log_gradient(den_, v, gd);
  const Eigen::VectorXcd g = gn - gd;
  grad.resize(theta.size());
  grad << g.real(), g.imag();
  return f;
}

AscentResult ascend_from(const RatioObjective& objective, Eigen::VectorXd x, int max_iters, double tol) {
  AscentResult res;
  if (x.norm() == 0) return res;
  x.normalize();
  Eigen::VectorXd g;
  // minimize f = -log ratio
  double f = -objective.value_and_gradient(x, g);
  g = -g;
  if (!std::isfinite(f)) return res;

  constexpr std::size_t kMemory = 8;
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;
  std::vector<double> trace{f};
  int it = 0;
  for (; it < max_iters; ++it) {
    Eigen::VectorXd d = -g;
    if (!mem.empty()) {
      std::vector<double> alpha(mem.size());
      for (std::size_t i = mem.size(); i-- > 0;) {
        const auto& [s, y] = mem[i];
        alpha[i] = s.dot(d) / y.dot(s);
        d -= alpha[i] * y;
      }
      const auto& [s0, y0] = mem.back();
      d *= s0.dot(y0) / y0.dot(y0);
      for (std::size_t i = 0; i < mem.size(); ++i) {
        const auto& [s, y] = mem[i];
        d += (alpha[i] - y.dot(d) / y.dot(s)) * s;
      }
    }
    double slope = g.dot(d);
    if (!(slope < 0)) {
      mem.clear();
      d = -g;
      slope = g.dot(d);
    }
    if (!(slope < 0) || g.norm() <= 1e-14 / x.norm()) {
      res.converged = true;
      break;
    }

    double step = 1;
    bool accepted = false;
    Eigen::VectorXd xn, gn;
    double fn = 0;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      xn = x + step * d;
      fn = -objective.value_and_gradient(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      // no descent left at working precision
      res.converged = true;
      break;
    }
    gn = -gn;
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    x = std::move(xn);
    g = std::move(gn);
    f = fn;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      mem.emplace_back(s, y);
      if (mem.size() > kMemory) mem.pop_front();
    }
    const double nx = x.norm();
    if (nx < 0.5 || nx > 2) {
      // the objective is scale invariant and the gradient scales like 1/|x|
      x /= nx;
      g *= nx;
      mem.clear();
    }
    trace.push_back(f);
    if (trace.size() > 10 && std::abs(trace.back() - trace[trace.size() - 11]) <= tol) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.log_ratio = -f;
  res.theta = x;
  res.iterations = it;
  res.restarts_used = 1;
  return res;
}

AscentResult maximize_ratio(const RatioObjective& objective, const AscentOptions& opts) {
  if (opts.restarts < 0 || opts.max_iters < 1 || !(opts.tol > 0))
    throw ContractViolation("maximize_ratio: bad options");
  AscentResult best;
  auto consider = [&](const AscentResult& r) {
    best.iterations += r.iterations;
    best.restarts_used += 1;
    best.converged = best.converged || r.converged;
    if (r.theta.size() > 0 && r.log_ratio > best.log_ratio) {
      best.log_ratio = r.log_ratio;
      best.theta = r.theta;
    }
  };
  const Eigen::Index dim = objective.dimension();
  if (opts.basis_starts) {
    for (Eigen::Index i = 0; i < dim / 2; ++i) {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(dim);
      t(i) = 1;
      consider(ascend_from(objective, t, opts.max_iters, opts.tol));
    }
  }
  for (int r = 0; r < opts.restarts; ++r) {
    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
      std::mt19937_64 rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(r), attempt}));
      std::normal_distribution<double> normal;
      Eigen::VectorXd t(dim);
      for (Eigen::Index i = 0; i < dim; ++i) t(i) = normal(rng);
      if (!std::isfinite(objective.value(t))) continue;
      consider(ascend_from(objective, t, opts.max_iters, opts.tol));
      break;
    }
  }
  return best;
}

NormEstimate estimate_opnorm(const FourierStructure& fs, const MultiplierSymbol& sigma, double p, double q,
                             const AscentOptions& opts) {
  if (!(p >= 1 && q >= 1)) throw ContractViolation("estimate_opnorm: need 1 <= p, q <= inf");
  const RatioObjective obj = RatioObjective::multiplier(fs, sigma, p, q);
  const AscentResult r = maximize_ratio(obj, opts);
  if (r.theta.size() == 0) {
    // A_sigma = 0: every start is non-finite
    return {0, Operator::identity(fs.M()), r.iterations, r.restarts_used, false};
  }
  const Operator w = obj.to_operator(r.theta);
  const double lb = lp_norm(apply_multiplier(fs, sigma, w), q) / lp_norm(w, p);
  return {lb, w, r.iterations, r.restarts_used, r.converged};
}

}  // namespace ncf
