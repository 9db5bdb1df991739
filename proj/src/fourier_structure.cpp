#include "ncfourier/fourier_structure.hpp"

#include <algorithm>
#include <cmath>

#include "ncfourier/errors.hpp"
#include "ncfourier/lorentz.hpp"
#include "ncfourier/seed.hpp"

namespace ncf {

const char* to_string(Direction d) { return d == Direction::FunctionSide ? "function-side" : "block-side"; }

Direction parse_direction(std::string_view text) {
  if (text == "function" || text == "function-side") return Direction::FunctionSide;
  if (text == "block" || text == "block-side") return Direction::BlockSide;
  throw ContractViolation("unknown direction '" + std::string(text) + "'");
}

FourierStructure::FourierStructure(GroupPtr group, Direction direction)
    : group_(std::move(group)), direction_(direction) {
  if (!group_) throw ContractViolation("FourierStructure: null group");
  const GroupData& g = *group_;
  name_ = g.name() + "/" + to_string(direction_);
  const double n = static_cast<double>(g.order());
  AlgebraPtr functions =
      make_algebra(std::vector<Block>(g.order(), Block{1, 1.0}), g.name() + ":functions");
  std::vector<Block> dual;
  for (const Irrep& rep : g.irreps()) dual.push_back({rep.dim, static_cast<double>(rep.dim) / n});
  AlgebraPtr blocks = make_algebra(std::move(dual), g.name() + ":blocks");
  if (direction_ == Direction::FunctionSide) {
    m_ = std::move(functions);
    m_hat_ = std::move(blocks);
  } else {
    m_ = std::move(blocks);
    m_hat_ = std::move(functions);
  }
}

Operator FourierStructure::function(const Eigen::VectorXcd& values) const {
  if (static_cast<std::size_t>(values.size()) != group_->order())
    throw StructuralError("function: expected " + std::to_string(group_->order()) + " values");
  return Operator::unflatten(function_algebra(), values);
}

Operator FourierStructure::delta(std::size_t g) const {
  if (g >= group_->order()) throw ContractViolation("delta: element out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(group_->order()));
  v(static_cast<Eigen::Index>(g)) = 1;
  return function(v);
}

Eigen::VectorXcd FourierStructure::values(const Operator& f) const {
  if (!f.algebra().same_layout(*function_algebra()))
    throw StructuralError("values: operator is not in the function algebra of " + name_);
  return f.flatten();
}

FourierStructure group_fourier_structure(GroupPtr group, Direction direction) {
  return FourierStructure(std::move(group), direction);
}

Operator group_transform(const FourierStructure& fs, const Operator& f) {
  const Eigen::VectorXcd x = fs.values(f);
  const GroupData& g = fs.group();
  std::vector<Eigen::MatrixXcd> out;
  for (const Irrep& rep : g.irreps()) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    for (std::size_t e = 0; e < g.order(); ++e) acc += x(static_cast<Eigen::Index>(e)) * rep.matrices[e].adjoint();
    out.push_back(std::move(acc));
  }
  return Operator(fs.block_algebra(), std::move(out));
}

Operator group_cotransform(const FourierStructure& fs, const Operator& y) {
  if (!y.algebra().same_layout(*fs.block_algebra()))
    throw StructuralError("cotransform: operator is not in the block algebra of " + fs.name());
  const GroupData& g = fs.group();
  const double n = static_cast<double>(g.order());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.order()));
  for (std::size_t e = 0; e < g.order(); ++e) {
    Complex acc = 0;
    for (std::size_t k = 0; k < g.irreps().size(); ++k) {
      const Irrep& rep = g.irreps()[k];
      // Tr(y pi) = sum_ij y_ij pi_ji
      acc += static_cast<double>(rep.dim) * (y.block(k).array() * rep.matrices[e].transpose().array()).sum();
    }
    v(static_cast<Eigen::Index>(e)) = acc / n;
  }
  return fs.function(v);
}

Operator forward(const FourierStructure& fs, const Operator& x) {
  if (!x.algebra().same_layout(*fs.M())) throw StructuralError("forward: operator is not in M of " + fs.name());
  return fs.direction() == Direction::FunctionSide ? group_transform(fs, x) : group_cotransform(fs, x);
}

Operator inverse(const FourierStructure& fs, const Operator& y) {
  if (!y.algebra().same_layout(*fs.M_hat()))
    throw StructuralError("inverse: operator is not in M^ of " + fs.name());
  return fs.direction() == Direction::FunctionSide ? group_cotransform(fs, y) : group_transform(fs, y);
}

Eigen::MatrixXcd forward_matrix(const FourierStructure& fs) {
  const Eigen::Index n = fs.M()->entry_count();
  Eigen::MatrixXcd a(fs.M_hat()->entry_count(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1;
    a.col(j) = forward(fs, Operator::unflatten(fs.M(), e)).flatten();
  }
  return a;
}

Operator convolution(const FourierStructure& fs, const Operator& x, const Operator& y) {
  const Eigen::VectorXcd a = fs.values(x);
  const Eigen::VectorXcd b = fs.values(y);
  const GroupData& g = fs.group();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(a.size());
  for (std::size_t h = 0; h < g.order(); ++h)
    for (std::size_t k = 0; k < g.order(); ++k)
      out(static_cast<Eigen::Index>(g.multiply(h, k))) += a(static_cast<Eigen::Index>(h)) * b(static_cast<Eigen::Index>(k));
  return fs.function(out);
}

Operator left_translate(const FourierStructure& fs, std::size_t g, const Operator& x) {
  const GroupData& grp = fs.group();
  if (g >= grp.order()) throw ContractViolation("left_translate: element out of range");
  const Eigen::VectorXcd a = fs.values(x);
  Eigen::VectorXcd out(a.size());
  const std::size_t ginv = grp.inverse(g);
  for (std::size_t h = 0; h < grp.order(); ++h)
    out(static_cast<Eigen::Index>(h)) = a(static_cast<Eigen::Index>(grp.multiply(ginv, h)));
  return fs.function(out);
}

namespace {

void track(AxiomWorst& w, double v, std::uint64_t seed) {
  if (v > w.value || (std::isnan(v) && !std::isnan(w.value))) {
    w.value = v;
    w.seed = seed;
  }
}

}  // namespace

AxiomReport verify_axioms(const FourierStructure& fs, int trials, std::uint64_t seed) {
  if (trials < 1) throw ContractViolation("verify_axioms: trials must be >= 1");
  AxiomReport rep;
  rep.structure = fs.name();
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(t)});
    const Operator x = random_operator(fs.M(), derive_seed(s, {0}), Ensemble::GeneralComplex);
    const Operator y = random_operator(fs.M(), derive_seed(s, {1}), Ensemble::GeneralComplex);
    const Operator fx = forward(fs, x);
    const Operator fy = forward(fs, y);

    const double f1a = lp_norm(fx, kInf) / lp_norm(x, 1);
    const double f1b = lp_norm(x, kInf) / lp_norm(fx, 1);
    const double plan = std::abs(trace(fx * adjoint(fy)) - trace(x * adjoint(y))) / (lp_norm(x, 2) * lp_norm(y, 2) + 1);
    const double inv = std::max(max_abs_difference(inverse(fs, fx), x),
                                max_abs_difference(forward(fs, inverse(fs, fy)), fy));
    track(rep.f1_forward, f1a, s);
    track(rep.f1_backward, f1b, s);
    track(rep.plancherel, plan, s);
    track(rep.inversion, inv, s);
    const bool bad = !(f1a <= 1 + 1e-12) || !(f1b <= 1 + 1e-12) || !(plan <= 1e-10) || !(inv <= 1e-9);
    if (bad) ++rep.violations;
  }
  return rep;
}

std::vector<FourierStructure> builtin_structures() {
  std::vector<FourierStructure> out;
  for (const auto& spec : builtin_group_specs()) {
    GroupPtr g = make_group(spec);
    out.emplace_back(g, Direction::FunctionSide);
    out.emplace_back(g, Direction::BlockSide);
  }
  return out;
}

}  // namespace ncf
