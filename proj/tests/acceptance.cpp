// Acceptance suite: one PASS/FAIL line per criterion. Tolerances, trial counts
// and time budgets are pinned here; nothing is read from the environment.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ncfourier/ascent.hpp"
#include "ncfourier/config.hpp"
#include "ncfourier/singular_values.hpp"
#include "ncfourier/verify.hpp"
#include "support.hpp"

using namespace ncf;
using namespace ncf::testing;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

const Calibration& shipped_calibration() {
  static const Calibration cal = Calibration::load(default_calibration_path());
  return cal;
}

// Runs the verify harness for one suite and summarizes the records.
struct SuiteRun {
  std::vector<CheckRecord> records;
  double seconds = 0;
  int violations = 0;
};

SuiteRun run_suite(const std::string& suite, int trials, const std::vector<std::string>& groups,
                   const std::function<void(Config&)>& tweak = {}) {
  Config cfg;
  cfg.seed = kSeed;
  cfg.trials = trials;
  cfg.suites = {suite};
  cfg.groups = groups;
  if (tweak) tweak(cfg);
  const auto t0 = Clock::now();
  auto plan = plan_checks(cfg, shipped_calibration(), RunMode::Verify);
  SuiteRun out;
  out.records = run_plan(plan, 1);
  out.seconds = seconds_since(t0);
  out.violations = total_violations(out.records);
  return out;
}

std::string worst_of(const std::vector<CheckRecord>& records, const std::string& check) {
  double worst_use = -1;
  std::string where;
  for (const auto& r : records) {
    if (r.check_name != check) continue;
    const double use = r.cap > 0 ? r.max_ratio / r.cap : r.max_ratio;
    if (use > worst_use) {
      worst_use = use;
      where = r.group + "/" + r.direction + " " + cap_entry_id(check, r.params) + " ratio=" + fmt(r.max_ratio) +
              " cap=" + fmt(r.cap);
    }
  }
  return where;
}

int violations_of(const std::vector<CheckRecord>& records, const std::string& check) {
  int v = 0;
  for (const auto& r : records)
    if (r.check_name == check) v += r.violations;
  return v;
}

// Axiom reports are shared by criteria 1-3.
struct AxiomRun {
  std::vector<AxiomReport> reports;
  double seconds = 0;
};

const AxiomRun& axiom_run() {
  static const AxiomRun run = [] {
    AxiomRun r;
    const auto t0 = Clock::now();
    for (const auto& fs : builtin_structures()) r.reports.push_back(verify_axioms(fs, 1000, kSeed));
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome criterion_1() {
  const AxiomRun& run = axiom_run();
  double worst = 0;
  for (const auto& r : run.reports) worst = std::max(worst, r.plancherel.value);
  const bool ok = worst <= 1e-10 && run.reports.size() == 38 && run.seconds <= 30;
  return {ok, "38 structures x 1000 pairs, worst scaled defect " + fmt(worst) + ", " + fmt(run.seconds) + " s"};
}

Outcome criterion_2() {
  double fwd = 0, bwd = 0;
  for (const auto& r : axiom_run().reports) {
    fwd = std::max(fwd, r.f1_forward.value);
    bwd = std::max(bwd, r.f1_backward.value);
  }
  // equality at the unit point mass (its image, the unit, on the block side)
  double eq = 0;
  for (const auto& fs : builtin_structures()) {
    const Operator e = fs.direction() == Direction::FunctionSide ? fs.delta(0) : Operator::identity(fs.M());
    const Operator fe = forward(fs, e);
    eq = std::max(eq, rel_err(lp_norm(fe, kInf), lp_norm(e, 1)));
    eq = std::max(eq, rel_err(lp_norm(e, kInf), lp_norm(fe, 1)));
  }
  const bool ok = fwd <= 1 + 1e-12 && bwd <= 1 + 1e-12 && eq <= 1e-12;
  return {ok, "max ratios " + fmt(fwd) + ", " + fmt(bwd) + "; equality defect at delta_e " + fmt(eq)};
}

Outcome criterion_3() {
  double worst = 0;
  for (const auto& r : axiom_run().reports) worst = std::max(worst, r.inversion.value);
  return {worst <= 1e-9, "worst round-trip residual " + fmt(worst)};
}

// Dense oracle for mu(t+s; xy) <= mu(t; x) mu(s; y): a uniform grid plus
// points just left of every breakpoint sum.
double dense_submultiplicative(const Operator& x, const Operator& y) {
  const StepFunction mx = singular_function(x), my = singular_function(y), mxy = singular_function(x * y);
  std::vector<double> ts{0}, ss{0};
  const double tx = mx.support(), sy = my.support();
  for (int i = 1; i <= 200; ++i) {
    ts.push_back(tx * i / 200.0);
    ss.push_back(sy * i / 200.0);
  }
  for (double b : mx.breakpoints()) ts.push_back(b * (1 - 1e-9));
  for (double b : my.breakpoints()) ss.push_back(b * (1 - 1e-9));
  double worst = -kInf;
  for (double t : ts)
    for (double s : ss) worst = std::max(worst, mxy((t + s) * (1 + 1e-12)) - mx(t) * my(s));
  return worst;
}

Outcome criterion_4() {
  std::vector<AlgebraPtr> algebras;
  for (const auto& fs : builtin_structures()) algebras.push_back(fs.M());
  for (std::uint64_t s = 0; s < 10; ++s) algebras.push_back(random_algebra(kSeed + s));
  double worst = -kInf, disagreement = 0;
  int failures = 0;
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      const std::uint64_t s = derive_seed(kSeed, {4, a, i});
      const Operator x = random_element(algebras[a], 2 * s);
      const Operator y = random_element(algebras[a], 2 * s + 1);
      const SubmultiplicativeCheck c = check_submultiplicative(x, y);
      if (c.scale == 0) continue;
      worst = std::max(worst, c.max_violation / c.scale);
      if (!(c.max_violation <= 1e-10 * c.scale)) ++failures;
      if (i < 20) {
        // the corner grid is exhaustive, so no dense point may exceed it
        const double dense = dense_submultiplicative(x, y);
        disagreement = std::max(disagreement, (dense - c.max_violation) / c.scale);
      }
    }
  }
  const bool ok = failures == 0 && disagreement <= 1e-12;
  return {ok, std::to_string(algebras.size()) + " algebras x 200 pairs, worst scaled violation " + fmt(worst) +
                  ", dense excess over corners " + fmt(disagreement)};
}

Outcome criterion_5() {
  double worst = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Operator x = random_element(random_algebra(kSeed + s), s);
    if (x.is_zero()) continue;
    for (double p : {1.25, 1.5, 2.0, 3.0}) worst = std::max(worst, rel_err(lorentz_norm(x, p, p), lp_norm(x, p)));
  }
  return {worst <= 1e-9, "1000 operators x 4 exponents, worst relative error " + fmt(worst)};
}

Outcome criterion_6() {
  int failures = 0;
  double worst = 0;
  for (auto [p0, p1, q] : {std::tuple{2.0, 2.0, 1.0}, {3.0, 6.0, 2.0}, {1.5, 3.0, 4.0}}) {
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const AlgebraPtr a = random_algebra(kSeed + s);
      const HolderCheck h = check_holder(random_element(a, 2 * s), random_element(a, 2 * s + 1), p0, p1, q);
      if (!h.pass) ++failures;
      if (h.rhs > 0) worst = std::max(worst, h.lhs / h.rhs);
    }
  }
  return {failures == 0, "3000 pairs, " + std::to_string(failures) + " violations, max lhs/rhs " + fmt(worst)};
}

Outcome criterion_7() {
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Operator x = random_element(random_algebra(kSeed + 7 * s), s);
    for (double r : {1.5, 2.0, 4.0}) worst = std::max(worst, rel_err(weak_norm_via_distribution(x, r), lorentz_norm(x, r, kInf)));
  }
  return {worst <= 1e-10, "100 operators x 3 exponents, worst relative error " + fmt(worst)};
}

Outcome criterion_8() {
  std::vector<std::string> groups = builtin_group_specs();
  for (const auto& g : extended_group_specs()) groups.push_back(g);
  std::size_t largest = 0;
  for (const auto& g : groups) largest = std::max(largest, make_group(g)->order());
  const SuiteRun run = run_suite("hausdorff-young", 1000, groups);
  const int endpoint = violations_of(run.records, "hy-forward-endpoint") + violations_of(run.records, "hy-inverse-endpoint");
  const int interior = violations_of(run.records, "hy-forward") + violations_of(run.records, "hy-inverse");
  const bool ok = run.violations == 0 && largest >= 24;
  return {ok, std::to_string(groups.size()) + " groups up to order " + std::to_string(largest) + ", endpoint violations " +
                  std::to_string(endpoint) + ", interior violations " + std::to_string(interior) + "; tightest " +
                  worst_of(run.records, "hy-inverse")};
}

Outcome criterion_9() {
  const SuiteRun run = run_suite("hormander", 1000, builtin_group_specs());
  const int ratio = violations_of(run.records, "hormander");
  const int ascent = violations_of(run.records, "hormander-ascent");
  const int scale = violations_of(run.records, "hormander-scale");
  const bool ok = run.violations == 0 && run.seconds <= 120;
  return {ok, "random " + std::to_string(ratio) + ", ascent " + std::to_string(ascent) + ", scale " +
                  std::to_string(scale) + " violations, " + fmt(run.seconds) + " s; tightest " +
                  worst_of(run.records, "hormander-ascent")};
}

Outcome criterion_10() {
  const SuiteRun run = run_suite("chain", 100, builtin_group_specs());
  bool exact_c = true;
  for (const auto& r : run.records)
    if (r.check_name == "chain-c") {
      const double qc = conjugate_exponent(r.params[1].second);
      exact_c = exact_c && r.cap == std::pow(2.0, 1 / qc) && r.slack == 1e-10;
    }
  std::string per_step;
  for (const char* step : {"chain-a", "chain-b", "chain-c", "chain-d", "chain-e", "chain-product"})
    per_step += std::string(per_step.empty() ? "" : ", ") + step + " " + std::to_string(violations_of(run.records, step));
  return {run.violations == 0 && exact_c, "violations: " + per_step};
}

Outcome criterion_11() {
  const SuiteRun run = run_suite("paley", 1000, builtin_group_specs());
  double endpoint = 0;
  for (const auto& r : run.records)
    if (r.check_name == "paley" && r.params[0].second == 2) endpoint = std::max(endpoint, r.max_ratio);
  const bool ok = run.violations == 0 && endpoint <= 1 + 1e-10;
  return {ok, "p = 2 max ratio " + fmt(endpoint) + "; tightest " + worst_of(run.records, "paley")};
}

Outcome criterion_12() {
  AscentOptions opts;
  opts.restarts = 2;
  opts.max_iters = 400;
  opts.tol = 1e-12;
  double worst = 0;
  std::string where;
  int cases = 0;
  for (const auto& fs : builtin_structures()) {
    std::vector<std::pair<double, double>> pq{{2, 2}};
    if (fs.direction() == Direction::FunctionSide) {
      pq.push_back({1, 2});
      pq.push_back({1, kInf});
      pq.push_back({1.5, kInf});
    }
    for (auto [p, q] : pq) {
      for (std::uint64_t i = 0; i < 50; ++i) {
        const std::uint64_t s = derive_seed(kSeed, {12, name_tag(fs.name()), i});
        const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), s));
        const auto exact = exact_opnorm_endpoint(fs, sigma, p, q);
        if (!exact) return {false, "no exact value for " + fs.name()};
        opts.seed = s;
        const NormEstimate est = estimate_opnorm(fs, sigma, p, q, opts);
        const double err = *exact == 0 ? est.lower_bound : rel_err(est.lower_bound, *exact);
        ++cases;
        if (err > worst) {
          worst = err;
          where = fs.name() + " p=" + fmt(p) + " q=" + fmt(q);
        }
      }
    }
  }
  // gradient vs central differences
  double fd_worst = 0;
  const auto structures = builtin_structures();
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto& fs = structures[i % structures.size()];
    const std::uint64_t s = derive_seed(kSeed, {121, i});
    const MultiplierSymbol sigma(fs, random_operator(fs.M_hat(), s, Ensemble::GeneralComplex));
    const double p = 1.2 + 0.1 * static_cast<double>(i % 9), q = 2.0 + 0.5 * static_cast<double>(i % 5);
    const RatioObjective obj = RatioObjective::multiplier(fs, sigma, p, q);
    const Eigen::VectorXd theta = obj.to_theta(random_operator(fs.M(), s + 1, Ensemble::GeneralComplex));
    Eigen::VectorXd g;
    obj.value_and_gradient(theta, g);
    Eigen::VectorXd fd(theta.size());
    const double h = 1e-6 * std::max(1.0, theta.norm());
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      Eigen::VectorXd a = theta, b = theta;
      a(k) += h;
      b(k) -= h;
      fd(k) = (obj.value(a) - obj.value(b)) / (2 * h);
    }
    fd_worst = std::max(fd_worst, (g - fd).norm() / g.norm());
  }
  const bool ok = worst <= 1e-6 && fd_worst <= 1e-5;
  return {ok, std::to_string(cases) + " estimates, worst relative gap " + fmt(worst) + (where.empty() ? "" : " (" + where + ")") +
                  "; gradient check worst " + fmt(fd_worst)};
}

Outcome criterion_13() {
  double worst = 0;
  int structures = 0;
  for (const auto& fs : builtin_structures()) {
    if (fs.direction() != Direction::FunctionSide) continue;
    ++structures;
    for (std::uint64_t i = 0; i < 10; ++i) {
      const std::uint64_t s = derive_seed(kSeed, {13, name_tag(fs.name()), i});
      const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), s));
      for (std::size_t g = 0; g < fs.group().order(); ++g) {
        const auto r = translation_equivariance(fs, sigma, g, derive_seed(s, {g}));
        if (r->scale > 0) worst = std::max(worst, r->residual / r->scale);
      }
    }
  }
  return {worst <= 1e-9, std::to_string(structures) + " structures, worst scaled residual " + fmt(worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_14() {
  const fs::path dir = fs::temp_directory_path() / ("ncflab-acceptance-" + std::to_string(kSeed));
  fs::create_directories(dir);
  const fs::path cfg = dir / "determinism.ini";
  {
    std::ofstream out(cfg);
    out << "[run]\nseed = 99\ntrials = 25\ngroups = builtin\n"
           "suites = axioms, submultiplicativity, lorentz, hausdorff-young, hormander, chain, paley, equivariance\n"
           "[ascent]\nrestarts = 1\nmax_iters = 100\n";
  }
  auto verify = [&](const std::string& name, int workers) {
    const fs::path report = dir / name;
    const std::string cmd = std::string(NCF_TOOL) + " verify --config " + cfg.string() + " --out " + report.string() +
                            " --workers " + std::to_string(workers) + " > " + (dir / "log.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return std::pair{rc, slurp(report)};
  };
  const auto [rc1, a] = verify("first.json", 1);
  const auto [rc2, b] = verify("second.json", 1);
  const auto [rc3, c] = verify("parallel.json", 3);
  const bool ran = rc1 != -1 && rc2 != -1 && rc3 != -1 && !a.empty();
  const bool ok = ran && a == b && a == c;
  fs::remove_all(dir);
  return {ok, "two serial runs " + std::string(a == b ? "identical" : "differ") + ", 3 workers " +
                  std::string(a == c ? "identical" : "differ") + " (" + std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"Plancherel on every built-in structure", criterion_1},
      {"exact contractivity (F1) with equality at delta_e", criterion_2},
      {"inversion round trips", criterion_3},
      {"singular-value submultiplicativity", criterion_4},
      {"L^{p,p} = L^p isometry", criterion_5},
      {"Lorentz Hoelder with constant 2^{1/p}", criterion_6},
      {"weak-norm identity", criterion_7},
      {"Hausdorff-Young endpoints and calibrated interior", criterion_8},
      {"multiplier theorem within calibrated caps", criterion_9},
      {"proof chain steps within caps", criterion_10},
      {"Paley inequality", criterion_11},
      {"norm oracles and ascent gradients", criterion_12},
      {"translation equivariance", criterion_13},
      {"byte-identical verify reports", criterion_14},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
