#include "ncfourier/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "ncfourier/ascent.hpp"
#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"

namespace ncf {

std::uint64_t trial_seed(const PlannedCheck& c, int t) {
  return derive_seed(c.seed_base, {static_cast<std::uint64_t>(t)});
}

namespace {

struct Cap {
  double value;
  double slack;
  std::string source;
};

class Planner {
 public:
  Planner(const Config& cfg, const Calibration& cal, RunMode mode) : cfg_(cfg), cal_(cal), mode_(mode) {}

  Cap calibrated(const std::string& check, const Params& params) const {
    if (auto o = cfg_.cap_overrides.find(check); o != cfg_.cap_overrides.end())
      return {o->second, 1e-10, "config:[caps] " + check};
    const CapEntry* e = cal_.find(check, params);
    if (!e)
      throw ContractViolation("no calibrated cap for " + cap_entry_id(check, params) +
                              "; regenerate the calibration file with ncflab calibrate");
    return {e->cap, 1e-10, "calibration:" + cap_entry_id(check, params)};
  }

  Cap exact(const std::string& check, double value, double slack = 0) const {
    if (auto o = cfg_.cap_overrides.find(check); o != cfg_.cap_overrides.end())
      return {o->second, slack, "config:[caps] " + check};
    return {value, slack, "exact"};
  }

  CheckRecord record(const std::string& check, const std::string& suite, const FourierStructure& fs,
                     const Params& params, const Cap& cap, Json extra = Json::object()) const {
    CheckRecord r;
    r.check_name = check;
    r.suite = suite;
    r.group = fs.group().name();
    r.direction = to_string(fs.direction());
    r.params = params;
    r.extra = std::move(extra);
    r.cap = cap.value;
    r.slack = cap.slack;
    r.cap_source = cap.source;
    return r;
  }

  void add(const std::string& suite, const FourierStructure& fs, const std::string& key, std::vector<CheckRecord> outs,
           std::function<std::vector<double>(std::uint64_t)> trial, int trials = -1) {
    if (outs.empty()) return;
    PlannedCheck c;
    c.outputs = std::move(outs);
    c.trials = trials > 0 ? trials : cfg_.trials_for(suite);
    c.seed_base = derive_seed(cfg_.seed, {name_tag(suite), name_tag(fs.name()), name_tag(key)});
    c.trial = std::move(trial);
    plan_.push_back(std::move(c));
  }

  bool certify() const { return mode_ == RunMode::Certify; }
  std::vector<PlannedCheck>& plan() { return plan_; }
  const Config& cfg() const { return cfg_; }

 private:
  const Config& cfg_;
  const Calibration& cal_;
  RunMode mode_;
  std::vector<PlannedCheck> plan_;
};

Operator draw_x(const FourierStructure& fs, std::uint64_t s) {
  return random_operator(fs.M(), s, Ensemble::GeneralComplex);
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void plan_axioms(Planner& pl, const FourierStructure& fs) {
  const std::string suite = "axioms";
  std::vector<CheckRecord> outs;
  const bool cert = pl.certify();
  const bool conv = !cert && fs.direction() == Direction::FunctionSide && fs.group().is_abelian();
  if (!cert) {
    outs.push_back(pl.record("f1-forward", suite, fs, {}, pl.exact("f1-forward", 1 + 1e-12)));
    outs.push_back(pl.record("f1-backward", suite, fs, {}, pl.exact("f1-backward", 1 + 1e-12)));
  }
  outs.push_back(pl.record("plancherel", suite, fs, {}, pl.exact("plancherel", 1e-10)));
  outs.push_back(pl.record("inversion", suite, fs, {}, pl.exact("inversion", 1e-9)));
  if (conv) outs.push_back(pl.record("convolution", suite, fs, {}, pl.exact("convolution", 1e-9)));
  pl.add(suite, fs, "pairs", std::move(outs), [fs, cert, conv](std::uint64_t s) {
    const Operator x = draw_x(fs, derive_seed(s, {0}));
    const Operator y = draw_x(fs, derive_seed(s, {1}));
    const Operator fx = forward(fs, x);
    const Operator fy = forward(fs, y);
    std::vector<double> r;
    if (!cert) {
      r.push_back(lp_norm(fx, kInf) / lp_norm(x, 1));
      r.push_back(lp_norm(x, kInf) / lp_norm(fx, 1));
    }
    r.push_back(std::abs(trace(fx * adjoint(fy)) - trace(x * adjoint(y))) / (lp_norm(x, 2) * lp_norm(y, 2) + 1));
    r.push_back(std::max(max_abs_difference(inverse(fs, fx), x), max_abs_difference(forward(fs, inverse(fs, fy)), fy)));
    if (conv) {
      const Operator lhs = forward(fs, convolution(fs, x, y));
      r.push_back(max_abs_difference(lhs, fx * fy) / std::max(1.0, (fx * fy).max_abs_entry()));
    }
    return r;
  });
}

void plan_submultiplicativity(Planner& pl, const FourierStructure& fs) {
  if (pl.certify()) return;
  const std::string suite = "submultiplicativity";
  pl.add(suite, fs, "pairs",
         {pl.record("submultiplicativity", suite, fs, {}, pl.exact("submultiplicativity", 1e-10))},
         [fs](std::uint64_t s) {
           const auto c = check_submultiplicative(draw_x(fs, derive_seed(s, {0})), draw_x(fs, derive_seed(s, {1})));
           return std::vector<double>{c.max_violation / c.scale};
         });
}

void plan_lorentz(Planner& pl, const FourierStructure& fs) {
  const std::string suite = "lorentz";
  const Config& cfg = pl.cfg();
  {
    std::vector<CheckRecord> outs;
    for (double p : cfg.lp_exponents)
      outs.push_back(pl.record("lpp-isometry", suite, fs, {{"p", p}}, pl.exact("lpp-isometry", 1e-9)));
    pl.add(suite, fs, "lpp", std::move(outs), [fs, ps = cfg.lp_exponents](std::uint64_t s) {
      const Operator x = draw_x(fs, s);
      std::vector<double> r;
      for (double p : ps) r.push_back(rel_diff(lorentz_norm(x, p, p), lp_norm(x, p)));
      return r;
    });
  }
  if (pl.certify()) return;
  {
    std::vector<CheckRecord> outs;
    for (const auto& t : cfg.holder_triples)
      outs.push_back(pl.record("holder", suite, fs, {{"p0", t[0]}, {"p1", t[1]}, {"q", t[2]}},
                               pl.exact("holder", 1, 1e-10), Json{{"p", 1 / (1 / t[0] + 1 / t[1])}}));
    pl.add(suite, fs, "holder", std::move(outs), [fs, ts = cfg.holder_triples](std::uint64_t s) {
      const Operator x = draw_x(fs, derive_seed(s, {0}));
      const Operator y = draw_x(fs, derive_seed(s, {1}));
      std::vector<double> r;
      for (const auto& t : ts) {
        const HolderCheck h = check_holder(x, y, t[0], t[1], t[2]);
        r.push_back(h.lhs / h.rhs);
      }
      return r;
    });
  }
  {
    std::vector<CheckRecord> outs;
    for (double r : cfg.weak_exponents)
      outs.push_back(pl.record("weak-norm", suite, fs, {{"r", r}}, pl.exact("weak-norm", 1e-10)));
    pl.add(suite, fs, "weak", std::move(outs), [fs, rs = cfg.weak_exponents](std::uint64_t s) {
      const Operator x = draw_x(fs, s);
      std::vector<double> out;
      for (double r : rs) out.push_back(rel_diff(weak_norm_via_distribution(x, r), lorentz_norm(x, r, kInf)));
      return out;
    });
  }
  {
    std::vector<CheckRecord> outs;
    for (const auto& t : cfg.embedding_triples) {
      const Params params{{"p", t[0]}, {"q", t[1]}, {"r", t[2]}};
      outs.push_back(pl.record("embedding", suite, fs, params, pl.calibrated("embedding", params)));
    }
    pl.add(suite, fs, "embedding", std::move(outs), [fs, ts = cfg.embedding_triples](std::uint64_t s) {
      const Operator x = draw_x(fs, s);
      std::vector<double> r;
      for (const auto& t : ts) r.push_back(check_embedding(x, t[0], t[1], t[2], kInf).ratio);
      return r;
    });
  }
}

void plan_hausdorff_young(Planner& pl, const FourierStructure& fs) {
  const std::string suite = "hausdorff-young";
  std::vector<CheckRecord> outs;
  std::vector<std::pair<double, HyMode>> runs;
  for (double p : pl.cfg().hy_exponents) {
    for (HyMode mode : {HyMode::Forward, HyMode::Inverse}) {
      const std::string check = std::string("hy-") + to_string(mode);
      if (p == 2) {
        outs.push_back(pl.record(check + "-endpoint", suite, fs, {{"p", p}}, pl.exact(check + "-endpoint", 1e-10)));
      } else if (!pl.certify()) {
        outs.push_back(pl.record(check, suite, fs, {{"p", p}}, pl.calibrated(check, {{"p", p}})));
      } else {
        continue;
      }
      runs.emplace_back(p, mode);
    }
  }
  pl.add(suite, fs, "x", std::move(outs), [fs, runs](std::uint64_t s) {
    const Operator x = draw_x(fs, s);
    std::vector<double> r;
    for (const auto& [p, mode] : runs) {
      const double ratio = hy_check(fs, x, p, mode).ratio;
      r.push_back(p == 2 ? std::abs(ratio - 1) : ratio);
    }
    return r;
  });
}

MultiplierSymbol hormander_symbol(const FourierStructure& fs, std::uint64_t s) {
  return MultiplierSymbol(fs, random_symbol(fs.M_hat(), derive_seed(s, {0})));
}

void plan_hormander(Planner& pl, const FourierStructure& fs) {
  if (pl.certify()) return;
  const std::string suite = "hormander";
  const Config& cfg = pl.cfg();
  for (double p : cfg.hormander_p) {
    for (double q : cfg.hormander_q) {
      const HormanderExponents e = HormanderExponents::hormander(p, q);
      const Params params{{"p", p}, {"q", q}};
      const Json extra{{"r", json_number(e.r)}};
      const Cap cap = pl.calibrated("hormander", params);
      std::vector<CheckRecord> outs{
          pl.record("hormander", suite, fs, params, cap, extra),
          pl.record("hormander-scale", suite, fs, params, pl.exact("hormander-scale", 1e-10), extra),
          pl.record("defining-identity", suite, fs, params, pl.exact("defining-identity", 1e-10), extra)};
      const std::string key = cap_entry_id("hormander", params);
      pl.add(suite, fs, key, std::move(outs), [fs, e](std::uint64_t s) {
        const MultiplierSymbol sigma = hormander_symbol(fs, s);
        const Operator x = draw_x(fs, derive_seed(s, {1}));
        const double ratio = hormander_ratio(fs, sigma, x, e).ratio;
        std::mt19937_64 rng(derive_seed(s, {2}));
        std::uniform_real_distribution<double> mag(-2, 2), phase(0, 2 * std::numbers::pi);
        const Complex c1 = std::polar(std::pow(10.0, mag(rng)), phase(rng));
        const Complex c2 = std::polar(std::pow(10.0, mag(rng)), phase(rng));
        const MultiplierSymbol scaled(fs, c1 * sigma.symbol());
        const double ratio2 = hormander_ratio(fs, scaled, c2 * x, e).ratio;
        const Operator fx = forward(fs, x);
        const Operator lhs = forward(fs, apply_multiplier(fs, sigma, x));
        const Operator rhs = sigma.symbol() * fx;
        return std::vector<double>{ratio, rel_diff(ratio2, ratio),
                                   max_abs_difference(lhs, rhs) / std::max(rhs.max_abs_entry(), 1e-300)};
      });
      // gradient ascent on the worst symbol of the sweep above
      const int sweep = static_cast<int>(pl.plan().size()) - 1;
      PlannedCheck asc;
      asc.outputs.push_back(pl.record("hormander-ascent", suite, fs, params, cap, extra));
      asc.trials = 1;
      asc.depends_on = sweep;
      asc.seed_base = derive_seed(cfg.seed, {name_tag(suite), name_tag(fs.name()), name_tag(key + "ascent")});
      asc.trial = [fs, e, opts = cfg.ascent](std::uint64_t s) {
        const MultiplierSymbol sigma = hormander_symbol(fs, s);
        AscentOptions o = opts;
        o.seed = derive_seed(s, {3});
        const NormEstimate est = estimate_opnorm(fs, sigma, e.p, e.q, o);
        return std::vector<double>{hormander_ratio(fs, sigma, est.witness, e).ratio};
      };
      pl.plan().push_back(std::move(asc));
    }
  }
}

void plan_chain(Planner& pl, const FourierStructure& fs) {
  if (pl.certify()) return;
  const std::string suite = "chain";
  const Config& cfg = pl.cfg();
  for (double p : cfg.hormander_p) {
    for (double q : cfg.hormander_q) {
      const HormanderExponents e = HormanderExponents::hormander(p, q);
      const Params params{{"p", p}, {"q", q}};
      const Json extra{{"r", json_number(e.r)}};
      ChainCaps caps = exact_chain_caps(e);
      const Cap ca = pl.calibrated("hy-inverse", {{"p", e.q_conj}});
      const Cap cb = pl.exact("chain-b", caps.dilation, 1e-10);
      const Cap cc = pl.exact("chain-c", caps.holder, 1e-10);
      const Cap cd = pl.calibrated("embedding", {{"p", e.p_conj}, {"q", p}, {"r", q}});
      const Cap ce = pl.calibrated("hy-forward", {{"p", p}});
      std::vector<CheckRecord> outs{pl.record("chain-a", suite, fs, params, ca, extra),
                                    pl.record("chain-b", suite, fs, params, cb, extra),
                                    pl.record("chain-c", suite, fs, params, cc, extra),
                                    pl.record("chain-d", suite, fs, params, cd, extra),
                                    pl.record("chain-e", suite, fs, params, ce, extra),
                                    pl.record("chain-product", suite, fs, params, pl.exact("chain-product", 1e-10),
                                              extra)};
      caps = {ca.value, cb.value, cc.value, cd.value, ce.value};
      pl.add(suite, fs, cap_entry_id("chain", params), std::move(outs), [fs, e, caps](std::uint64_t s) {
        const MultiplierSymbol sigma = hormander_symbol(fs, s);
        const Operator x = draw_x(fs, derive_seed(s, {1}));
        const ChainReport rep = chain_report(fs, sigma, x, e, caps);
        std::vector<double> r;
        for (const auto& st : rep.steps) r.push_back(std::isfinite(st.lhs) && std::isfinite(st.rhs) ? st.ratio : NAN);
        r.push_back(rel_diff(rep.product, rep.end_to_end));
        return r;
      });
    }
  }
}

void plan_paley(Planner& pl, const FourierStructure& fs) {
  const std::string suite = "paley";
  std::vector<CheckRecord> outs;
  std::vector<double> ps;
  for (double p : pl.cfg().paley_exponents) {
    const HormanderExponents e = HormanderExponents::paley(p);
    const Json extra{{"s", json_number(e.s)}};
    if (p == 2)
      outs.push_back(pl.record("paley", suite, fs, {{"p", p}}, pl.exact("paley", 1, 1e-10), extra));
    else if (!pl.certify())
      outs.push_back(pl.record("paley", suite, fs, {{"p", p}}, pl.calibrated("paley", {{"p", p}}), extra));
    else
      continue;
    ps.push_back(p);
  }
  pl.add(suite, fs, "pairs", std::move(outs), [fs, ps](std::uint64_t s) {
    const Operator y = random_symbol(fs.M_hat(), derive_seed(s, {0}));
    const Operator x = draw_x(fs, derive_seed(s, {1}));
    std::vector<double> r;
    for (double p : ps) r.push_back(paley_ratio(fs, y, x, p).ratio);
    return r;
  });
}

void plan_equivariance(Planner& pl, const FourierStructure& fs) {
  if (pl.certify() || fs.direction() != Direction::FunctionSide) return;
  const std::string suite = "equivariance";
  pl.add(
      suite, fs, "symbols", {pl.record("equivariance", suite, fs, {}, pl.exact("equivariance", 1e-9))},
      [fs](std::uint64_t s) {
        const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), derive_seed(s, {0})));
        double worst = 0;
        for (std::size_t g = 0; g < fs.group().order(); ++g) {
          const auto res = translation_equivariance(fs, sigma, g, derive_seed(s, {1, g}));
          worst = std::max(worst, res->residual / res->scale);
        }
        return std::vector<double>{worst};
      },
      pl.cfg().equivariance_symbols);
}

}  // namespace

std::vector<PlannedCheck> plan_checks(const Config& cfg, const Calibration& cal, RunMode mode) {
  Planner pl(cfg, cal, mode);
  auto wants = [&](const std::string& s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
  for (const auto& spec : cfg.groups) {
    const GroupPtr g = make_group(spec);
    for (Direction d : cfg.directions) {
      const FourierStructure fs(g, d);
      if (wants("axioms")) plan_axioms(pl, fs);
      if (wants("submultiplicativity")) plan_submultiplicativity(pl, fs);
      if (wants("lorentz")) plan_lorentz(pl, fs);
      if (wants("hausdorff-young")) plan_hausdorff_young(pl, fs);
      if (wants("hormander")) plan_hormander(pl, fs);
      if (wants("chain")) plan_chain(pl, fs);
      if (wants("paley")) plan_paley(pl, fs);
      if (wants("equivariance")) plan_equivariance(pl, fs);
    }
  }
  return std::move(pl.plan());
}

namespace {

std::vector<double> safe_trial(const PlannedCheck& c, std::uint64_t seed) {
  try {
    std::vector<double> r = c.trial(seed);
    if (r.size() != c.outputs.size()) throw std::logic_error("trial returned the wrong number of ratios");
    return r;
  } catch (const std::exception&) {
    return std::vector<double>(c.outputs.size(), NAN);
  }
}

void fold(CheckRecord& rec, double ratio, std::uint64_t seed) {
  ++rec.trials;
  if (!(ratio <= rec.cap * (1 + rec.slack))) ++rec.violations;
  const bool nan_now = std::isnan(ratio), nan_before = std::isnan(rec.max_ratio);
  if ((nan_now && !nan_before) || (!nan_before && ratio > rec.max_ratio) || rec.trials == 1) {
    rec.max_ratio = ratio;
    rec.worst_seed = seed;
  }
}

}  // namespace

std::vector<CheckRecord> run_plan(std::vector<PlannedCheck>& plan, int workers) {
  const std::size_t nw = static_cast<std::size_t>(std::max(1, workers));
  std::vector<CheckRecord> out;
  for (std::size_t ci = 0; ci < plan.size(); ++ci) {
    PlannedCheck& c = plan[ci];
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckRecord> recs = c.outputs;
    if (c.depends_on >= 0) {
      const CheckRecord& dep = plan[static_cast<std::size_t>(c.depends_on)].outputs.front();
      const std::uint64_t seed = dep.worst_seed;
      const auto r = safe_trial(c, seed);
      for (std::size_t j = 0; j < recs.size(); ++j) fold(recs[j], r[j], seed);
    } else {
      const std::size_t n = static_cast<std::size_t>(c.trials);
      std::vector<std::vector<double>> ratios(n);
      auto work = [&](std::size_t w) {
        for (std::size_t t = w * n / nw; t < (w + 1) * n / nw; ++t)
          ratios[t] = safe_trial(c, trial_seed(c, static_cast<int>(t)));
      };
      if (nw == 1 || n < 2) {
        for (std::size_t w = 0; w < nw; ++w) work(w);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
      }
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t j = 0; j < recs.size(); ++j) fold(recs[j], ratios[t][j], trial_seed(c, static_cast<int>(t)));
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : recs) r.elapsed = elapsed;
    // keep worst seeds visible to dependent checks
    c.outputs = recs;
    for (auto& r : recs) out.push_back(std::move(r));
  }
  return out;
}

int total_violations(const std::vector<CheckRecord>& records) {
  int v = 0;
  for (const auto& r : records) v += r.violations;
  return v;
}

Json report_json(const std::string& command, const Config& cfg, const Calibration& cal,
                 const std::vector<CheckRecord>& records, bool timing) {
  Json j;
  j["tool"] = "ncflab";
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["groups"] = cfg.groups;
  Json dirs = Json::array();
  for (Direction d : cfg.directions) dirs.push_back(to_string(d));
  j["directions"] = dirs;
  j["suites"] = cfg.suites;
  j["calibration"] = cal.id();
  Json checks = Json::array();
  int failed = 0;
  for (const auto& r : records) {
    Json c;
    c["check_name"] = r.check_name;
    c["suite"] = r.suite;
    c["group"] = r.group;
    c["direction"] = r.direction;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = json_number(v);
    for (const auto& [k, v] : r.extra.items()) params[k] = v;
    c["params"] = params;
    c["trials"] = r.trials;
    c["max_ratio"] = std::isnan(r.max_ratio) ? Json("nan") : json_number(r.max_ratio);
    c["cap"] = json_number(r.cap);
    c["slack"] = r.slack;
    c["cap_source"] = r.cap_source;
    c["violations"] = r.violations;
    c["worst_seed"] = r.worst_seed;
    if (timing) c["elapsed"] = r.elapsed;
    checks.push_back(c);
    if (r.violations > 0) ++failed;
  }
  j["checks"] = checks;
  const int v = total_violations(records);
  j["summary"] = Json{{"checks", records.size()}, {"failed_checks", failed}, {"violations", v}, {"pass", v == 0}};
  return j;
}

}  // namespace ncf
