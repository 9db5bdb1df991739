#include "ncfourier/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "ncfourier/ascent.hpp"
#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"
#include "ncfourier/text_format.hpp"

#ifndef NCF_DEFAULT_CALIBRATION
#define NCF_DEFAULT_CALIBRATION "data/calibration.json"
#endif

namespace ncf {

Json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>());
  throw ParseError("expected a number, got " + j.dump());
}

std::string cap_entry_id(const std::string& check, const Params& params) {
  std::string id = check + "(";
  for (std::size_t i = 0; i < params.size(); ++i)
    id += (i ? "," : "") + params[i].first + "=" + format_real(params[i].second);
  return id + ")";
}

namespace {

bool same_number(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

std::string fnv_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(name_tag(text)));
  return std::string("fnv1a:") + buf;
}

}  // namespace

Calibration Calibration::parse(const std::string& text) {
  Calibration c;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("calibration: ") + e.what());
  }
  try {
    if (j.contains("meta")) c.meta_ = j.at("meta");
    for (const auto& e : j.at("entries")) {
      CapEntry entry;
      entry.check = e.at("check").get<std::string>();
      for (const auto& [k, v] : e.at("params").items()) entry.params.emplace_back(k, number_from_json(v));
      entry.cap = number_from_json(e.at("cap"));
      if (e.contains("witness")) entry.witness = e.at("witness");
      c.entries_.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("calibration: ") + e.what());
  }
  c.id_ = fnv_hex(text);
  return c;
}

Calibration Calibration::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open calibration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const CapEntry* Calibration::find(const std::string& check, const Params& params) const {
  for (const auto& e : entries_) {
    if (e.check != check || e.params.size() != params.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < params.size() && match; ++i)
      match = e.params[i].first == params[i].first && same_number(e.params[i].second, params[i].second);
    if (match) return &e;
  }
  return nullptr;
}

std::string Calibration::to_text() const {
  Json j;
  j["meta"] = meta_;
  Json arr = Json::array();
  for (const auto& e : entries_) {
    Json o;
    o["id"] = cap_entry_id(e.check, e.params);
    o["check"] = e.check;
    Json p = Json::object();
    for (const auto& [k, v] : e.params) p[k] = json_number(v);
    o["params"] = p;
    o["cap"] = json_number(e.cap);
    o["witness"] = e.witness;
    arr.push_back(o);
  }
  j["entries"] = arr;
  return j.dump(2) + "\n";
}

std::string default_calibration_path() { return NCF_DEFAULT_CALIBRATION; }

namespace {

struct Best {
  double ratio = -1;
  Json witness;

  void consider(double r, const std::string& structure, const char* source, const std::string& detail) {
    if (std::isfinite(r) && r > ratio) {
      ratio = r;
      witness = Json{{"structure", structure}, {"source", source}, {"detail", detail}, {"ratio", r}};
    }
  }
  void merge(const Best& o) {
    if (o.ratio > ratio) *this = o;
  }
};

using BestMap = std::map<std::string, Best>;

Complex grid_value(int idx) {
  static const Complex phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (idx == 0) return 0;
  return (idx <= 4 ? 0.5 : 1.0) * phases[(idx - 1) % 4];
}

/// Nonzero grid vectors whose first nonzero entry is real positive.
std::vector<Eigen::VectorXcd> grid_vectors(Eigen::Index n) {
  std::vector<Eigen::VectorXcd> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == 9) idx[k++] = 0;
    if (k == idx.size()) break;
    const auto first = std::find_if(idx.begin(), idx.end(), [](int v) { return v != 0; });
    if ((*first - 1) % 4 != 0) continue;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = grid_value(idx[static_cast<std::size_t>(i)]);
    out.push_back(v);
  }
  return out;
}

std::string grid_detail(const Eigen::VectorXcd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_complex(v(i));
  return s + "]";
}

std::vector<std::pair<std::string, Operator>> structured_symbols(const AlgebraPtr& alg) {
  std::vector<std::pair<std::string, Operator>> out;
  out.emplace_back("identity", Operator::identity(alg));
  const std::size_t k = alg->block_count();
  auto blocks_identity = [&](std::size_t from, std::size_t to) {
    std::vector<Eigen::MatrixXcd> b;
    for (std::size_t i = 0; i < k; ++i) {
      const Eigen::Index d = alg->block(i).dim;
      b.push_back(i >= from && i < to ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(d, d)) : Eigen::MatrixXcd::Zero(d, d));
    }
    return Operator(alg, std::move(b));
  };
  for (std::size_t i = 0; i < k; ++i) out.emplace_back("block-" + std::to_string(i), blocks_identity(i, i + 1));
  for (std::size_t m = 2; m < k; ++m) out.emplace_back("first-" + std::to_string(m), blocks_identity(0, m));
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index d = alg->block(i).dim;
    if (d < 2) continue;
    std::vector<Eigen::MatrixXcd> b;
    for (std::size_t j = 0; j < k; ++j) b.push_back(Eigen::MatrixXcd::Zero(alg->block(j).dim, alg->block(j).dim));
    b[i](0, 0) = 1;
    out.emplace_back("rank1-" + std::to_string(i), Operator(alg, std::move(b)));
  }
  return out;
}

/// Left multiplication by y composed with the transform, on flattened entries.
Eigen::MatrixXcd paley_map(const FourierStructure& fs, const Operator& y) {
  const Eigen::Index n = fs.M()->entry_count();
  Eigen::MatrixXcd a(fs.M_hat()->entry_count(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1;
    a.col(j) = (y * forward(fs, Operator::unflatten(fs.M(), e))).flatten();
  }
  return a;
}

/// sigma -> A_sigma x for fixed x, on flattened entries.
Eigen::MatrixXcd symbol_map(const FourierStructure& fs, const Operator& x) {
  const Eigen::Index n = fs.M_hat()->entry_count();
  Eigen::MatrixXcd a(fs.M()->entry_count(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1;
    a.col(j) = apply_multiplier(fs, MultiplierSymbol(fs, Operator::unflatten(fs.M_hat(), e)), x).flatten();
  }
  return a;
}

struct Keyed {
  std::string id;
  double p = 0, q = 0;
};

BestMap sweep_structure(const FourierStructure& fs, const CalibrationOptions& opts) {
  BestMap best;
  const std::string& name = fs.name();
  const std::uint64_t base = derive_seed(opts.seed, {name_tag(name)});
  const bool small = fs.group().order() <= 3;
  const auto grid_m = small ? grid_vectors(fs.M()->entry_count()) : std::vector<Eigen::VectorXcd>{};
  const auto grid_hat = small ? grid_vectors(fs.M_hat()->entry_count()) : std::vector<Eigen::VectorXcd>{};
  auto x_of = [&](const Eigen::VectorXcd& v) { return Operator::unflatten(fs.M(), v); };
  auto s_of = [&](const Eigen::VectorXcd& v) { return Operator::unflatten(fs.M_hat(), v); };
  const Eigen::MatrixXcd fmat = forward_matrix(fs);
  auto ascent_opts = [&](std::uint64_t seed) {
    AscentOptions a;
    a.restarts = opts.ascent_restarts;
    a.max_iters = opts.ascent_max_iters;
    a.tol = 1e-10;
    a.seed = seed;
    return a;
  };
  auto random_x = [&](std::uint64_t s) { return random_operator(fs.M(), s, Ensemble::GeneralComplex); };

  // Hausdorff-Young
  for (double p : opts.hy_exponents) {
    for (HyMode mode : {HyMode::Forward, HyMode::Inverse}) {
      const std::string check = std::string("hy-") + to_string(mode);
      Best& b = best[cap_entry_id(check, {{"p", p}})];
      for (const auto& v : grid_m) b.consider(hy_check(fs, x_of(v), p, mode).ratio, name, "grid", grid_detail(v));
      for (int t = 0; t < opts.random_draws; ++t) {
        const std::uint64_t s = derive_seed(base, {name_tag(check), static_cast<std::uint64_t>(t)});
        b.consider(hy_check(fs, random_x(s), p, mode).ratio, name, "random", "seed=" + std::to_string(s));
      }
      const double pc = conjugate_exponent(p);
      const RatioObjective obj =
          mode == HyMode::Forward
              ? RatioObjective(fs.M(), fs.M_hat(), fmat, SpectralNorm::lorentz(pc, p), fs.M(), std::nullopt,
                               SpectralNorm::schatten(p))
              : RatioObjective(fs.M(), fs.M(), std::nullopt, SpectralNorm::schatten(pc), fs.M_hat(), fmat,
                               SpectralNorm::lorentz(p, pc));
      const std::uint64_t s = derive_seed(base, {name_tag(check), name_tag("ascent")});
      const AscentResult r = maximize_ratio(obj, ascent_opts(s));
      if (r.theta.size() > 0)
        b.consider(hy_check(fs, obj.to_operator(r.theta), p, mode).ratio, name, "ascent", "seed=" + std::to_string(s));
    }
  }

  // Hormander
  for (double p : opts.hormander_p) {
    for (double q : opts.hormander_q) {
      const HormanderExponents e = HormanderExponents::hormander(p, q);
      Best& b = best[cap_entry_id("hormander", {{"p", p}, {"q", q}})];
      for (const auto& sv : grid_hat) {
        const MultiplierSymbol sigma(fs, s_of(sv));
        for (const auto& xv : grid_m)
          b.consider(hormander_ratio(fs, sigma, x_of(xv), e).ratio, name, "grid",
                     "sigma=" + grid_detail(sv) + " x=" + grid_detail(xv));
      }
      std::vector<std::pair<double, std::uint64_t>> top;
      for (int t = 0; t < opts.random_draws; ++t) {
        const std::uint64_t s = derive_seed(base, {name_tag("hormander"), static_cast<std::uint64_t>(t)});
        const MultiplierSymbol sigma(fs, random_symbol(fs.M_hat(), derive_seed(s, {0})));
        const double r = hormander_ratio(fs, sigma, random_x(derive_seed(s, {1})), e).ratio;
        b.consider(r, name, "random", "seed=" + std::to_string(s));
        top.emplace_back(r, s);
      }
      std::sort(top.begin(), top.end(), [](const auto& a, const auto& c) { return a.first > c.first; });
      std::vector<std::pair<std::string, Operator>> symbols = structured_symbols(fs.M_hat());
      for (std::size_t i = 0; i < std::min<std::size_t>(3, top.size()); ++i)
        symbols.emplace_back("random-seed=" + std::to_string(top[i].second),
                             random_symbol(fs.M_hat(), derive_seed(top[i].second, {0})));
      // alternate: best x for sigma, then best sigma for that x (the ratio is
      // ||L_x sigma||_q / ||sigma||_{r,inf} up to the fixed ||x||_p)
      const SpectralNorm sigma_norm = SpectralNorm::lorentz(e.r, kInf);
      for (const auto& [label, op] : symbols) {
        Operator sym = op;
        const std::uint64_t s = derive_seed(base, {name_tag("hormander-ascent"), name_tag(label)});
        AscentResult rx = maximize_ratio(RatioObjective::multiplier(fs, MultiplierSymbol(fs, sym), p, q), ascent_opts(s));
        for (int round = 0; rx.theta.size() > 0; ++round) {
          const RatioObjective xobj = RatioObjective::multiplier(fs, MultiplierSymbol(fs, sym), p, q);
          const Operator x = xobj.to_operator(rx.theta);
          b.consider(hormander_ratio(fs, MultiplierSymbol(fs, sym), x, e).ratio, name, "ascent",
                     "sigma=" + label + " seed=" + std::to_string(s) + " round=" + std::to_string(round));
          if (round == opts.alternations) break;
          const RatioObjective sobj(fs.M_hat(), fs.M(), symbol_map(fs, x), SpectralNorm::schatten(q), fs.M_hat(),
                                    std::nullopt, sigma_norm);
          const AscentResult rs = ascend_from(sobj, sobj.to_theta(sym), opts.ascent_max_iters, 1e-10);
          if (rs.theta.size() == 0 || !(rs.log_ratio > -kInf)) break;
          sym = sobj.to_operator(rs.theta);
          const RatioObjective next = RatioObjective::multiplier(fs, MultiplierSymbol(fs, sym), p, q);
          rx = ascend_from(next, next.to_theta(x), opts.ascent_max_iters, 1e-10);
        }
      }
    }
  }

  // Paley
  for (double p : opts.paley_exponents) {
    Best& b = best[cap_entry_id("paley", {{"p", p}})];
    for (const auto& yv : grid_hat)
      for (const auto& xv : grid_m)
        b.consider(paley_ratio(fs, s_of(yv), x_of(xv), p).ratio, name, "grid",
                   "y=" + grid_detail(yv) + " x=" + grid_detail(xv));
    std::vector<std::pair<double, std::uint64_t>> top;
    for (int t = 0; t < opts.random_draws; ++t) {
      const std::uint64_t s = derive_seed(base, {name_tag("paley"), static_cast<std::uint64_t>(t)});
      const double r = paley_ratio(fs, random_symbol(fs.M_hat(), derive_seed(s, {0})), random_x(derive_seed(s, {1})), p).ratio;
      b.consider(r, name, "random", "seed=" + std::to_string(s));
      top.emplace_back(r, s);
    }
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& c) { return a.first > c.first; });
    std::vector<std::pair<std::string, Operator>> symbols = structured_symbols(fs.M_hat());
    for (std::size_t i = 0; i < std::min<std::size_t>(3, top.size()); ++i)
      symbols.emplace_back("random-seed=" + std::to_string(top[i].second),
                           random_symbol(fs.M_hat(), derive_seed(top[i].second, {0})));
    for (const auto& [label, y] : symbols) {
      const RatioObjective obj(fs.M(), fs.M_hat(), paley_map(fs, y), SpectralNorm::schatten(p), fs.M(), std::nullopt,
                               SpectralNorm::schatten(p));
      const std::uint64_t s = derive_seed(base, {name_tag("paley-ascent"), name_tag(label)});
      const AscentResult r = maximize_ratio(obj, ascent_opts(s));
      if (r.theta.size() > 0)
        b.consider(paley_ratio(fs, y, obj.to_operator(r.theta), p).ratio, name, "ascent",
                   "y=" + label + " seed=" + std::to_string(s));
    }
  }
  return best;
}

}  // namespace

Calibration generate_calibration(const CalibrationOptions& opts, std::ostream* log) {
  if (opts.groups.empty()) throw ContractViolation("generate_calibration: no groups");
  std::vector<FourierStructure> structures;
  for (const auto& spec : opts.groups) {
    GroupPtr g = make_group(spec);
    structures.emplace_back(g, Direction::FunctionSide);
    structures.emplace_back(g, Direction::BlockSide);
  }

  std::vector<BestMap> results(structures.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, opts.workers));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < structures.size(); i += workers) {
      results[i] = sweep_structure(structures[i], opts);
      if (log && workers == 1) *log << "calibrated " << structures[i].name() << "\n" << std::flush;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  BestMap merged;
  for (const auto& r : results)
    for (const auto& [id, b] : r) merged[id].merge(b);

  Calibration cal;
  Json groups = Json::array();
  for (const auto& g : opts.groups) groups.push_back(g);
  cal.meta() = Json{{"generator", "ncflab calibrate"},
                    {"seed", opts.seed},
                    {"random_draws", opts.random_draws},
                    {"ascent_restarts", opts.ascent_restarts},
                    {"ascent_max_iters", opts.ascent_max_iters},
                    {"alternations", opts.alternations},
                    {"groups", groups},
                    {"directions", Json::array({"function-side", "block-side"})}};

  auto emit = [&](const std::string& check, const Params& params) {
    const Best& b = merged.at(cap_entry_id(check, params));
    cal.add({check, params, b.ratio, b.witness});
  };
  for (double p : opts.hy_exponents) emit("hy-forward", {{"p", p}});
  for (double p : opts.hy_exponents) emit("hy-inverse", {{"p", p}});
  for (double p : opts.hormander_p)
    for (double q : opts.hormander_q) emit("hormander", {{"p", p}, {"q", q}});
  for (double p : opts.paley_exponents) emit("paley", {{"p", p}});

  std::vector<std::vector<double>> triples = opts.embedding_triples;
  for (double p : opts.hormander_p)
    for (double q : opts.hormander_q) triples.push_back({conjugate_exponent(p), p, q});
  for (const auto& t : triples) {
    const Params params{{"p", t[0]}, {"q", t[1]}, {"r", t[2]}};
    if (cal.find("embedding", params)) continue;
    const double cap = embedding_cap_search(t[0], t[1], t[2]);
    cal.add({"embedding", params, cap, Json{{"source", "step-function search"}, {"ratio", cap}}});
  }
  return cal;
}

}  // namespace ncf
