#include "ncfourier/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ncfourier/ascent.hpp"
#include "ncfourier/calibration.hpp"
#include "ncfourier/config.hpp"
#include "ncfourier/errors.hpp"
#include "ncfourier/seed.hpp"
#include "ncfourier/text_format.hpp"
#include "ncfourier/verify.hpp"

namespace ncf {

namespace {

/// Usage error detected after CLI11 parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw UsageError("bad seed '" + text + "'");
  return v;
}

/// "random:<seed>", "identity" or an operator file bound to `alg`.
Operator operator_from_spec(const std::string& spec, const AlgebraPtr& alg, bool symbol) {
  if (spec.rfind("random:", 0) == 0) {
    if (!alg) throw UsageError("'" + spec + "' needs --group");
    const std::uint64_t seed = parse_seed(spec.substr(7));
    return symbol ? random_symbol(alg, seed) : random_operator(alg, seed, Ensemble::GeneralComplex);
  }
  if (spec == "identity") {
    if (!alg) throw UsageError("'identity' needs --group");
    return Operator::identity(alg);
  }
  return bind_operator(read_operator_spec(spec), alg);
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

struct RunFlags {
  std::string config;
  std::optional<std::string> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::string out;
  std::string calibration;
  bool timing = false;
};

int cmd_run(const RunFlags& f, RunMode mode, std::ostream& out, std::ostream& err) {
  Config cfg = load_config(f.config);
  if (f.seed) cfg.seed = parse_seed(*f.seed);
  if (f.trials) {
    if (*f.trials < 1) throw UsageError("--trials must be positive");
    cfg.trials = *f.trials;
    cfg.suite_trials.clear();
  }
  if (f.workers) {
    if (*f.workers < 1) throw UsageError("--workers must be positive");
    cfg.workers = *f.workers;
  }
  if (!f.calibration.empty()) cfg.calibration_path = f.calibration;
  const std::string cal_path = cfg.calibration_path.empty() ? default_calibration_path() : cfg.calibration_path;

  Calibration cal;
  if (mode == RunMode::Verify || std::filesystem::exists(cal_path)) cal = Calibration::load(cal_path);

  auto plan = plan_checks(cfg, cal, mode);
  const auto records = run_plan(plan, cfg.workers);
  const char* command = mode == RunMode::Verify ? "verify" : "certify";
  const Json report = report_json(command, cfg, cal, records, f.timing);
  const std::string out_path = f.out.empty() ? cfg.report_path : f.out;
  write_text(out_path, report.dump(2) + "\n", out);

  const int v = total_violations(records);
  const auto& s = report["summary"];
  if (!out_path.empty())
    out << command << ": " << s["checks"].get<int>() << " checks, " << s["failed_checks"].get<int>() << " failed, "
        << v << " violations -> " << out_path << "\n";
  if (v > 0) {
    for (const auto& r : records)
      if (r.violations > 0)
        err << "violation: " << r.check_name << " " << r.group << "/" << r.direction << " "
            << cap_entry_id(r.check_name, r.params) << " max_ratio=" << format_real(r.max_ratio)
            << " cap=" << format_real(r.cap) << " worst_seed=" << r.worst_seed << "\n";
  }
  return v > 0 ? 1 : 0;
}

struct NormFlags {
  std::string group;
  std::string direction = "function";
  std::string sigma;
  std::string p, q;
  int restarts = 32;
  int max_iters = 2000;
  double tol = 1e-8;
  std::string seed = "0";
  std::string out;
};

int cmd_norm(const NormFlags& f, std::ostream& out) {
  const FourierStructure fs(make_group(f.group), parse_direction(f.direction));
  const double p = parse_real(f.p);
  const double q = parse_real(f.q);
  if (!(p >= 1 && q >= 1)) throw UsageError("need p, q >= 1");
  const MultiplierSymbol sigma(fs, operator_from_spec(f.sigma, fs.M_hat(), true));

  AscentOptions opts;
  opts.restarts = f.restarts;
  opts.max_iters = f.max_iters;
  opts.tol = f.tol;
  opts.seed = parse_seed(f.seed);
  const NormEstimate est = estimate_opnorm(fs, sigma, p, q, opts);

  Json j;
  j["structure"] = fs.name();
  j["p"] = json_number(p);
  j["q"] = json_number(q);
  j["estimate"] = est.lower_bound;
  j["iterations"] = est.iterations;
  j["restarts_used"] = est.restarts_used;
  j["converged"] = est.converged;
  if (p <= q) {
    // 1/r = 1/p - 1/q
    const double inv_r = 1 / p - (std::isinf(q) ? 0.0 : 1 / q);
    const double r = inv_r == 0 ? kInf : 1 / inv_r;
    const double bound = lorentz_norm(sigma.symbol(), r, kInf);
    j["r"] = json_number(r);
    j["bound"] = bound;
    j["ratio"] = bound > 0 ? Json(est.lower_bound / bound) : Json(nullptr);
  } else {
    j["r"] = nullptr;
    j["bound"] = nullptr;
    j["ratio"] = nullptr;
  }
  const auto oracle = exact_opnorm_endpoint(fs, sigma, p, q);
  j["oracle"] = oracle ? Json(*oracle) : Json(nullptr);
  Json w = Json::array();
  const Eigen::VectorXcd flat = est.witness.flatten();
  for (Eigen::Index i = 0; i < flat.size(); ++i) w.push_back(format_complex(flat(i)));
  j["witness"] = w;
  write_text(f.out, j.dump(2) + "\n", out);
  return 0;
}

struct SpectrumFlags {
  std::string group;
  std::string direction = "function";
  std::string side = "M";
  std::string op;
  std::string config;
  std::string out;
  std::string summary;
};

int cmd_spectrum(const SpectrumFlags& f, std::ostream& out) {
  AlgebraPtr alg;
  if (!f.group.empty()) {
    const FourierStructure fs(make_group(f.group), parse_direction(f.direction));
    if (f.side == "M")
      alg = fs.M();
    else if (f.side == "dual")
      alg = fs.M_hat();
    else
      throw UsageError("--side must be M or dual");
  }
  const Operator x = operator_from_spec(f.op, alg, false);
  const Config cfg = f.config.empty() ? Config{} : load_config(f.config);
  const StepFunction mu = singular_function(x);

  std::string csv = "t_left,t_right,value\n";
  double left = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    csv += format_real(left) + "," + format_real(mu.breakpoints()[i]) + "," + format_real(mu.values()[i]) + "\n";
    left = mu.breakpoints()[i];
  }
  write_text(f.out, csv, out);

  if (!f.summary.empty()) {
    Json j;
    j["algebra"] = x.algebra().name();
    j["trace_mass"] = x.algebra().total_mass();
    Json lp = Json::array();
    for (double p : cfg.spectrum_lp) lp.push_back(Json{{"p", json_number(p)}, {"value", lp_norm(x, p)}});
    j["lp"] = lp;
    Json lor = Json::array();
    for (const auto& [p, q] : cfg.spectrum_lorentz)
      lor.push_back(Json{{"p", json_number(p)}, {"q", json_number(q)}, {"value", lorentz_norm(x, p, q)}});
    j["lorentz"] = lor;
    Json weak = Json::array();
    for (double r : cfg.weak_exponents) weak.push_back(Json{{"r", json_number(r)}, {"value", lorentz_norm(x, r, kInf)}});
    j["weak"] = weak;
    write_text(f.summary, j.dump(2) + "\n", out);
  }
  return 0;
}

struct CalibrateFlags {
  std::string out;
  std::string seed = "7";
  int trials = 1000;
  int workers = 1;
  std::string groups = "builtin";
  int restarts = 6;
  int max_iters = 1000;
  int alternations = 5;
  bool progress = false;
};

int cmd_calibrate(const CalibrateFlags& f, std::ostream& out, std::ostream& err) {
  CalibrationOptions opts;
  opts.seed = parse_seed(f.seed);
  opts.random_draws = f.trials;
  opts.workers = f.workers;
  opts.ascent_restarts = f.restarts;
  opts.ascent_max_iters = f.max_iters;
  opts.alternations = f.alternations;
  opts.groups = expand_group_list(split_list(f.groups));
  if (opts.random_draws < 1 || opts.workers < 1 || opts.ascent_restarts < 0 || opts.ascent_max_iters < 1 ||
      opts.alternations < 0)
    throw UsageError("calibrate: counts must be positive");
  Calibration cal = generate_calibration(opts, f.progress ? &err : nullptr);
  write_text(f.out, cal.to_text(), out);
  if (!f.out.empty()) out << "calibrate: " << cal.entries().size() << " caps -> " << f.out << "\n";
  return 0;
}

void add_run_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("--config", f.config, "Config file")->required();
  sub->add_option("--seed", f.seed, "Override [run] seed");
  sub->add_option("--trials", f.trials, "Override every trial count");
  sub->add_option("--workers", f.workers, "Worker threads");
  sub->add_option("--out", f.out, "Report path (default: [paths] report, else stdout)");
  sub->add_option("--calibration", f.calibration, "Calibration file");
  sub->add_flag("--timing", f.timing, "Include elapsed seconds per check");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ncflab: numerical lab for Fourier multipliers on finite noncommutative spaces", "ncflab"};
  app.require_subcommand(1);

  RunFlags verify_flags, certify_flags;
  auto* verify = app.add_subcommand("verify", "Run the configured verification suites");
  add_run_flags(verify, verify_flags);
  auto* certify = app.add_subcommand("certify", "Run only the checks with exact constants");
  add_run_flags(certify, certify_flags);

  NormFlags nf;
  auto* norm = app.add_subcommand("norm", "Lower bound on the L^p -> L^q norm of a multiplier");
  norm->add_option("--group", nf.group, "Group spec, e.g. cyclic:6, dihedral:4, file:PATH")->required();
  norm->add_option("--direction", nf.direction, "function or block");
  norm->add_option("--sigma", nf.sigma, "Symbol: operator file, random:<seed> or identity")->required();
  norm->add_option("--p", nf.p, "Source exponent (inf allowed)")->required();
  norm->add_option("--q", nf.q, "Target exponent (inf allowed)")->required();
  norm->add_option("--restarts", nf.restarts, "Random restarts");
  norm->add_option("--max-iters", nf.max_iters, "Iterations per restart");
  norm->add_option("--tol", nf.tol, "Relative stall tolerance");
  norm->add_option("--seed", nf.seed, "Ascent seed");
  norm->add_option("--out", nf.out, "JSON output path (default stdout)");

  SpectrumFlags sf;
  auto* spectrum = app.add_subcommand("spectrum", "Dump the singular value function of an operator");
  spectrum->add_option("--group", sf.group, "Group spec; omit for a standalone operator file");
  spectrum->add_option("--direction", sf.direction, "function or block");
  spectrum->add_option("--side", sf.side, "M or dual");
  spectrum->add_option("--operator", sf.op, "Operator file, random:<seed> or identity")->required();
  spectrum->add_option("--config", sf.config, "Config supplying [spectrum] and weak exponents");
  spectrum->add_option("--out", sf.out, "CSV output path (default stdout)");
  spectrum->add_option("--summary", sf.summary, "JSON summary path");

  CalibrateFlags cf;
  auto* calibrate = app.add_subcommand("calibrate", "Regenerate the calibration file");
  calibrate->add_option("--out", cf.out, "Output path (default stdout)");
  calibrate->add_option("--seed", cf.seed, "Sweep seed");
  calibrate->add_option("--trials", cf.trials, "Random draws per structure and exponents");
  calibrate->add_option("--workers", cf.workers, "Worker threads");
  calibrate->add_option("--groups", cf.groups, "Comma-separated group specs or builtin/extended");
  calibrate->add_option("--restarts", cf.restarts, "Ascent restarts per start set");
  calibrate->add_option("--max-iters", cf.max_iters, "Ascent iterations per restart");
  calibrate->add_option("--alternations", cf.alternations, "Hormander sigma/x alternation rounds");
  calibrate->add_flag("--progress", cf.progress, "Log progress to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help requests exit 0; every other parse failure is a usage error
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_run(verify_flags, RunMode::Verify, out, err);
    if (*certify) return cmd_run(certify_flags, RunMode::Certify, out, err);
    if (*norm) return cmd_norm(nf, out);
    if (*spectrum) return cmd_spectrum(sf, out);
    if (*calibrate) return cmd_calibrate(cf, out, err);
  } catch (const std::exception& e) {
    err << "ncflab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ncf
