#include "ncfourier/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ncfourier/errors.hpp"
#include "ncfourier/text_format.hpp"

namespace ncf {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

IniFile IniFile::parse(std::istream& in) {
  IniFile ini;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto c = raw.find_first_of("#;"); c != std::string::npos) raw.erase(c);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("line " + std::to_string(line) + ": unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      ini.sections_[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(line) + ": empty key");
    auto& sec = ini.sections_[section];
    if (sec.count(key)) throw ParseError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    sec[key] = {trim(text.substr(eq + 1)), line};
  }
  return ini;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key);
}

const IniFile::Entry& IniFile::get(const std::string& section, const std::string& key) const {
  return sections_.at(section).at(key);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    const std::string item = trim(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

int Config::trials_for(const std::string& suite) const {
  const auto it = suite_trials.find(suite);
  return it == suite_trials.end() ? trials : it->second;
}

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"axioms",    "submultiplicativity", "lorentz", "hausdorff-young",
                                              "hormander", "chain",               "paley",   "equivariance"};
  return names;
}

std::vector<std::string> expand_group_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    if (item == "builtin") {
      for (auto& s : builtin_group_specs()) out.push_back(s);
    } else if (item == "extended") {
      for (auto& s : extended_group_specs()) out.push_back(s);
    } else {
      out.push_back(item);
    }
  }
  return out;
}

namespace {

struct Reader {
  const IniFile& ini;
  std::string section;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ParseError("config line " + std::to_string(ini.get(section, key).line) + " ([" + section + "] " + key +
                     "): " + msg);
  }
  const std::string& raw(const std::string& key) const { return ini.get(section, key).value; }

  double real(const std::string& key, const std::string& text) const {
    try {
      return parse_real(text);
    } catch (const ParseError&) {
      fail(key, "bad number '" + text + "'");
    }
  }
  double real(const std::string& key) const { return real(key, raw(key)); }

  long long integer(const std::string& key, long long lo) const {
    const std::string& text = raw(key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, "bad integer '" + text + "'");
    if (v < lo) fail(key, "must be >= " + std::to_string(lo));
    return v;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) out.push_back(real(key, item));
    if (out.empty()) fail(key, "empty list");
    return out;
  }

  std::vector<std::vector<double>> tuples(const std::string& key, std::size_t arity) const {
    std::vector<std::vector<double>> out;
    for (const auto& item : split_list(raw(key))) {
      std::vector<double> t;
      for (const auto& part : split_list(item, ':')) t.push_back(real(key, part));
      if (t.size() != arity) fail(key, "expected " + std::to_string(arity) + " ':'-separated numbers in '" + item + "'");
      out.push_back(std::move(t));
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }
};

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

Config parse_config(std::istream& in, const std::string& base_dir) {
  const IniFile ini = IniFile::parse(in);
  Config cfg;
  const std::map<std::string, std::set<std::string>> known{
      {"run", {"seed", "trials", "workers", "suites", "groups", "directions"}},
      {"trials", {}},
      {"exponents", {"lp", "weak", "holder", "embedding", "hy", "hormander_p", "hormander_q", "paley"}},
      {"equivariance", {"symbols"}},
      {"ascent", {"restarts", "max_iters", "tol", "basis_starts"}},
      {"caps", {}},
      {"paths", {"calibration", "report"}},
      {"spectrum", {"lp", "lorentz"}},
  };
  for (const auto& [name, keys] : ini.sections()) {
    const auto k = known.find(name);
    if (k == known.end()) {
      const int line = keys.empty() ? 0 : keys.begin()->second.line;
      throw ParseError("config: unknown section [" + name + "]" + (line ? " near line " + std::to_string(line) : ""));
    }
    if (name == "trials" || name == "caps") continue;
    for (const auto& [key, entry] : keys)
      if (!k->second.count(key))
        throw ParseError("config line " + std::to_string(entry.line) + ": unknown key '" + key + "' in [" + name + "]");
  }

  Reader run{ini, "run"};
  if (ini.has("run", "seed")) cfg.seed = static_cast<std::uint64_t>(run.integer("seed", 0));
  if (ini.has("run", "trials")) cfg.trials = static_cast<int>(run.integer("trials", 1));
  if (ini.has("run", "workers")) cfg.workers = static_cast<int>(run.integer("workers", 1));
  if (ini.has("run", "suites")) {
    cfg.suites = split_list(run.raw("suites"));
    for (const auto& s : cfg.suites)
      if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
        run.fail("suites", "unknown suite '" + s + "'");
  } else {
    cfg.suites = all_suites();
  }
  cfg.groups = expand_group_list(ini.has("run", "groups") ? split_list(run.raw("groups")) : std::vector<std::string>{"builtin"});
  if (cfg.groups.empty()) run.fail("groups", "empty list");
  if (ini.has("run", "directions")) {
    cfg.directions.clear();
    for (const auto& d : split_list(run.raw("directions"))) {
      try {
        cfg.directions.push_back(parse_direction(d));
      } catch (const ContractViolation& e) {
        run.fail("directions", e.what());
      }
    }
    if (cfg.directions.empty()) run.fail("directions", "empty list");
  }

  if (ini.sections().count("trials")) {
    Reader tr{ini, "trials"};
    for (const auto& [key, entry] : ini.sections().at("trials")) {
      if (std::find(all_suites().begin(), all_suites().end(), key) == all_suites().end())
        tr.fail(key, "unknown suite");
      cfg.suite_trials[key] = static_cast<int>(tr.integer(key, 1));
    }
  }

  Reader ex{ini, "exponents"};
  auto triples = [&](const std::string& key, std::vector<std::array<double, 3>>& dst) {
    if (!ini.has("exponents", key)) return;
    dst.clear();
    for (const auto& t : ex.tuples(key, 3)) dst.push_back({t[0], t[1], t[2]});
  };
  if (ini.has("exponents", "lp")) cfg.lp_exponents = ex.reals("lp");
  if (ini.has("exponents", "weak")) cfg.weak_exponents = ex.reals("weak");
  triples("holder", cfg.holder_triples);
  triples("embedding", cfg.embedding_triples);
  if (ini.has("exponents", "hy")) cfg.hy_exponents = ex.reals("hy");
  if (ini.has("exponents", "hormander_p")) cfg.hormander_p = ex.reals("hormander_p");
  if (ini.has("exponents", "hormander_q")) cfg.hormander_q = ex.reals("hormander_q");
  if (ini.has("exponents", "paley")) cfg.paley_exponents = ex.reals("paley");
  for (double p : cfg.hy_exponents)
    if (!(p > 1 && p <= 2)) ex.fail("hy", "exponents must lie in (1, 2]");
  for (double p : cfg.paley_exponents)
    if (!(p > 1 && p <= 2)) ex.fail("paley", "exponents must lie in (1, 2]");
  for (double p : cfg.hormander_p)
    if (!(p > 1 && p <= 2)) ex.fail("hormander_p", "exponents must lie in (1, 2]");
  for (double q : cfg.hormander_q)
    if (!(q >= 2 && std::isfinite(q))) ex.fail("hormander_q", "exponents must lie in [2, inf)");

  if (ini.has("equivariance", "symbols"))
    cfg.equivariance_symbols = static_cast<int>(Reader{ini, "equivariance"}.integer("symbols", 1));

  Reader asc{ini, "ascent"};
  if (ini.has("ascent", "restarts")) cfg.ascent.restarts = static_cast<int>(asc.integer("restarts", 0));
  if (ini.has("ascent", "max_iters")) cfg.ascent.max_iters = static_cast<int>(asc.integer("max_iters", 1));
  if (ini.has("ascent", "tol")) {
    cfg.ascent.tol = asc.real("tol");
    if (!(cfg.ascent.tol > 0)) asc.fail("tol", "must be > 0");
  }
  if (ini.has("ascent", "basis_starts")) {
    const std::string& v = asc.raw("basis_starts");
    if (v != "true" && v != "false") asc.fail("basis_starts", "expected true or false");
    cfg.ascent.basis_starts = v == "true";
  }

  if (ini.sections().count("caps")) {
    Reader caps{ini, "caps"};
    for (const auto& [key, entry] : ini.sections().at("caps")) cfg.cap_overrides[key] = caps.real(key);
  }

  if (ini.has("paths", "calibration")) cfg.calibration_path = resolve(base_dir, ini.get("paths", "calibration").value);
  if (ini.has("paths", "report")) cfg.report_path = resolve(base_dir, ini.get("paths", "report").value);

  Reader sp{ini, "spectrum"};
  if (ini.has("spectrum", "lp")) cfg.spectrum_lp = sp.reals("lp");
  if (ini.has("spectrum", "lorentz")) {
    cfg.spectrum_lorentz.clear();
    for (const auto& t : sp.tuples("lorentz", 2)) cfg.spectrum_lorentz.emplace_back(t[0], t[1]);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(in, dir.empty() ? "." : dir.string());
}

}  // namespace ncf
