#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ncf {

using Json = nlohmann::ordered_json;

/// Named exponent list, e.g. {{"p", 1.5}, {"q", 3}}.
using Params = std::vector<std::pair<std::string, double>>;

/// JSON number, or the string "inf".
Json json_number(double v);
double number_from_json(const Json& j);

/// One empirical constant: the largest ratio seen for `check` at `params`
/// over the calibration sweep, with the input that attained it.
struct CapEntry {
  std::string check;
  Params params;
  double cap = 0;
  Json witness;
};

/// "check(p=1.5,q=3)"; the provenance tag carried by reports.
std::string cap_entry_id(const std::string& check, const Params& params);

class Calibration {
 public:
  static Calibration load(const std::string& path);
  static Calibration parse(const std::string& text);

  /// Entry whose params match to 1e-12 relative, or nullptr.
  const CapEntry* find(const std::string& check, const Params& params) const;

  const std::vector<CapEntry>& entries() const { return entries_; }
  void add(CapEntry e) { entries_.push_back(std::move(e)); }
  Json& meta() { return meta_; }
  const Json& meta() const { return meta_; }
  /// FNV-1a of the file text the calibration was loaded from.
  const std::string& id() const { return id_; }

  std::string to_text() const;

 private:
  std::vector<CapEntry> entries_;
  Json meta_ = Json::object();
  std::string id_ = "unsaved";
};

/// Calibration file shipped with the build.
std::string default_calibration_path();

struct CalibrationOptions {
  std::uint64_t seed = 7;
  /// Random draws per (structure, check, exponents).
  int random_draws = 1000;
  /// Ascent restarts per start set (basis starts come on top).
  int ascent_restarts = 6;
  int ascent_max_iters = 1000;
  /// Hormander: rounds of re-optimizing sigma for the current witness x.
  int alternations = 5;
  /// Group specs; both directions of each are swept.
  std::vector<std::string> groups;
  std::vector<double> hy_exponents{1.2, 1.25, 4.0 / 3.0, 1.5, 1.8, 2};
  std::vector<double> hormander_p{1.25, 1.5, 2};
  std::vector<double> hormander_q{2, 3, 4};
  std::vector<double> paley_exponents{1.25, 1.5, 2};
  /// Extra (p, q, r) embedding triples beyond those the chain needs.
  std::vector<std::vector<double>> embedding_triples{{2, 1, std::numeric_limits<double>::infinity()}};
  int workers = 1;
};

/// Caps from three sources per (check, exponents), maximized over every
/// structure of `groups` in both directions:
///   - an exhaustive grid on structures of order <= 3: every entry ranges over
///     {0} u {0.5, 1} x {1, -1, i, -i} (up to a global phase);
///   - random draws (random_symbol for symbols, general complex for x);
///   - multi-start ascent on x for the strongest random symbols and for
///     structured symbols (identity, block projections, nested block sums,
///     rank-one projections). For the Hormander ratio each ascent is followed
///     by rounds that re-optimize sigma for the current x, then x again.
/// Embedding caps are exact: embedding_cap_search.
Calibration generate_calibration(const CalibrationOptions& opts, std::ostream* log = nullptr);

}  // namespace ncf
