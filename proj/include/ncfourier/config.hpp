#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncfourier/ascent.hpp"
#include "ncfourier/fourier_structure.hpp"

namespace ncf {

/// Minimal INI reader: "[section]" headers, "key = value" lines, '#' or ';'
/// comments. Keys before the first header land in section "".
class IniFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static IniFile parse(std::istream& in);

  bool has(const std::string& section, const std::string& key) const;
  const Entry& get(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');

/// Everything a verify / certify / spectrum run needs.
struct Config {
  std::uint64_t seed = 42;
  int trials = 1000;
  int workers = 1;
  std::vector<std::string> suites;
  std::vector<std::string> groups;
  std::vector<Direction> directions{Direction::FunctionSide, Direction::BlockSide};
  /// Per-suite trial counts overriding `trials`.
  std::map<std::string, int> suite_trials;

  std::vector<double> lp_exponents{1.25, 1.5, 2, 3};
  std::vector<double> weak_exponents{1.5, 2, 4};
  /// (p0, p1, q) for ||xy||_{p,q} <= 2^{1/p} ||x||_{p0,inf} ||y||_{p1,q}.
  std::vector<std::array<double, 3>> holder_triples{{{2, 2, 1}}, {{3, 6, 2}}, {{1.5, 3, 4}}};
  /// (p, q, r) for ||x||_{p,r} <= C ||x||_{p,q}.
  std::vector<std::array<double, 3>> embedding_triples{{{2, 1, kInf}}};
  std::vector<double> hy_exponents{1.2, 1.5, 1.8, 2};
  std::vector<double> hormander_p{1.25, 1.5, 2};
  std::vector<double> hormander_q{2, 3, 4};
  std::vector<double> paley_exponents{1.25, 1.5, 2};
  int equivariance_symbols = 10;
  /// Ascent used for the worst-witness check of the multiplier theorem.
  AscentOptions ascent{4, 500, 1e-8, 0, true};

  /// Check name -> cap replacing every calibrated cap of that check.
  std::map<std::string, double> cap_overrides;
  /// Empty: the calibration file shipped with the build.
  std::string calibration_path;
  /// Empty: stdout.
  std::string report_path;

  std::vector<double> spectrum_lp{1, 2, kInf};
  std::vector<std::pair<double, double>> spectrum_lorentz{{2, 1}, {2, kInf}};

  int trials_for(const std::string& suite) const;
};

/// Names accepted in [run] suites.
const std::vector<std::string>& all_suites();

/// Group list entries may be specs or the keywords "builtin" / "extended".
std::vector<std::string> expand_group_list(const std::vector<std::string>& items);

/// Throws ParseError (with line numbers) on unknown sections, keys or bad values.
/// Relative paths resolve against base_dir.
Config parse_config(std::istream& in, const std::string& base_dir = ".");
Config load_config(const std::string& path);

}  // namespace ncf
