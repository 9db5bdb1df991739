#pragma once

#include <complex>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ncfourier/trace_algebra.hpp"

namespace ncf {

/// Parses "a+bi" style literals: "1.5", "-2i", "i", "-i", "0.5-0.25i",
/// "1e-3+2e-3i". Throws ParseError.
Complex parse_complex(std::string_view text);

/// Shortest round-trip form, "a+bi" / "a-bi" / "a".
std::string format_complex(Complex z);

/// Shortest round-trip decimal; "inf" for infinity.
std::string format_real(double v);

/// Accepts decimals and "inf" / "infinity".
double parse_real(std::string_view text);

/// Line reader that strips '#' comments and blank lines, splitting on
/// whitespace. Tracks line numbers for error messages.
class TokenLines {
 public:
  explicit TokenLines(std::istream& in) : in_(in) {}
  /// Next nonempty line's tokens; false at end of input.
  bool next(std::vector<std::string>& tokens);
  int line() const { return line_; }
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::istream& in_;
  int line_ = 0;
};

/// Operator file:
///   block <dim> [weight <w>]
///   <dim rows of dim complex literals>
///   ... one section per block
/// Weights, when present on every block, define a standalone algebra.
struct OperatorSpec {
  std::vector<Eigen::MatrixXcd> blocks;
  /// Empty unless every block carried a weight.
  std::vector<double> weights;
};

OperatorSpec parse_operator_spec(std::istream& in);
OperatorSpec read_operator_spec(const std::string& path);

/// Binds a parsed spec to `algebra` (throws StructuralError on shape or
/// weight mismatch). With a null algebra the spec defines its own, with unit
/// weights when the file carries none.
Operator bind_operator(const OperatorSpec& spec, AlgebraPtr algebra);

void write_operator_spec(std::ostream& out, const Operator& x);

}  // namespace ncf
