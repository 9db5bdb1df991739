#include "ncfourier/text_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ncfourier/errors.hpp"

namespace ncf {

namespace {

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string_view original = text;
  auto bad = [&]() -> ParseError { return ParseError("bad complex literal '" + std::string(original) + "'"); };
  if (text.empty()) throw bad();
  if (text.back() != 'i') {
    double re = 0;
    if (!parse_double(text, re)) throw bad();
    return {re, 0};
  }
  text.remove_suffix(1);
  // split before the sign of the imaginary part, skipping exponent signs
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0;
  std::string_view im_text = text;
  if (split != std::string_view::npos) {
    if (!parse_double(text.substr(0, split), re)) throw bad();
    im_text = text.substr(split);
  }
  double im = 0;
  if (im_text.empty() || im_text == "+")
    im = 1;
  else if (im_text == "-")
    im = -1;
  else if (!parse_double(im_text, im))
    throw bad();
  return {re, im};
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0;
  if (!parse_double(text, v)) throw ParseError("bad number '" + std::string(text) + "'");
  return v;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0) return format_real(z.real());
  std::string im = format_real(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_real(z.real()) + im + "i";
}

bool TokenLines::next(std::vector<std::string>& tokens) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    tokens.clear();
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (!tokens.empty()) return true;
  }
  return false;
}

void TokenLines::fail(const std::string& message) const {
  throw ParseError("line " + std::to_string(line_) + ": " + message);
}

OperatorSpec parse_operator_spec(std::istream& in) {
  TokenLines lines(in);
  OperatorSpec spec;
  std::vector<std::string> tok;
  bool all_weighted = true;
  while (lines.next(tok)) {
    if (tok[0] != "block") lines.fail("expected 'block <dim> [weight <w>]'");
    if (tok.size() != 2 && tok.size() != 4) lines.fail("expected 'block <dim> [weight <w>]'");
    long dim = 0;
    try {
      dim = std::stol(tok[1]);
    } catch (const std::exception&) {
      lines.fail("bad block dimension '" + tok[1] + "'");
    }
    if (dim < 1) lines.fail("block dimension must be >= 1");
    if (tok.size() == 4) {
      if (tok[2] != "weight") lines.fail("expected 'weight'");
      spec.weights.push_back(parse_real(tok[3]));
    } else {
      all_weighted = false;
    }
    Eigen::MatrixXcd m(dim, dim);
    for (long i = 0; i < dim; ++i) {
      if (!lines.next(tok)) lines.fail("unexpected end of input inside block");
      if (static_cast<long>(tok.size()) != dim) lines.fail("expected " + std::to_string(dim) + " entries");
      for (long j = 0; j < dim; ++j) {
        try {
          m(i, j) = parse_complex(tok[static_cast<std::size_t>(j)]);
        } catch (const ParseError& e) {
          lines.fail(e.what());
        }
      }
    }
    spec.blocks.push_back(std::move(m));
  }
  if (spec.blocks.empty()) throw ParseError("operator file has no blocks");
  if (!all_weighted) spec.weights.clear();
  return spec;
}

OperatorSpec read_operator_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open operator file '" + path + "'");
  return parse_operator_spec(in);
}

Operator bind_operator(const OperatorSpec& spec, AlgebraPtr algebra) {
  if (!algebra) {
    std::vector<Block> blocks;
    for (std::size_t k = 0; k < spec.blocks.size(); ++k)
      blocks.push_back({spec.blocks[k].rows(), spec.weights.empty() ? 1.0 : spec.weights[k]});
    algebra = make_algebra(std::move(blocks), "file");
  } else if (!spec.weights.empty()) {
    for (std::size_t k = 0; k < spec.weights.size() && k < algebra->block_count(); ++k)
      if (spec.weights[k] != algebra->block(k).weight)
        throw StructuralError("operator file weight of block " + std::to_string(k) + " does not match the algebra");
  }
  return Operator(std::move(algebra), spec.blocks);
}

void write_operator_spec(std::ostream& out, const Operator& x) {
  for (std::size_t k = 0; k < x.block_count(); ++k) {
    const auto& b = x.block(k);
    out << "block " << b.rows() << " weight " << format_real(x.algebra().block(k).weight) << '\n';
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) out << (j ? " " : "") << format_complex(b(i, j));
      out << '\n';
    }
  }
}

}  // namespace ncf
