#include "ncfourier/group.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "ncfourier/errors.hpp"
#include "ncfourier/text_format.hpp"

namespace ncf {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd scalar(Complex z) { return Eigen::MatrixXcd::Constant(1, 1, z); }

Complex unit_root(double k, double n) { return std::polar(1.0, 2 * std::numbers::pi * k / n); }

[[noreturn]] void invalid(const GroupTable& t, const std::string& what) {
  throw ContractViolation("group '" + t.name + "': " + what);
}

}  // namespace

GroupData GroupData::validate(GroupTable t) {
  const std::size_t n = t.order;
  if (n < 1) invalid(t, "order must be >= 1");
  if (t.mult.size() != n * n) invalid(t, "multiplication table must be order x order");
  for (std::size_t v : t.mult)
    if (v >= n) invalid(t, "table entry out of range");
  auto mul = [&](std::size_t g, std::size_t h) { return t.mult[g * n + h]; };

  for (std::size_t g = 0; g < n; ++g)
    if (mul(0, g) != g || mul(g, 0) != g) invalid(t, "element 0 is not the identity");

  std::vector<std::size_t> inverse(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h)
      if (mul(g, h) == 0 && mul(h, g) == 0) {
        inverse[g] = h;
        break;
      }
    if (inverse[g] == n) invalid(t, "element " + std::to_string(g) + " has no inverse");
  }

  auto associative = [&](std::size_t a, std::size_t b, std::size_t c) { return mul(mul(a, b), c) == mul(a, mul(b, c)); };
  if (n <= 48) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (!associative(a, b, c)) invalid(t, "table is not associative");
  } else {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int i = 0; i < 20000; ++i)
      if (!associative(pick(rng), pick(rng), pick(rng))) invalid(t, "table is not associative");
  }

  std::size_t dim_sq = 0;
  for (std::size_t a = 0; a < t.irreps.size(); ++a) {
    const Irrep& rep = t.irreps[a];
    const std::string tag = "irrep " + std::to_string(a);
    if (rep.dim < 1) invalid(t, tag + ": dimension must be >= 1");
    if (rep.matrices.size() != n) invalid(t, tag + ": needs one matrix per element");
    for (const auto& m : rep.matrices)
      if (m.rows() != rep.dim || m.cols() != rep.dim || !m.allFinite()) invalid(t, tag + ": bad matrix shape");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    for (std::size_t g = 0; g < n; ++g) {
      if ((rep.matrices[g].adjoint() * rep.matrices[g] - id).cwiseAbs().maxCoeff() > 1e-10)
        invalid(t, tag + ": not unitary at element " + std::to_string(g));
      for (std::size_t h = 0; h < n; ++h)
        if ((rep.matrices[g] * rep.matrices[h] - rep.matrices[mul(g, h)]).cwiseAbs().maxCoeff() > 1e-10)
          invalid(t, tag + ": not a homomorphism at (" + std::to_string(g) + ", " + std::to_string(h) + ")");
    }
    dim_sq += static_cast<std::size_t>(rep.dim * rep.dim);
  }
  if (dim_sq != n) invalid(t, "sum of squared irrep dimensions is " + std::to_string(dim_sq) + ", not the order");

  // Columns sqrt(d/|G|) pi_ij(.) are orthonormal iff the Schur relations hold.
  Eigen::MatrixXcd coeffs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Index col = 0;
  for (const Irrep& rep : t.irreps) {
    const double s = std::sqrt(static_cast<double>(rep.dim) / static_cast<double>(n));
    for (Eigen::Index i = 0; i < rep.dim; ++i)
      for (Eigen::Index j = 0; j < rep.dim; ++j, ++col)
        for (std::size_t g = 0; g < n; ++g) coeffs(static_cast<Eigen::Index>(g), col) = s * rep.matrices[g](i, j);
  }
  const Eigen::MatrixXcd gram = coeffs.adjoint() * coeffs;
  if ((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-9)
    invalid(t, "irreps violate Schur orthogonality");

  GroupData out;
  out.abelian_ = true;
  for (std::size_t g = 0; g < n && out.abelian_; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (mul(g, h) != mul(h, g)) {
        out.abelian_ = false;
        break;
      }
  out.name_ = std::move(t.name);
  out.order_ = n;
  out.mult_ = std::move(t.mult);
  out.inverse_ = std::move(inverse);
  out.irreps_ = std::move(t.irreps);
  return out;
}

std::vector<Eigen::Index> GroupData::irrep_dims() const {
  std::vector<Eigen::Index> dims;
  for (const Irrep& r : irreps_) dims.push_back(r.dim);
  return dims;
}

GroupTable cyclic_table(std::size_t n) { return product_table({n}); }

GroupTable product_table(const std::vector<std::size_t>& factors) {
  if (factors.empty()) throw ContractViolation("product_table: need at least one factor");
  std::size_t n = 1;
  for (std::size_t f : factors) {
    if (f < 1) throw ContractViolation("product_table: factors must be >= 1");
    n *= f;
  }
  auto digits = [&](std::size_t g) {
    std::vector<std::size_t> d;
    for (std::size_t f : factors) {
      d.push_back(g % f);
      g /= f;
    }
    return d;
  };

  GroupTable t;
  if (factors.size() == 1) {
    t.name = "cyclic:" + std::to_string(n);
  } else {
    t.name = "product:";
    for (std::size_t i = 0; i < factors.size(); ++i) t.name += (i ? "x" : "") + std::to_string(factors[i]);
  }
  t.order = n;
  t.mult.resize(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    const auto dg = digits(g);
    for (std::size_t h = 0; h < n; ++h) {
      const auto dh = digits(h);
      std::size_t idx = 0;
      std::size_t stride = 1;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        idx += ((dg[i] + dh[i]) % factors[i]) * stride;
        stride *= factors[i];
      }
      t.mult[g * n + h] = idx;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto dk = digits(k);
    Irrep rep;
    for (std::size_t g = 0; g < n; ++g) {
      const auto dg = digits(g);
      Complex chi = 1;
      for (std::size_t i = 0; i < factors.size(); ++i)
        chi *= unit_root(static_cast<double>((dk[i] * dg[i]) % factors[i]), static_cast<double>(factors[i]));
      rep.matrices.push_back(scalar(chi));
    }
    t.irreps.push_back(std::move(rep));
  }
  return t;
}

GroupTable dihedral_table(std::size_t n) {
  if (n < 1) throw ContractViolation("dihedral_table: n must be >= 1");
  const std::size_t order = 2 * n;
  GroupTable t;
  t.name = "dihedral:" + std::to_string(n);
  t.order = order;
  t.mult.resize(order * order);
  // (a, f)(b, h) = (a + (-1)^f b, f + h)
  for (std::size_t g = 0; g < order; ++g) {
    const std::size_t a = g % n, f = g / n;
    for (std::size_t h = 0; h < order; ++h) {
      const std::size_t b = h % n, e = h / n;
      const std::size_t rot = f == 0 ? (a + b) % n : (a + n - b) % n;
      t.mult[g * order + h] = rot + n * ((f + e) % 2);
    }
  }

  auto one_dim = [&](int rot_sign, int refl_sign) {
    Irrep rep;
    for (std::size_t g = 0; g < order; ++g) {
      const std::size_t k = g % n, f = g / n;
      const double v = (k % 2 == 1 ? rot_sign : 1) * (f == 1 ? refl_sign : 1);
      rep.matrices.push_back(scalar(v));
    }
    return rep;
  };
  t.irreps.push_back(one_dim(1, 1));
  t.irreps.push_back(one_dim(1, -1));
  if (n % 2 == 0) {
    t.irreps.push_back(one_dim(-1, 1));
    t.irreps.push_back(one_dim(-1, -1));
  }
  Eigen::MatrixXcd reflection(2, 2);
  reflection << 1, 0, 0, -1;
  for (std::size_t j = 1; 2 * j < n; ++j) {
    Irrep rep;
    rep.dim = 2;
    for (std::size_t g = 0; g < order; ++g) {
      const std::size_t k = g % n, f = g / n;
      const double theta = 2 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      Eigen::MatrixXcd rot(2, 2);
      rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
      rep.matrices.push_back(f == 0 ? rot : Eigen::MatrixXcd(rot * reflection));
    }
    t.irreps.push_back(std::move(rep));
  }
  return t;
}

GroupTable symmetric3_table() {
  GroupTable t = dihedral_table(3);
  t.name = "symmetric3";
  return t;
}

GroupTable quaternion8_table() {
  const Complex i{0, 1};
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd qi(2, 2), qj(2, 2), qk(2, 2);
  qi << i, 0, 0, -i;
  qj << 0, 1, -1, 0;
  qk = qi * qj;
  const std::vector<Eigen::MatrixXcd> elems{one, -one, qi, -qi, qj, -qj, qk, -qk};

  GroupTable t;
  t.name = "quaternion8";
  t.order = 8;
  t.mult.resize(64);
  for (std::size_t g = 0; g < 8; ++g)
    for (std::size_t h = 0; h < 8; ++h) {
      const Eigen::MatrixXcd prod = elems[g] * elems[h];
      std::size_t found = 8;
      for (std::size_t k = 0; k < 8; ++k)
        if ((prod - elems[k]).cwiseAbs().maxCoeff() < 1e-12) found = k;
      t.mult[g * 8 + h] = found;
    }

  // characters of Q8 / {+-1}: i -> (-1)^a, j -> (-1)^b, k -> (-1)^(a+b)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double si = a ? -1 : 1, sj = b ? -1 : 1;
      const double vals[8] = {1, 1, si, si, sj, sj, si * sj, si * sj};
      Irrep rep;
      for (double v : vals) rep.matrices.push_back(scalar(v));
      t.irreps.push_back(std::move(rep));
    }
  Irrep defining;
  defining.dim = 2;
  defining.matrices = elems;
  t.irreps.push_back(std::move(defining));
  return t;
}

GroupTable parse_group_table(std::istream& in, std::string name) {
  TokenLines lines(in);
  GroupTable t;
  t.name = std::move(name);
  std::vector<std::string> tok;

  auto to_index = [&](const std::string& s) -> std::size_t {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(s, &pos);
      if (pos != s.size()) lines.fail("bad index '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      lines.fail("bad index '" + s + "'");
    }
  };

  if (!lines.next(tok) || tok.size() != 2 || tok[0] != "order") lines.fail("expected 'order <n>'");
  t.order = to_index(tok[1]);
  if (t.order < 1) lines.fail("order must be >= 1");
  const std::size_t n = t.order;

  if (!lines.next(tok) || tok.size() != 1 || tok[0] != "table") lines.fail("expected 'table'");
  for (std::size_t r = 0; r < n; ++r) {
    if (!lines.next(tok)) lines.fail("unexpected end of input in table");
    if (tok.size() != n) lines.fail("table row needs " + std::to_string(n) + " entries");
    for (const auto& s : tok) t.mult.push_back(to_index(s));
  }

  while (lines.next(tok)) {
    if (tok.size() != 2 || tok[0] != "irrep") lines.fail("expected 'irrep <dim>'");
    Irrep rep;
    rep.dim = static_cast<Eigen::Index>(to_index(tok[1]));
    if (rep.dim < 1) lines.fail("irrep dimension must be >= 1");
    const std::size_t entries = static_cast<std::size_t>(rep.dim * rep.dim);
    for (std::size_t g = 0; g < n; ++g) {
      if (!lines.next(tok)) lines.fail("unexpected end of input in irrep");
      if (tok.size() != entries) lines.fail("irrep row needs " + std::to_string(entries) + " entries");
      Eigen::MatrixXcd m(rep.dim, rep.dim);
      for (std::size_t e = 0; e < entries; ++e) {
        try {
          m(static_cast<Eigen::Index>(e) / rep.dim, static_cast<Eigen::Index>(e) % rep.dim) = parse_complex(tok[e]);
        } catch (const ParseError& err) {
          lines.fail(err.what());
        }
      }
      rep.matrices.push_back(std::move(m));
    }
    t.irreps.push_back(std::move(rep));
  }
  if (t.irreps.empty()) throw ParseError("group file has no irreps");
  return t;
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view spec) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
    throw ContractViolation("bad group spec '" + std::string(spec) + "'");
  return v;
}

}  // namespace

GroupPtr make_group(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  GroupTable t;
  if (kind == "cyclic" && !arg.empty()) {
    t = cyclic_table(parse_count(arg, spec));
  } else if (kind == "product" && !arg.empty()) {
    std::vector<std::size_t> factors;
    std::string_view rest = arg;
    while (true) {
      const auto x = rest.find('x');
      factors.push_back(parse_count(rest.substr(0, x), spec));
      if (x == std::string_view::npos) break;
      rest = rest.substr(x + 1);
    }
    t = product_table(factors);
  } else if (kind == "dihedral" && !arg.empty()) {
    t = dihedral_table(parse_count(arg, spec));
  } else if (kind == "symmetric3" && arg.empty()) {
    t = symmetric3_table();
  } else if (kind == "quaternion8" && arg.empty()) {
    t = quaternion8_table();
  } else if (kind == "file" && !arg.empty()) {
    std::ifstream in{std::string(arg)};
    if (!in) throw ParseError("cannot open group file '" + std::string(arg) + "'");
    t = parse_group_table(in, std::string(spec));
  } else {
    throw ContractViolation("unknown group spec '" + std::string(spec) + "'");
  }
  return std::make_shared<const GroupData>(GroupData::validate(std::move(t)));
}

std::vector<std::string> builtin_group_specs() {
  std::vector<std::string> out;
  for (int n = 2; n <= 12; ++n) out.push_back("cyclic:" + std::to_string(n));
  out.push_back("product:2x2");
  out.push_back("product:2x4");
  for (int n = 3; n <= 6; ++n) out.push_back("dihedral:" + std::to_string(n));
  out.push_back("symmetric3");
  out.push_back("quaternion8");
  return out;
}

std::vector<std::string> extended_group_specs() {
  return {"cyclic:16", "cyclic:24", "dihedral:8", "dihedral:12", "product:2x3x4"};
}

}  // namespace ncf
