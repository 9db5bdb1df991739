#include <sstream>

#include "doctest.h"
#include "ncfourier/errors.hpp"
#include "ncfourier/lorentz.hpp"
#include "support.hpp"

using namespace ncf;
using namespace ncf::testing;

namespace {

std::vector<Eigen::Index> dims_of(const std::string& spec) { return make_group(spec)->irrep_dims(); }

int sum_squares(const std::vector<Eigen::Index>& d) {
  int s = 0;
  for (auto v : d) s += static_cast<int>(v * v);
  return s;
}

// F[x](pi) = sum_g x(g) pi(g)^*, written out directly from the irreps.
std::vector<Eigen::MatrixXcd> direct_transform(const GroupData& g, const Eigen::VectorXcd& x) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& rep : g.irreps()) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    for (std::size_t h = 0; h < g.order(); ++h) m += x(static_cast<Eigen::Index>(h)) * rep.matrices[h].adjoint();
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("built-in groups: irrep dimensions") {
  CHECK(dims_of("cyclic:2") == std::vector<Eigen::Index>{1, 1});
  auto s3 = dims_of("symmetric3");
  std::sort(s3.begin(), s3.end());
  CHECK(s3 == std::vector<Eigen::Index>{1, 1, 2});
  auto q8 = dims_of("quaternion8");
  std::sort(q8.begin(), q8.end());
  CHECK(q8 == std::vector<Eigen::Index>{1, 1, 1, 1, 2});
  for (const auto& spec : builtin_group_specs()) {
    CAPTURE(spec);
    const auto g = make_group(spec);
    CHECK(sum_squares(g->irrep_dims()) == static_cast<int>(g->order()));
  }
  for (const auto& spec : extended_group_specs()) CHECK_NOTHROW(make_group(spec));
  CHECK(make_group("dihedral:5")->order() == 10);
  CHECK_FALSE(make_group("dihedral:5")->is_abelian());
  CHECK(make_group("product:2x4")->is_abelian());
  // dihedral of order 4 is the Klein group
  CHECK(make_group("dihedral:2")->is_abelian());
  CHECK(dims_of("dihedral:2") == std::vector<Eigen::Index>{1, 1, 1, 1});
}

TEST_CASE("bad group specs and tables are rejected") {
  CHECK_THROWS_AS(make_group("cyclic:0"), ContractViolation);
  CHECK_THROWS_AS(make_group("dihedral:0"), ContractViolation);
  CHECK_THROWS_AS(make_group("torus:3"), ContractViolation);
  CHECK_THROWS_AS(make_group("product:"), ContractViolation);
  CHECK_THROWS(make_group("file:/nonexistent/group.txt"));

  // broken homomorphism: Z3 with the sign character
  GroupTable t = cyclic_table(3);
  t.irreps[1].matrices[1](0, 0) = -1;
  CHECK_THROWS_AS(GroupData::validate(t), ContractViolation);
  // incomplete irreps
  GroupTable u = cyclic_table(4);
  u.irreps.pop_back();
  CHECK_THROWS_AS(GroupData::validate(u), ContractViolation);
  // repeated irrep passes sum d^2 only if something else is dropped; Schur catches it
  GroupTable v = cyclic_table(3);
  v.irreps[2] = v.irreps[1];
  CHECK_THROWS_AS(GroupData::validate(v), ContractViolation);
  // not a group law
  GroupTable w = cyclic_table(3);
  w.mult[4] = 0;
  CHECK_THROWS_AS(GroupData::validate(w), ContractViolation);
}

TEST_CASE("group file round trip") {
  const std::string text =
      "# Z2 written by hand\n"
      "order 2\n"
      "table\n"
      "0 1\n"
      "1 0\n"
      "irrep 1\n"
      "1\n"
      "1\n"
      "irrep 1\n"
      "1\n"
      "-1\n";
  std::istringstream in(text);
  const GroupData g = GroupData::validate(parse_group_table(in, "z2"));
  CHECK(g.order() == 2);
  CHECK(g.is_abelian());
  std::istringstream bad("order 2\ntable\n0 1\n1 0\nirrep 1\n1\n");
  CHECK_THROWS_AS(parse_group_table(bad), ParseError);
  std::istringstream bad2("order 2\ntable\n0 x\n1 0\nirrep 1\n1\n1\n");
  CHECK_THROWS_AS(parse_group_table(bad2), ParseError);
}

TEST_CASE("structure layout") {
  const auto g = make_group("dihedral:4");
  const FourierStructure f(g, Direction::FunctionSide);
  CHECK(f.M()->block_count() == 8);
  for (const auto& b : f.M()->blocks()) CHECK(b == Block{1, 1.0});
  REQUIRE(f.M_hat()->block_count() == g->irreps().size());
  for (std::size_t k = 0; k < g->irreps().size(); ++k) {
    CHECK(f.M_hat()->block(k).dim == g->irreps()[k].dim);
    CHECK(f.M_hat()->block(k).weight == doctest::Approx(static_cast<double>(g->irreps()[k].dim) / 8));
  }
  const FourierStructure b(g, Direction::BlockSide);
  CHECK(b.M()->same_layout(*f.M_hat()));
  CHECK(b.M_hat()->same_layout(*f.M()));
  CHECK(parse_direction("block") == Direction::BlockSide);
  CHECK(parse_direction("function-side") == Direction::FunctionSide);
  CHECK_THROWS_AS(parse_direction("sideways"), ContractViolation);
}

TEST_CASE("forward and inverse examples") {
  for (std::size_t n : {2, 5, 9}) {
    const auto g = make_group("cyclic:" + std::to_string(n));
    const FourierStructure fs(g, Direction::FunctionSide);
    CHECK(forward(fs, Operator::zero(fs.M())).is_zero());
    CHECK(inverse(fs, Operator::zero(fs.M_hat())).is_zero());
    const Operator one = fs.function(Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n)));
    const Operator f1 = forward(fs, one);
    // trivial character is irrep 0
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(f1.block(k)(0, 0) - (k == 0 ? Complex(static_cast<double>(n)) : Complex(0))) <= 1e-12);
    std::vector<Complex> delta(n, 0);
    delta[0] = 1;
    const Operator back = inverse(fs, Operator::from_diagonal(fs.M_hat(), delta));
    for (std::size_t h = 0; h < n; ++h) CHECK(std::abs(back.block(h)(0, 0) - 1.0 / static_cast<double>(n)) <= 1e-14);
  }
  const FourierStructure fs(make_group("cyclic:3"), Direction::FunctionSide);
  CHECK_THROWS_AS(forward(fs, Operator::identity(fs.M_hat())), StructuralError);
  CHECK_THROWS_AS(inverse(fs, Operator::identity(fs.M())), StructuralError);
}

TEST_CASE("oracle: transform agrees with the direct irrep sum") {
  for (const auto& spec : builtin_group_specs()) {
    const auto g = make_group(spec);
    const FourierStructure fs(g, Direction::FunctionSide);
    const FourierStructure bs(g, Direction::BlockSide);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Operator x = random_operator(fs.M(), s, Ensemble::GeneralComplex);
      const auto ref = direct_transform(*g, fs.values(x));
      const Operator fx = forward(fs, x);
      const Operator gx = inverse(bs, x);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        CHECK((fx.block(k) - ref[k]).cwiseAbs().maxCoeff() <= 1e-12 * (1 + ref[k].norm()));
        CHECK((gx.block(k) - ref[k]).cwiseAbs().maxCoeff() <= 1e-12 * (1 + ref[k].norm()));
      }
    }
  }
}

TEST_CASE("forward_matrix reproduces forward") {
  for (const auto& fs : builtin_structures()) {
    const Eigen::MatrixXcd a = forward_matrix(fs);
    const Operator x = random_operator(fs.M(), 3, Ensemble::GeneralComplex);
    CHECK((a * x.flatten() - forward(fs, x).flatten()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + x.max_abs_entry()));
  }
}

TEST_CASE("axioms on every built-in structure") {
  for (const auto& fs : builtin_structures()) {
    CAPTURE(fs.name());
    const AxiomReport r = verify_axioms(fs, 200, 17);
    CHECK(r.violations == 0);
    CHECK(r.f1_forward.value <= 1 + 1e-12);
    CHECK(r.f1_backward.value <= 1 + 1e-12);
    CHECK(r.plancherel.value <= 1e-10);
    CHECK(r.inversion.value <= 1e-9);
  }
}

TEST_CASE("(F1) equality at the unit point mass, invariant under scaling") {
  for (const auto& fs : builtin_structures()) {
    CAPTURE(fs.name());
    // delta_e on the function side; its transform image, the unit, on the block side
    const Operator e = fs.direction() == Direction::FunctionSide ? fs.delta(0) : Operator::identity(fs.M());
    for (Complex c : {Complex(1), Complex(-3.5, 2), Complex(1e-6)}) {
      const Operator x = c * e;
      const Operator fx = forward(fs, x);
      CHECK(rel_err(lp_norm(x, kInf), lp_norm(fx, 1)) <= 1e-13);
      CHECK(rel_err(lp_norm(fx, kInf), lp_norm(x, 1)) <= 1e-13);
    }
  }
}

TEST_CASE("property: abelian transform diagonalizes convolution; general order reversal") {
  for (const auto& spec : builtin_group_specs()) {
    const auto g = make_group(spec);
    const FourierStructure fs(g, Direction::FunctionSide);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Operator x = random_operator(fs.M(), 2 * s, Ensemble::GeneralComplex);
      const Operator y = random_operator(fs.M(), 2 * s + 1, Ensemble::GeneralComplex);
      const Operator lhs = forward(fs, convolution(fs, x, y));
      const Operator rhs = forward(fs, y) * forward(fs, x);
      CHECK(max_abs_difference(lhs, rhs) <= 1e-9 * (1 + lhs.max_abs_entry()));
      if (g->is_abelian()) {
        const Operator rhs2 = forward(fs, x) * forward(fs, y);
        CHECK(max_abs_difference(lhs, rhs2) <= 1e-9 * (1 + lhs.max_abs_entry()));
      }
    }
  }
}

TEST_CASE("Plancherel on extended groups") {
  for (const auto& spec : extended_group_specs()) {
    const auto g = make_group(spec);
    for (Direction d : {Direction::FunctionSide, Direction::BlockSide}) {
      const AxiomReport r = verify_axioms(FourierStructure(g, d), 100, 5);
      CHECK(r.violations == 0);
    }
  }
}
