#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ncf {

/// Unitary irreducible representation: one d x d matrix per group element.
struct Irrep {
  Eigen::Index dim = 1;
  std::vector<Eigen::MatrixXcd> matrices;
};

/// Unchecked group description: elements 0..order-1 with the identity at 0,
/// a row-major multiplication table mult[g * order + h] = gh, and irreps.
struct GroupTable {
  std::string name;
  std::size_t order = 0;
  std::vector<std::size_t> mult;
  std::vector<Irrep> irreps;
};

/// A validated finite group with a complete set of unitary irreps.
///
/// Only obtainable through validate(), which checks:
///   - the table is a group law with identity 0 (associativity exhaustive
///     up to order 48, 20000 sampled triples beyond that);
///   - every irrep is a unitary homomorphism to within 1e-10;
///   - sum_pi d_pi^2 = |G| exactly;
///   - Schur orthogonality of matrix coefficients to within 1e-9, which also
///     makes the irreps pairwise inequivalent.
class GroupData {
 public:
  static GroupData validate(GroupTable table);

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  std::size_t multiply(std::size_t g, std::size_t h) const { return mult_[g * order_ + h]; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  const std::vector<std::size_t>& mult_table() const { return mult_; }
  const std::vector<std::size_t>& inverse_table() const { return inverse_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  std::vector<Eigen::Index> irrep_dims() const;
  bool is_abelian() const { return abelian_; }

 private:
  GroupData() = default;

  std::string name_;
  std::size_t order_ = 0;
  std::vector<std::size_t> mult_;
  std::vector<std::size_t> inverse_;
  std::vector<Irrep> irreps_;
  bool abelian_ = false;
};

using GroupPtr = std::shared_ptr<const GroupData>;

/// Z_n with characters chi_k(g) = exp(2 pi i k g / n).
GroupTable cyclic_table(std::size_t n);
/// Z_{n_1} x ... x Z_{n_m}; element index is mixed radix with the first
/// factor least significant; irreps are tensor products of characters.
GroupTable product_table(const std::vector<std::size_t>& factors);
/// Dihedral group of order 2n: element k + n f stands for r^k s^f.
/// Irreps: the one-dimensional characters (2 for odd n, 4 for even n) and the
/// two-dimensional rotation-reflection representations for angles 2 pi j / n,
/// 1 <= j < n/2.
GroupTable dihedral_table(std::size_t n);
/// S_3, realized as the dihedral group of order 6.
GroupTable symmetric3_table();
/// Quaternion group {1, -1, i, -i, j, -j, k, -k} (in that index order), with
/// the four characters of Q8 / {+-1} and the defining 2-dimensional irrep.
GroupTable quaternion8_table();

/// Reads the text group format (see README, "Group files").
GroupTable parse_group_table(std::istream& in, std::string name = "custom");

/// Builds a validated group from a name: "cyclic:N", "product:AxBx...",
/// "dihedral:N", "symmetric3", "quaternion8" or "file:PATH".
GroupPtr make_group(std::string_view spec);

/// The built-in verification set: cyclic 2..12, product 2x2 and 2x4,
/// dihedral 3..6, symmetric3, quaternion8.
std::vector<std::string> builtin_group_specs();

/// Order-16 and order-24 groups that are exercised but never used to derive caps.
std::vector<std::string> extended_group_specs();

}  // namespace ncf
