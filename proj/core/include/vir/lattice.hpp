#ifndef VIR_LATTICE_HPP
#define VIR_LATTICE_HPP

#include "vir/scalar.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace vir {

/// Finitely generated subgroup M of the ground field, with a canonical Z-basis
/// computed by clearing denominators and reducing the generator coordinate
/// matrix to Hermite normal form over Z. Immutable and cheap to copy.
class Lattice {
public:
  Lattice() = default;

  /// Generators must be nonzero. Throws EmptyGenerators on an empty list.
  static Lattice make(const Field& field, std::vector<Scalar> generators);

  bool valid() const { return d_ != nullptr; }
  const Field& field() const;
  int rank() const;
  const std::vector<Scalar>& zbasis() const;
  const std::vector<Scalar>& generators() const;

  /// Integer coordinates of x in the Z-basis, if x is a member.
  std::optional<std::vector<Int>> coords(const Scalar& x) const;
  bool contains(const Scalar& x) const { return coords(x).has_value(); }

  /// The member with the given Z-basis coordinates.
  Scalar at(std::span<const Int> coords) const;
  std::vector<Int> zero_coords() const { return std::vector<Int>(rank(), Int(0)); }

  bool same(const Lattice& o) const;
  /// True when every zbasis element of sub lies in this lattice.
  bool contains_lattice(const Lattice& sub) const;

  /// Compact description "{b1, b2}" of the Z-basis.
  std::string str() const;

private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

/// Rank of the subgroup of F generated by the given elements (zeros ignored).
int span_rank(const Field& field, const std::vector<Scalar>& elements);

/// True iff a*M = M, i.e. a*b_i and a^{-1}*b_i are members for every basis
/// element. Throws ZeroScaler for a = 0.
bool scaler_test(const Lattice& lat, const Scalar& a);

/// Coset alpha + M. For super degrees the doubling condition 2*alpha in M is
/// enforced by the superalgebra constructor, not here.
class Coset {
public:
  Coset() = default;
  Coset(Lattice lattice, Scalar offset) : lat_(std::move(lattice)), off_(std::move(offset)) {}
  const Lattice& lattice() const { return lat_; }
  const Scalar& offset() const { return off_; }
  /// Coordinates of x - alpha in the lattice, if x lies in the coset.
  std::optional<std::vector<Int>> coords(const Scalar& x) const { return lat_.coords(x - off_); }
  Scalar at(std::span<const Int> coords) const { return off_ + lat_.at(coords); }
  bool same(const Coset& o) const;

private:
  Lattice lat_;
  Scalar off_;
};

/// Group homomorphism M -> F*, specified by its (nonzero) values on the
/// computed Z-basis and evaluated multiplicatively over integer coordinates.
class UnitHom {
public:
  UnitHom() = default;
  UnitHom(Lattice lattice, std::vector<Scalar> values_on_zbasis);

  const Lattice& lattice() const { return lat_; }
  const std::vector<Scalar>& values() const { return vals_; }

  /// chi(x); throws NotMember when x is not in M.
  Scalar operator()(const Scalar& x) const;

private:
  Lattice lat_;
  std::vector<Scalar> vals_;
};

} // namespace vir

#endif
