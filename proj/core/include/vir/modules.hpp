#ifndef VIR_MODULES_HPP
#define VIR_MODULES_HPP

#include "vir/element.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vir {

enum class FamilyKind { Aab, Aa, Ba, AabPrime, TrivialLine, PrimePlusLine };

const char* family_kind_name(FamilyKind k);

/// Descriptor of an intermediate-series module. Basis vectors are indexed by
/// lattice members nu; the weight of v_nu is a + nu for Aab (a arbitrary) and
/// just nu for the pinned families (Aa, Ba, AabPrime, TrivialLine,
/// PrimePlusLine, which all have their weight offset at 0 by the convention
/// "if a in M, choose a = 0").
class ModuleFamily {
public:
  ModuleFamily() = default;

  static ModuleFamily Aab(const Lattice& lat, const Scalar& a, const Scalar& b);
  static ModuleFamily Aa(const Lattice& lat, const Scalar& a);
  static ModuleFamily Ba(const Lattice& lat, const Scalar& a);
  /// Simple subquotient A'_{0,b}; requires b in {0,1} (the reducibility
  /// criterion a in M, b in {0,1}, with a normalized to 0).
  static ModuleFamily AabPrime(const Lattice& lat, const Scalar& b);
  static ModuleFamily trivial_line(const Lattice& lat);
  /// A'_{0,0} + F v_0 as a direct sum.
  static ModuleFamily prime_plus_line(const Lattice& lat);

  bool valid() const { return lat_.valid(); }
  FamilyKind kind() const { return kind_; }
  const Lattice& lattice() const { return lat_; }
  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }

  /// Whether the basis index nu exists in this family (AabPrime excludes 0,
  /// TrivialLine has only 0).
  bool index_supported(const Scalar& nu) const;

  /// Structure coefficient of L_mu from index nu: L_mu v_nu = coeff *
  /// v_{mu+nu}. Returns nullopt when the target index is outside the family's
  /// support (the contribution vanishes in the quotient). Throws
  /// WeightNotInSupport when nu itself is not a supported index.
  std::optional<Scalar> action_coeff(const Scalar& mu, const Scalar& nu) const;

  /// Weight offset: a for Aab, 0 for the pinned families.
  Scalar weight_offset() const;

  /// "Aab a=1/3 b=5" and the like.
  std::string str() const;
  bool same(const ModuleFamily& o) const;

private:
  FamilyKind kind_ = FamilyKind::Aab;
  Lattice lat_;
  Scalar a_, b_;
};

/// Sparse weight vector of a family module, keyed by the Z-basis coordinates of
/// the index nu (so the actual weight is offset + nu).
class ModuleVector {
public:
  ModuleVector() = default;
  explicit ModuleVector(ModuleFamily fam) : fam_(std::move(fam)) {}
  static ModuleVector unit(const ModuleFamily& fam, const Scalar& nu);

  const ModuleFamily& family() const { return fam_; }
  const std::map<std::vector<Int>, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const std::vector<Int>& idx, const Scalar& c);
  ModuleVector operator-() const;
  friend ModuleVector operator+(const ModuleVector& a, const ModuleVector& b);
  friend ModuleVector operator-(const ModuleVector& a, const ModuleVector& b);
  friend ModuleVector operator*(const Scalar& s, const ModuleVector& v);
  friend bool operator==(const ModuleVector& a, const ModuleVector& b);

  std::string str() const;

private:
  ModuleFamily fam_;
  std::map<std::vector<Int>, Scalar> terms_;
};

/// Bilinear action of x on v; the central element acts as zero. Throws
/// LatticeMismatch when x lives over a different lattice, WeightNotInSupport
/// when v holds an excluded index.
ModuleVector act(const ModuleFamily& fam, const AlgebraElement& x, const ModuleVector& v);

/// act([x,y], v) - act(x, act(y, v)) + act(y, act(x, v)); contractually zero.
ModuleVector axiom_residual(const ModuleFamily& fam, const AlgebraElement& x,
                            const AlgebraElement& y, const ModuleVector& v);

struct Submodule {
  /// Line = F*v_pivot; Complement = span{v_nu : nu != pivot}.
  enum class Shape { Line, Complement } shape = Shape::Line;
  Scalar pivot;
  std::string desc; // printable description
  /// True when v_nu with index nu belongs to the submodule.
  bool contains_index(const Scalar& nu) const {
    return shape == Shape::Line ? nu == pivot : !(nu == pivot);
  }
};

struct SubstructureReport {
  std::vector<Submodule> proper; // empty means irreducible
  bool irreducible() const { return proper.empty(); }
  std::string str() const;
};

/// Proper submodules of the Aab/Aa/Ba families per the reducibility criterion.
SubstructureReport substructure(const ModuleFamily& fam);

struct DiagonalMap {
  /// Index shift: src index nu maps to dst index nu + shift (shift =
  /// src offset - dst offset, a lattice member).
  std::vector<Int> shift;
  /// Diagonal coefficients on the window, all nonzero.
  std::map<std::vector<Int>, Scalar> d;
  /// Closed-form tag when recognized: "d = const", "d ~ a+nu", "d ~ nu".
  std::string closed_form;
};

struct IntertwinerResult {
  std::optional<DiagonalMap> map;
  /// When no map exists: the explicit inconsistent constraint.
  std::string obstruction;
  bool isomorphic() const { return map.has_value(); }
};

/// Solve for a degree-preserving diagonal intertwiner src -> dst on the window
/// (a set of src indices given by Z-basis coordinates). Probes are the Z-basis
/// steps in both directions. NotIsomorphic outcomes carry the violated
/// constraint.
IntertwinerResult intertwiner(const ModuleFamily& src, const ModuleFamily& dst,
                              const std::vector<std::vector<Int>>& window);

/// The simple subquotient of a family (Theorem-4.2(v) normal form): AabPrime
/// over the same lattice for Aa/Ba/reducible Aab; the family itself when
/// already simple.
ModuleFamily simple_subquotient(const ModuleFamily& fam);

/// Restriction to a sublattice along the coset x0 + sub: returns the family
/// descriptor of the restricted module per the restriction lemma, with the
/// shift folded into the parameter where needed. Throws NotASublattice when
/// sub is not contained in the family's lattice.
ModuleFamily restrict_family(const ModuleFamily& fam, const Lattice& sub, const Scalar& x0);

/// Consecutive box window {-r..r}^rank as coordinate vectors (rank from lat).
std::vector<std::vector<Int>> box_window(const Lattice& lat, int radius);

} // namespace vir

#endif
