#ifndef VIR_ELEMENT_HPP
#define VIR_ELEMENT_HPP

#include "vir/lattice.hpp"

#include <map>
#include <string>
#include <vector>

namespace vir {

/// Element of Vir[M] (centered) or of the centerless quotient. Stored as a
/// sparse map from Z-basis coordinates of the degree to the coefficient, plus
/// the coefficient of the central element c. Immutable value type; bracket and
/// friends are pure.
class AlgebraElement {
public:
  AlgebraElement() = default;

  static AlgebraElement zero(const Lattice& lat, bool centerless);
  /// L_degree; the degree must be a lattice member (NotMember otherwise).
  static AlgebraElement L(const Lattice& lat, const Scalar& degree, bool centerless);
  /// The central element c (centered mode).
  static AlgebraElement central(const Lattice& lat);

  bool valid() const { return lat_.valid(); }
  const Lattice& lattice() const { return lat_; }
  bool centerless() const { return centerless_; }
  bool is_zero() const { return lterms_.empty() && ccoeff_.is_zero(); }

  const std::map<std::vector<Int>, Scalar>& lterms() const { return lterms_; }
  const Scalar& central_coeff() const { return ccoeff_; }
  /// The degree scalar for a coordinate key.
  Scalar degree_scalar(const std::vector<Int>& k) const { return lat_.at(k); }

  AlgebraElement operator-() const;
  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const Scalar& s, const AlgebraElement& a);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

  /// Canonical form: degrees ascending by Z-basis coordinates
  /// (lexicographically), c last.
  std::string str() const;

  /// Support degrees as scalars (for span-rank checks).
  std::vector<Scalar> support() const;

private:
  friend AlgebraElement bracket(const AlgebraElement&, const AlgebraElement&);
  void add_lterm(const std::vector<Int>& k, const Scalar& c);

  Lattice lat_;
  bool centerless_ = false;
  std::map<std::vector<Int>, Scalar> lterms_;
  Scalar ccoeff_;
};

/// Eq. bracket with central term (1/12)(mu^3 - mu) delta_{mu+nu,0} c; the
/// delta term is dropped in centerless mode. Throws LatticeMismatch /
/// ModeMismatch on incompatible inputs.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]; contractually zero.
AlgebraElement jacobi_residual(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z);

/// Split into homogeneous components; the degree-0 component carries the
/// central coefficient.
std::map<std::vector<Int>, AlgebraElement> grading_decompose(const AlgebraElement& x);

/// phi_chi: L_x -> chi(x) L_x, c -> c.
AlgebraElement apply_automorphism(const UnitHom& chi, const AlgebraElement& x);

/// phi'_a for a scaler of M: L_x -> a^{-1} L_{ax} for x != 0, and in centered
/// mode L_0 -> a^{-1} L_0 + ((a^{-1}-a)/24) c together with c -> a c. The L_0
/// and c corrections are the coboundary adjustment that makes the map preserve
/// the centered bracket for every scaler; they vanish exactly when a^2 = 1, so
/// on Vir[Z] this is the textbook map. Throws NotAScaler when aM != M.
AlgebraElement apply_automorphism(const Scalar& a, const AlgebraElement& x);

/// Canonical printer for a list of (coefficient, atom) pairs; shared by
/// elements, module vectors and super elements.
std::string format_terms(const std::vector<std::pair<Scalar, std::string>>& terms);

} // namespace vir

#endif
