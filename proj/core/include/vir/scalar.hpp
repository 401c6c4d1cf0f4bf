#ifndef VIR_SCALAR_HPP
#define VIR_SCALAR_HPP

#include "vir/errors.hpp"

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vir {

using Int = mpz_class;
using Rat = mpq_class;

/// Ground field F: the rationals, or a simple extension Q(t) given by a monic
/// squarefree minimal polynomial. All arithmetic is exact; there is no floating
/// point anywhere in the kernel.
///
/// Scalars are coordinate vectors in the power basis 1, t, ..., t^{d-1}.
/// Irreducibility of the minimal polynomial is not verified up front; a
/// reducible one surfaces lazily as NotInvertible (with the discovered factor),
/// and every result produced before that point is valid in the quotient ring.

class Scalar;

namespace detail {
struct FieldData;
}

struct FieldSpec {
  bool rational = true;
  std::vector<Rat> minpoly; // ascending coefficients, leading term included; empty for Q
};

class Field {
public:
  Field() = default;

  static Field rationals();
  /// minpoly with ascending coefficients; must be monic of degree >= 1 and
  /// squarefree (gcd with its derivative constant).
  static Field extension(std::vector<Rat> minpoly);
  static Field make(const FieldSpec& spec);

  bool valid() const { return d_ != nullptr; }
  int degree() const;
  bool is_rational() const;
  const std::vector<Rat>& minpoly() const; // empty for Q
  bool same(const Field& o) const;

  Scalar zero() const;
  Scalar one() const;
  Scalar of(const Rat& r) const;
  Scalar of_int(long n) const;
  Scalar theta() const; // the generator t; ParseError-free only for extensions
  Scalar from_coeffs(std::vector<Rat> coeffs) const;

  /// Grammar: scalar := term (('+'|'-') term)* ;
  ///          term := rational ('*' 't' ('^' int)?)? | 't' ('^' int)? ;
  ///          rational := int ('/' posint)?
  /// Whitespace is allowed around tokens. Throws ParseError with position.
  Scalar parse(std::string_view text) const;

private:
  friend class Scalar;
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  std::shared_ptr<const detail::FieldData> d_;
};

class Scalar {
public:
  Scalar() = default; // invalid; only for container defaults

  const Field& field() const { return f_; }
  bool valid() const { return f_.valid(); }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;
  /// Value as a rational if the t-coordinates vanish.
  std::optional<Rat> as_rational() const;
  std::optional<Int> as_integer() const;

  Scalar operator-() const;
  Scalar inv() const; // DivisionByZero, NotInvertible
  Scalar pow(long e) const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Canonical form: lowest terms, ascending powers of t, exactly one space
  /// around binary + and -.
  std::string str() const;
  /// Same term order without whitespace; used inside L[...] brackets.
  std::string str_compact() const;

private:
  friend class Field;
  Scalar(Field f, std::vector<Rat> c) : f_(std::move(f)), c_(std::move(c)) {}
  Field f_;
  std::vector<Rat> c_;
};

/// Strict total order (lexicographic on coordinates); used for map keys.
bool scalar_less(const Scalar& a, const Scalar& b);

std::string rat_str(const Rat& r);

} // namespace vir

#endif
