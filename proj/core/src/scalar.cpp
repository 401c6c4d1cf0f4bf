#include "vir/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace vir {

namespace detail {

using Poly = std::vector<Rat>; // ascending; normalized to no leading zeros

static void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

static int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

static Poly poly_derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
  poly_trim(d);
  return d;
}

// Division with remainder; divisor nonzero.
static void poly_divmod(Poly a, const Poly& b, Poly& q, Poly& r) {
  q.assign(a.size(), Rat(0));
  const Rat lead = b.back();
  while (poly_deg(a) >= poly_deg(b)) {
    int shift = poly_deg(a) - poly_deg(b);
    Rat coef = a.back() / lead;
    q[shift] = coef;
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= coef * b[i];
    poly_trim(a);
    if (a.empty()) break;
  }
  poly_trim(q);
  r = std::move(a);
}

static Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly q, r;
    poly_divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

// Returns (g, u) with u*a + (something)*m = g, g = gcd(a, m), g monic.
static void poly_half_xgcd(Poly a, Poly m, Poly& g, Poly& u) {
  Poly r0 = std::move(a), r1 = std::move(m);
  poly_trim(r0);
  poly_trim(r1);
  Poly s0{Rat(1)}, s1{};
  while (!r1.empty()) {
    Poly q, r;
    poly_divmod(r0, r1, q, r);
    // s = s0 - q*s1
    Poly s(std::max(s0.size(), q.size() + (s1.empty() ? 0 : s1.size() - 1) + 1), Rat(0));
    for (size_t i = 0; i < s0.size(); ++i) s[i] += s0[i];
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j) s[i + j] -= q[i] * s1[j];
    poly_trim(s);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (!r0.empty()) {
    Rat lead = r0.back();
    for (auto& c : r0) c /= lead;
    for (auto& c : s0) c /= lead;
  }
  g = std::move(r0);
  u = std::move(s0);
}

static std::string poly_str_in_t(const Poly& p); // forward, defined below

struct FieldData {
  int degree = 1;
  bool rational = true;
  std::vector<Rat> minpoly;            // ascending incl. leading 1; empty for Q
  std::vector<std::vector<Rat>> red;   // t^{degree+j} in the power basis, j = 0..degree-2
};

static std::string poly_str_in_t(const Poly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0) continue;
    Rat mag = abs(p[k]);
    bool neg = p[k] < 0;
    std::string part;
    if (k == 0) {
      part = rat_str(mag);
    } else {
      std::string tp = (k == 1) ? "t" : "t^" + std::to_string(k);
      part = (mag == 1) ? tp : rat_str(mag) + "*" + tp;
    }
    if (first) {
      out = (neg ? "-" : "") + part;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + part;
    }
  }
  return first ? "0" : out;
}

} // namespace detail

std::string rat_str(const Rat& r) { return r.get_str(); }

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotMonic: return "NotMonic";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyGenerators: return "EmptyGenerators";
    case Errc::ZeroScaler: return "ZeroScaler";
    case Errc::NotMember: return "NotMember";
    case Errc::LatticeMismatch: return "LatticeMismatch";
    case Errc::ModeMismatch: return "ModeMismatch";
    case Errc::NotAScaler: return "NotAScaler";
    case Errc::NotNilpotentChain: return "NotNilpotentChain";
    case Errc::ModeError: return "ModeError";
    case Errc::ZeroDegree: return "ZeroDegree";
    case Errc::WeightNotInSupport: return "WeightNotInSupport";
    case Errc::NotASublattice: return "NotASublattice";
    case Errc::VariantMismatch: return "VariantMismatch";
    case Errc::CosetMismatch: return "CosetMismatch";
    case Errc::InvalidCoset: return "InvalidCoset";
    case Errc::NotHomogeneous: return "NotHomogeneous";
    case Errc::WindowNotClosed: return "WindowNotClosed";
    case Errc::ParityMismatch: return "ParityMismatch";
    case Errc::WeightError: return "WeightError";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::DisconnectedWindow: return "DisconnectedWindow";
    case Errc::DegenerateSystem: return "DegenerateSystem";
    case Errc::UndefinedName: return "UndefinedName";
    case Errc::RedefinedName: return "RedefinedName";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Field Field::rationals() {
  Field f;
  auto d = std::make_shared<detail::FieldData>();
  d->degree = 1;
  d->rational = true;
  f.d_ = std::move(d);
  return f;
}

Field Field::extension(std::vector<Rat> minpoly) {
  detail::poly_trim(minpoly);
  if (minpoly.size() < 2) fail(Errc::NotMonic, "minimal polynomial must have degree >= 1");
  if (minpoly.back() != 1) fail(Errc::NotMonic, "minimal polynomial must be monic");
  detail::Poly g = detail::poly_gcd(minpoly, detail::poly_derivative(minpoly));
  if (detail::poly_deg(g) > 0)
    fail(Errc::NotSquarefree,
         "gcd(p, p') = " + detail::poly_str_in_t(g) + " is non-constant");

  auto d = std::make_shared<detail::FieldData>();
  d->degree = detail::poly_deg(minpoly);
  d->rational = false;
  d->minpoly = std::move(minpoly);
  // t^degree = -(c_0 + c_1 t + ... + c_{d-1} t^{d-1}); extend multiplicatively.
  if (d->degree >= 2) {
    std::vector<Rat> cur(d->degree);
    for (int i = 0; i < d->degree; ++i) cur[i] = -d->minpoly[i];
    d->red.push_back(cur);
    for (int j = 1; j <= d->degree - 2; ++j) {
      std::vector<Rat> nxt(d->degree, Rat(0));
      Rat overflow = cur[d->degree - 1];
      for (int i = d->degree - 1; i >= 1; --i) nxt[i] = cur[i - 1];
      for (int i = 0; i < d->degree; ++i) nxt[i] += overflow * d->red[0][i];
      d->red.push_back(nxt);
      cur = std::move(nxt);
    }
  }
  Field f;
  f.d_ = std::move(d);
  return f;
}

Field Field::make(const FieldSpec& spec) {
  return spec.rational ? rationals() : extension(spec.minpoly);
}

int Field::degree() const { return d_->degree; }
bool Field::is_rational() const { return d_->rational; }
const std::vector<Rat>& Field::minpoly() const { return d_->minpoly; }

bool Field::same(const Field& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->rational == o.d_->rational && d_->minpoly == o.d_->minpoly;
}

Scalar Field::zero() const { return Scalar(*this, std::vector<Rat>(d_->degree, Rat(0))); }
Scalar Field::one() const { return of(Rat(1)); }

Scalar Field::of(const Rat& r) const {
  std::vector<Rat> c(d_->degree, Rat(0));
  c[0] = r;
  c[0].canonicalize();
  return Scalar(*this, std::move(c));
}

Scalar Field::of_int(long n) const { return of(Rat(n)); }

Scalar Field::theta() const {
  if (d_->rational) fail(Errc::ParseError, "t undefined in rational field");
  if (d_->degree == 1) return of(-d_->minpoly[0]); // degree-1 extension: t is rational
  std::vector<Rat> c(d_->degree, Rat(0));
  c[1] = 1;
  return Scalar(*this, std::move(c));
}

Scalar Field::from_coeffs(std::vector<Rat> coeffs) const {
  if (static_cast<int>(coeffs.size()) != d_->degree)
    fail(Errc::InvalidArgument, "coefficient vector length does not match field degree");
  for (auto& c : coeffs) c.canonicalize();
  return Scalar(*this, std::move(coeffs));
}

bool Scalar::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool Scalar::is_one() const {
  if (c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

std::optional<Rat> Scalar::as_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return std::nullopt;
  return c_[0];
}

bool Scalar::is_integer() const {
  auto r = as_rational();
  return r && r->get_den() == 1;
}

std::optional<Int> Scalar::as_integer() const {
  auto r = as_rational();
  if (!r || r->get_den() != 1) return std::nullopt;
  return r->get_num();
}

static void check_same_field(const Scalar& a, const Scalar& b) {
  if (!a.field().same(b.field()))
    fail(Errc::InvalidArgument, "scalars from different fields");
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  check_same_field(a, b);
  std::vector<Rat> c(a.c_);
  for (size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
  return Scalar(a.f_, std::move(c));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  check_same_field(a, b);
  std::vector<Rat> c(a.c_);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= b.c_[i];
  return Scalar(a.f_, std::move(c));
}

Scalar Scalar::operator-() const {
  std::vector<Rat> c(c_);
  for (auto& x : c) x = -x;
  return Scalar(f_, std::move(c));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  check_same_field(a, b);
  const auto& fd = *a.f_.d_;
  const int d = fd.degree;
  if (d == 1) {
    std::vector<Rat> c{a.c_[0] * b.c_[0]};
    return Scalar(a.f_, std::move(c));
  }
  std::vector<Rat> conv(2 * d - 1, Rat(0));
  for (int i = 0; i < d; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.c_[j] == 0) continue;
      conv[i + j] += a.c_[i] * b.c_[j];
    }
  }
  std::vector<Rat> c(conv.begin(), conv.begin() + d);
  for (int k = d; k < 2 * d - 1; ++k) {
    if (conv[k] == 0) continue;
    const auto& r = fd.red[k - d];
    for (int i = 0; i < d; ++i) c[i] += conv[k] * r[i];
  }
  return Scalar(a.f_, std::move(c));
}

Scalar& Scalar::operator+=(const Scalar& o) { return *this = *this + o; }
Scalar& Scalar::operator-=(const Scalar& o) { return *this = *this - o; }
Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar Scalar::inv() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero");
  const auto& fd = *f_.d_;
  if (fd.degree == 1) {
    std::vector<Rat> c{1 / c_[0]};
    return Scalar(f_, std::move(c));
  }
  detail::Poly a(c_.begin(), c_.end());
  detail::poly_trim(a);
  detail::Poly g, u;
  detail::poly_half_xgcd(a, fd.minpoly, g, u);
  if (detail::poly_deg(g) > 0)
    fail(Errc::NotInvertible,
         "minimal polynomial is reducible; discovered factor " + detail::poly_str_in_t(g));
  // g is the constant 1 after normalization, so u * a == 1 mod minpoly.
  u.resize(fd.degree, Rat(0));
  return Scalar(f_, std::move(u));
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

Scalar Scalar::pow(long e) const {
  Scalar base = *this;
  if (e < 0) {
    base = base.inv();
    e = -e;
  }
  Scalar acc = f_.one();
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!a.field().same(b.field())) return false;
  return a.c_ == b.c_;
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  const size_t n = std::min(a.coeffs().size(), b.coeffs().size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(a.coeffs()[i], b.coeffs()[i]);
    if (c != 0) return c < 0;
  }
  return a.coeffs().size() < b.coeffs().size();
}

std::string Scalar::str() const { return detail::poly_str_in_t({c_.begin(), c_.end()}); }

std::string Scalar::str_compact() const {
  std::string s = str();
  std::string out;
  out.reserve(s.size());
  for (char ch : s)
    if (ch != ' ') out.push_back(ch);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Cursor {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void err(const std::string& what) {
    fail(Errc::ParseError, what + " at position " + std::to_string(pos));
  }
};

Int parse_uint(Cursor& cur) {
  cur.skip_ws();
  size_t start = cur.pos;
  while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])))
    ++cur.pos;
  if (cur.pos == start) cur.err("expected integer");
  return Int(std::string(cur.s.substr(start, cur.pos - start)), 10);
}

Rat parse_rational(Cursor& cur, bool neg) {
  Int num = parse_uint(cur);
  Rat r(num);
  if (cur.pos < cur.s.size() && cur.s[cur.pos] == '/') {
    ++cur.pos;
    Int den = parse_uint(cur);
    if (den == 0) fail(Errc::DivisionByZero, "zero denominator in rational literal");
    r = Rat(num, den);
    r.canonicalize();
  }
  if (neg) r = -r;
  return r;
}

long parse_exponent(Cursor& cur) {
  Int e = parse_uint(cur);
  if (!e.fits_slong_p()) cur.err("exponent too large");
  return e.get_si();
}

// term := rational ('*' t-power)? | t-power ; optional unary '-' handled by caller
Scalar parse_term(Cursor& cur, const Field& f, bool neg) {
  cur.skip_ws();
  if (cur.peek() == 't') {
    cur.eat('t');
    long e = 1;
    if (cur.eat('^')) e = parse_exponent(cur);
    Scalar v = f.theta().pow(e);
    return neg ? -v : v;
  }
  if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.err("expected term");
  Rat r = parse_rational(cur, neg);
  Scalar v = f.of(r);
  if (cur.eat('*')) {
    if (!cur.eat('t')) cur.err("expected 't' after '*'");
    long e = 1;
    if (cur.eat('^')) e = parse_exponent(cur);
    v = v * f.theta().pow(e);
  }
  return v;
}

} // namespace

Scalar Field::parse(std::string_view text) const {
  Cursor cur{text};
  if (cur.eof()) cur.err("empty scalar");
  bool neg = cur.eat('-');
  Scalar acc = parse_term(cur, *this, neg);
  while (!cur.eof()) {
    if (cur.eat('+'))
      acc += parse_term(cur, *this, false);
    else if (cur.eat('-'))
      acc += parse_term(cur, *this, true);
    else
      cur.err("unexpected character '" + std::string(1, cur.peek()) + "'");
  }
  return acc;
}

} // namespace vir
