#include "vir/element.hpp"

namespace vir {

AlgebraElement AlgebraElement::zero(const Lattice& lat, bool centerless) {
  AlgebraElement e;
  e.lat_ = lat;
  e.centerless_ = centerless;
  e.ccoeff_ = lat.field().zero();
  return e;
}

AlgebraElement AlgebraElement::L(const Lattice& lat, const Scalar& degree, bool centerless) {
  auto k = lat.coords(degree);
  if (!k) fail(Errc::NotMember, "degree " + degree.str_compact() + " is not in the lattice");
  AlgebraElement e = zero(lat, centerless);
  e.lterms_.emplace(*k, lat.field().one());
  return e;
}

AlgebraElement AlgebraElement::central(const Lattice& lat) {
  AlgebraElement e = zero(lat, false);
  e.ccoeff_ = lat.field().one();
  return e;
}

void AlgebraElement::add_lterm(const std::vector<Int>& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = lterms_.find(k);
  if (it == lterms_.end()) {
    lterms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) lterms_.erase(it);
}

static void check_compatible(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.lattice().same(b.lattice()))
    fail(Errc::LatticeMismatch, "elements over different lattices");
  if (a.centerless() != b.centerless())
    fail(Errc::ModeMismatch, "mixing centered and centerless elements");
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_compatible(a, b);
  AlgebraElement out = a;
  for (const auto& [k, c] : b.lterms_) out.add_lterm(k, c);
  out.ccoeff_ += b.ccoeff_;
  return out;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out = zero(lat_, centerless_);
  for (const auto& [k, c] : lterms_) out.lterms_.emplace(k, -c);
  out.ccoeff_ = -ccoeff_;
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a + (-b); }

AlgebraElement operator*(const Scalar& s, const AlgebraElement& a) {
  AlgebraElement out = AlgebraElement::zero(a.lattice(), a.centerless());
  if (s.is_zero()) return out;
  for (const auto& [k, c] : a.lterms_) out.lterms_.emplace(k, s * c);
  out.ccoeff_ = s * a.ccoeff_;
  return out;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.lattice().same(b.lattice()) || a.centerless() != b.centerless()) return false;
  return a.lterms_ == b.lterms_ && a.ccoeff_ == b.ccoeff_;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  check_compatible(x, y);
  const Lattice& lat = x.lattice();
  const Field& f = lat.field();
  AlgebraElement out = AlgebraElement::zero(lat, x.centerless());
  const Scalar twelfth = f.of(Rat(1, 12));
  for (const auto& [kmu, cmu] : x.lterms_) {
    const Scalar mu = lat.at(kmu);
    for (const auto& [knu, cnu] : y.lterms_) {
      const Scalar coeff = cmu * cnu;
      std::vector<Int> ksum(kmu.size());
      bool sum_zero = true;
      for (size_t i = 0; i < kmu.size(); ++i) {
        ksum[i] = kmu[i] + knu[i];
        if (ksum[i] != 0) sum_zero = false;
      }
      const Scalar nu = lat.at(knu);
      out.add_lterm(ksum, coeff * (nu - mu));
      if (!x.centerless() && sum_zero)
        out.ccoeff_ += coeff * twelfth * (mu * mu * mu - mu);
    }
  }
  return out;
}

AlgebraElement jacobi_residual(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z) {
  return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
}

std::map<std::vector<Int>, AlgebraElement> grading_decompose(const AlgebraElement& x) {
  std::map<std::vector<Int>, AlgebraElement> out;
  const auto zero_key = x.lattice().zero_coords();
  for (const auto& [k, c] : x.lterms()) {
    AlgebraElement comp = AlgebraElement::zero(x.lattice(), x.centerless());
    comp = c * AlgebraElement::L(x.lattice(), x.lattice().at(k), x.centerless());
    out.emplace(k, std::move(comp));
  }
  if (!x.central_coeff().is_zero()) {
    auto it = out.find(zero_key);
    AlgebraElement cpart = x.central_coeff() * AlgebraElement::central(x.lattice());
    if (it == out.end())
      out.emplace(zero_key, std::move(cpart));
    else
      it->second = it->second + cpart;
  }
  return out;
}

AlgebraElement apply_automorphism(const UnitHom& chi, const AlgebraElement& x) {
  if (!chi.lattice().same(x.lattice()))
    fail(Errc::LatticeMismatch, "homomorphism over a different lattice");
  AlgebraElement out = AlgebraElement::zero(x.lattice(), x.centerless());
  for (const auto& [k, c] : x.lterms()) {
    const Scalar deg = x.lattice().at(k);
    out = out + (c * chi(deg)) * AlgebraElement::L(x.lattice(), deg, x.centerless());
  }
  if (!x.central_coeff().is_zero())
    out = out + x.central_coeff() * AlgebraElement::central(x.lattice());
  return out;
}

AlgebraElement apply_automorphism(const Scalar& a, const AlgebraElement& x) {
  const Lattice& lat = x.lattice();
  if (!scaler_test(lat, a))
    fail(Errc::NotAScaler, "a = " + a.str_compact() + " does not satisfy aM = M");
  const Field& f = lat.field();
  const Scalar ai = a.inv();
  AlgebraElement out = AlgebraElement::zero(lat, x.centerless());
  const Scalar kappa = (ai - a) * f.of(Rat(1, 24));
  for (const auto& [k, c] : x.lterms()) {
    const Scalar deg = lat.at(k);
    out = out + (c * ai) * AlgebraElement::L(lat, a * deg, x.centerless());
    bool is_zero_deg = true;
    for (const auto& ki : k)
      if (ki != 0) is_zero_deg = false;
    if (is_zero_deg && !x.centerless())
      out = out + (c * kappa) * AlgebraElement::central(lat);
  }
  if (!x.centerless() && !x.central_coeff().is_zero())
    out = out + (x.central_coeff() * a) * AlgebraElement::central(lat);
  return out;
}

std::vector<Scalar> AlgebraElement::support() const {
  std::vector<Scalar> out;
  out.reserve(lterms_.size());
  for (const auto& [k, c] : lterms_) out.push_back(lat_.at(k));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string coeff_prefix(const Scalar& c) {
  // magnitude part of a coefficient in front of an atom; caller handles sign
  std::string s = c.str_compact();
  bool multi = false;
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i] == '+' || s[i] == '-') multi = true;
  if (multi) return "(" + s + ")*";
  if (s == "1") return "";
  return s + "*";
}

} // namespace

std::string format_terms(const std::vector<std::pair<Scalar, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, atom] : terms) {
    // Pull an overall sign out when the leading coordinate is negative.
    bool neg = false;
    Scalar mag = c;
    for (const auto& q : c.coeffs()) {
      if (q == 0) continue;
      if (q < 0) {
        neg = true;
        mag = -c;
      }
      break;
    }
    std::string part = coeff_prefix(mag) + atom;
    if (first) {
      out = (neg ? "-" : "") + part;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + part;
    }
  }
  return out;
}

std::string AlgebraElement::str() const {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (const auto& [k, c] : lterms_) terms.emplace_back(c, "L[" + lat_.at(k).str_compact() + "]");
  if (!ccoeff_.is_zero()) terms.emplace_back(ccoeff_, "c");
  return format_terms(terms);
}

} // namespace vir
