#include "vir/svir.hpp"

#include <set>

namespace vir {

const char* variant_name(SuperVariant v) { return v == SuperVariant::Tilde ? "tilde" : "ns"; }

SuperAlgebra::SuperAlgebra(Lattice lattice, Scalar alpha, SuperVariant variant)
    : lat_(std::move(lattice)), alpha_(std::move(alpha)), variant_(variant) {
  const Scalar two = lat_.field().of_int(2);
  if (!lat_.contains(two * alpha_))
    fail(Errc::InvalidCoset, "2*alpha = " + (two * alpha_).str_compact() + " must lie in M");
  coset_ = Coset(lat_, alpha_);
}

bool SuperAlgebra::same(const SuperAlgebra& o) const {
  return variant_ == o.variant_ && lat_.same(o.lat_) && lat_.contains(alpha_ - o.alpha_);
}

SuperElement SuperElement::zero(const SuperAlgebra& alg) {
  SuperElement e;
  e.alg_ = alg;
  e.ccoeff_ = alg.lattice().field().zero();
  return e;
}

SuperElement SuperElement::L(const SuperAlgebra& alg, const Scalar& degree) {
  auto k = alg.lattice().coords(degree);
  if (!k) fail(Errc::NotMember, "degree " + degree.str_compact() + " is not in M");
  SuperElement e = zero(alg);
  e.lterms_.emplace(*k, alg.lattice().field().one());
  return e;
}

SuperElement SuperElement::G(const SuperAlgebra& alg, const Scalar& degree) {
  auto k = alg.lattice().coords(degree - alg.alpha());
  if (!k)
    fail(Errc::NotMember, "degree " + degree.str_compact() + " is not in the coset alpha+M");
  SuperElement e = zero(alg);
  e.gterms_.emplace(*k, alg.lattice().field().one());
  return e;
}

SuperElement SuperElement::central(const SuperAlgebra& alg) {
  SuperElement e = zero(alg);
  e.ccoeff_ = alg.lattice().field().one();
  return e;
}

void SuperElement::add_lterm(const std::vector<Int>& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = lterms_.find(k);
  if (it == lterms_.end()) lterms_.emplace(k, c);
  else {
    it->second += c;
    if (it->second.is_zero()) lterms_.erase(it);
  }
}

void SuperElement::add_gterm(const std::vector<Int>& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = gterms_.find(k);
  if (it == gterms_.end()) gterms_.emplace(k, c);
  else {
    it->second += c;
    if (it->second.is_zero()) gterms_.erase(it);
  }
}

std::optional<int> SuperElement::parity() const {
  const bool has_even = !lterms_.empty() || !ccoeff_.is_zero();
  const bool has_odd = !gterms_.empty();
  if (has_even && has_odd) return std::nullopt;
  return has_odd ? 1 : 0;
}

AlgebraElement SuperElement::even_part() const {
  AlgebraElement out = AlgebraElement::zero(alg_.lattice(), false);
  for (const auto& [k, c] : lterms_)
    out = out + c * AlgebraElement::L(alg_.lattice(), alg_.lattice().at(k), false);
  if (!ccoeff_.is_zero()) out = out + ccoeff_ * AlgebraElement::central(alg_.lattice());
  return out;
}

static void check_super_compatible(const SuperElement& a, const SuperElement& b) {
  if (a.algebra().variant() != b.algebra().variant())
    fail(Errc::VariantMismatch, "mixing tilde and ns elements");
  if (!a.algebra().lattice().same(b.algebra().lattice()))
    fail(Errc::LatticeMismatch, "elements over different lattices");
  if (!a.algebra().lattice().contains(a.algebra().alpha() - b.algebra().alpha()))
    fail(Errc::CosetMismatch, "elements over different cosets");
}

SuperElement operator+(const SuperElement& a, const SuperElement& b) {
  check_super_compatible(a, b);
  SuperElement out = a;
  for (const auto& [k, c] : b.lterms_) out.add_lterm(k, c);
  for (const auto& [k, c] : b.gterms_) out.add_gterm(k, c);
  out.ccoeff_ += b.ccoeff_;
  return out;
}

SuperElement SuperElement::operator-() const {
  SuperElement out = zero(alg_);
  for (const auto& [k, c] : lterms_) out.lterms_.emplace(k, -c);
  for (const auto& [k, c] : gterms_) out.gterms_.emplace(k, -c);
  out.ccoeff_ = -ccoeff_;
  return out;
}

SuperElement operator-(const SuperElement& a, const SuperElement& b) { return a + (-b); }

SuperElement operator*(const Scalar& s, const SuperElement& a) {
  SuperElement out = SuperElement::zero(a.algebra());
  if (s.is_zero()) return out;
  for (const auto& [k, c] : a.lterms_) out.lterms_.emplace(k, s * c);
  for (const auto& [k, c] : a.gterms_) out.gterms_.emplace(k, s * c);
  out.ccoeff_ = s * a.ccoeff_;
  return out;
}

bool operator==(const SuperElement& a, const SuperElement& b) {
  if (!a.algebra().same(b.algebra())) return false;
  return a.lterms_ == b.lterms_ && a.gterms_ == b.gterms_ && a.ccoeff_ == b.ccoeff_;
}

std::string SuperElement::str() const {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (const auto& [k, c] : lterms_) terms.emplace_back(c, "L[" + ldeg(k).str_compact() + "]");
  for (const auto& [k, c] : gterms_) terms.emplace_back(c, "G[" + gdeg(k).str_compact() + "]");
  if (!ccoeff_.is_zero()) terms.emplace_back(ccoeff_, "c");
  return format_terms(terms);
}

SuperElement sbracket(const SuperElement& x, const SuperElement& y) {
  check_super_compatible(x, y);
  const SuperAlgebra& alg = x.algebra();
  const Lattice& lat = alg.lattice();
  const Field& f = lat.field();
  const bool ns = alg.variant() == SuperVariant::NS;
  const Scalar half = f.of(Rat(1, 2));
  const Scalar twelfth = f.of(Rat(1, 12));
  const Scalar third = f.of(Rat(1, 3));
  const Scalar quarter = f.of(Rat(1, 4));

  SuperElement out = SuperElement::zero(alg);

  // L-L, with the Vir central term.
  for (const auto& [kmu, cmu] : x.lterms()) {
    const Scalar mu = lat.at(kmu);
    for (const auto& [knu, cnu] : y.lterms()) {
      const Scalar nu = lat.at(knu);
      const Scalar coeff = cmu * cnu;
      std::vector<Int> ks(kmu.size());
      bool zero_sum = true;
      for (size_t i = 0; i < ks.size(); ++i) {
        ks[i] = kmu[i] + knu[i];
        if (ks[i] != 0) zero_sum = false;
      }
      out.add_lterm(ks, coeff * (nu - mu));
      if (zero_sum) out.ccoeff_ += coeff * twelfth * (mu * mu * mu - mu);
    }
  }

  // [L_mu, G_nu] = (nu +- mu/2) G_{mu+nu}; [G,L] by antisymmetry.
  auto lg = [&](const std::vector<Int>& kmu, const Scalar& cmu, const std::vector<Int>& knu,
                const Scalar& cnu, bool flip) {
    const Scalar mu = lat.at(kmu);
    const Scalar nu = alg.alpha() + lat.at(knu);
    Scalar coeff = ns ? (nu - half * mu) : (nu + half * mu);
    if (flip) coeff = -coeff;
    std::vector<Int> ks(kmu.size());
    for (size_t i = 0; i < ks.size(); ++i) ks[i] = kmu[i] + knu[i];
    out.add_gterm(ks, cmu * cnu * coeff);
  };
  for (const auto& [kmu, cmu] : x.lterms())
    for (const auto& [knu, cnu] : y.gterms()) lg(kmu, cmu, knu, cnu, false);
  for (const auto& [knu, cnu] : x.gterms())
    for (const auto& [kmu, cmu] : y.lterms()) lg(kmu, cmu, knu, cnu, true);

  // [G_nu, G_lambda]: symmetric.
  for (const auto& [knu, cnu] : x.gterms()) {
    const Scalar nu = alg.alpha() + lat.at(knu);
    for (const auto& [klam, clam] : y.gterms()) {
      const Scalar lam = alg.alpha() + lat.at(klam);
      const Scalar coeff = cnu * clam;
      const Scalar sum = nu + lam;
      if (ns) {
        auto ks = lat.coords(sum);
        out.add_lterm(*ks, coeff * f.of_int(2));
        if (sum.is_zero()) out.ccoeff_ -= coeff * third * (nu * nu - quarter);
      } else {
        if (sum.is_zero()) out.ccoeff_ += coeff;
      }
    }
  }
  return out;
}

SuperElement super_jacobi_residual(const SuperElement& x, const SuperElement& y,
                                   const SuperElement& z) {
  auto px = x.parity(), py = y.parity(), pz = z.parity();
  if (!px || !py || !pz) fail(Errc::NotHomogeneous, "jacobi requires homogeneous parities");
  SuperElement r = sbracket(x, sbracket(y, z)) - sbracket(sbracket(x, y), z);
  SuperElement t = sbracket(y, sbracket(x, z));
  if (*px == 1 && *py == 1) return r + t;
  return r - t;
}

// ---------------------------------------------------------------------------
// Extension data

static std::pair<std::vector<Int>, std::vector<Int>> xkey(const std::vector<Int>& m,
                                                          const std::vector<Int>& n) {
  return m <= n ? std::make_pair(m, n) : std::make_pair(n, m);
}

const Scalar& ExtensionData::xval(const std::vector<Int>& m, const std::vector<Int>& n) const {
  auto it = x.find(xkey(m, n));
  if (it == x.end()) fail(Errc::WindowNotClosed, "x table misses a required pair");
  return it->second;
}

const Scalar& ExtensionData::yval(const std::vector<Int>& m) const {
  auto it = y.find(m);
  if (it == y.end()) fail(Errc::WindowNotClosed, "y table misses a required point");
  return it->second;
}

bool ExtensionData::has_pair(const std::vector<Int>& m, const std::vector<Int>& n) const {
  return x.count(xkey(m, n)) > 0;
}

bool ExtensionData::has_y(const std::vector<Int>& m) const { return y.count(m) > 0; }

void ExtensionData::set_x(const std::vector<Int>& m, const std::vector<Int>& n, const Scalar& v) {
  x[xkey(m, n)] = v;
}

std::string ExtViolation::str() const {
  return equation + " " + instance + ": lhs = " + lhs.str() + ", rhs = " + rhs.str();
}

ExtensionData canonical_extension(const SuperAlgebra& alg, SuperVariant variant,
                                  const std::vector<std::vector<Int>>& coset_window) {
  const Field& f = alg.lattice().field();
  ExtensionData d;
  if (variant == SuperVariant::Tilde) {
    d.b = f.of(Rat(1, 2));
    for (const auto& m : coset_window) {
      d.y[m] = f.one();
      for (const auto& n : coset_window) d.set_x(m, n, f.zero());
    }
  } else {
    d.b = f.of(Rat(-1, 2));
    const Scalar third = f.of(Rat(1, 3));
    const Scalar quarter = f.of(Rat(1, 4));
    for (const auto& m : coset_window) {
      const Scalar mu = alg.alpha() + alg.lattice().at(m);
      d.y[m] = -third * (mu * mu - quarter);
      for (const auto& n : coset_window) d.set_x(m, n, f.of_int(2));
    }
  }
  return d;
}

std::vector<ExtViolation> extension_check(const SuperAlgebra& alg, const ExtensionData& data,
                                          const std::vector<std::vector<Int>>& coset_window,
                                          const std::vector<std::vector<Int>>& even_window) {
  const Lattice& lat = alg.lattice();
  const Field& f = lat.field();
  const Scalar twelfth = f.of(Rat(1, 12));
  std::vector<ExtViolation> out;

  std::set<std::vector<Int>> cw(coset_window.begin(), coset_window.end());
  std::set<std::vector<Int>> ew(even_window.begin(), even_window.end());

  // Table completeness over the declared window.
  for (const auto& m : coset_window) {
    if (!data.has_y(m)) fail(Errc::WindowNotClosed, "y table does not cover the window");
    for (const auto& n : coset_window)
      if (!data.has_pair(m, n)) fail(Errc::WindowNotClosed, "x table does not cover the window");
  }

  const auto c2a = *lat.coords(f.of_int(2) * alg.alpha());
  auto cadd = [](const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
  };
  auto cneg_coset = [&](const std::vector<Int>& k) {
    // coordinates of (-nu) - alpha for nu = alpha + lat(k)
    std::vector<Int> r(k.size());
    for (size_t i = 0; i < k.size(); ++i) r[i] = -k[i] - c2a[i];
    return r;
  };
  auto cos_scalar = [&](const std::vector<Int>& k) { return alg.alpha() + lat.at(k); };
  auto even_scalar = [&](const std::vector<Int>& k) { return lat.at(k); };

  auto note = [&](const char* eq, std::string inst, const Scalar& lhs, const Scalar& rhs) {
    if (!(lhs == rhs)) out.push_back({eq, std::move(inst), lhs, rhs});
  };
  auto inst3 = [&](const Scalar& l, const Scalar& m, const Scalar& n) {
    return "(lambda=" + l.str_compact() + ", mu=" + m.str_compact() + ", nu=" +
           n.str_compact() + ")";
  };

  const Scalar& b = data.b;

  for (const auto& km : coset_window) {
    const Scalar mu = cos_scalar(km);
    // (5.11)
    note("5.11", "(mu=" + mu.str_compact() + ")",
         f.of_int(3) * mu * (f.one() + f.of_int(2) * b) * data.xval(km, km), f.zero());
    const auto kmneg = cneg_coset(km);
    if (cw.count(kmneg)) {
      // (5.6) symmetry of y, and (5.5) as the nu=mu, lambda=-2mu instance of (5.4b)
      note("5.6", "(mu=" + mu.str_compact() + ")", data.yval(kmneg), data.yval(km));
      const Scalar m2 = f.of_int(-2) * mu;
      note("5.5", "(mu=" + mu.str_compact() + ")",
           mu * (f.one() - f.of_int(2) * b) * (data.yval(kmneg) + data.yval(km)),
           twelfth * (m2 * m2 * m2 - m2) * data.xval(km, km));
    }
    for (const auto& kn : coset_window) {
      const Scalar nu = cos_scalar(kn);
      // (5.4a) over even-window shifts
      for (const auto& kl : even_window) {
        const Scalar lam = even_scalar(kl);
        const auto kml = cadd(km, kl);
        const auto knl = cadd(kn, kl);
        if (!cw.count(kml) || !cw.count(knl)) continue;
        const Scalar lhs =
            (mu + lam * b) * data.xval(kml, kn) + (nu + lam * b) * data.xval(km, knl);
        const Scalar rhs = (mu + nu - lam) * data.xval(km, kn);
        note("5.4a", inst3(lam, mu, nu), lhs, rhs);
      }
      // (5.4b): lambda = -(mu+nu), nontrivial only on the diagonal shell
      {
        const Scalar lam = -(mu + nu);
        auto kl = lat.coords(lam);
        if (kl && ew.count(*kl)) {
          const auto knneg = cneg_coset(kn);
          if (cw.count(knneg)) {
            const Scalar lhs = (mu + lam * b) * data.yval(knneg) + (nu + lam * b) * data.yval(km);
            const Scalar rhs = twelfth * (lam * lam * lam - lam) * data.xval(km, kn);
            note("5.4b", inst3(lam, mu, nu), lhs, rhs);
          }
        }
      }
      // (5.10) over coset triples
      for (const auto& kl : coset_window) {
        const Scalar lam = cos_scalar(kl);
        const Scalar lhs = -(lam + (mu + nu) * b) * data.xval(km, kn);
        const Scalar rhs = (nu + (lam + mu) * b) * data.xval(kl, km) +
                           (mu + (lam + nu) * b) * data.xval(kl, kn);
        note("5.10", inst3(lam, mu, nu), lhs, rhs);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Super module families

const char* super_family_kind_name(SuperFamilyKind k) {
  switch (k) {
    case SuperFamilyKind::SAab: return "SAab";
    case SuperFamilyKind::SAa: return "SAa";
    case SuperFamilyKind::SBa: return "SBa";
  }
  return "?";
}

static void require_ns(const SuperAlgebra& alg) {
  if (alg.variant() != SuperVariant::NS)
    fail(Errc::VariantMismatch, "super module families are defined over the ns variant");
}

SuperFamily SuperFamily::SAab(const SuperAlgebra& alg, const Scalar& a, const Scalar& b) {
  require_ns(alg);
  SuperFamily f;
  f.kind_ = SuperFamilyKind::SAab;
  f.alg_ = alg;
  f.a_ = a;
  f.b_ = b;
  return f;
}

SuperFamily SuperFamily::SAa(const SuperAlgebra& alg, const Scalar& a) {
  require_ns(alg);
  SuperFamily f;
  f.kind_ = SuperFamilyKind::SAa;
  f.alg_ = alg;
  f.a_ = a;
  f.b_ = alg.lattice().field().zero();
  return f;
}

SuperFamily SuperFamily::SBa(const SuperAlgebra& alg, const Scalar& a) {
  require_ns(alg);
  SuperFamily f;
  f.kind_ = SuperFamilyKind::SBa;
  f.alg_ = alg;
  f.a_ = a;
  f.b_ = alg.lattice().field().zero();
  return f;
}

Scalar SuperFamily::v_index(const std::vector<Int>& k) const {
  const Scalar base = alg_.lattice().at(k);
  return v_on_coset() ? alg_.alpha() + base : base;
}

Scalar SuperFamily::w_index(const std::vector<Int>& k) const {
  const Scalar base = alg_.lattice().at(k);
  return v_on_coset() ? base : alg_.alpha() + base;
}

std::string SuperFamily::str() const {
  std::string out = super_family_kind_name(kind_);
  out += " a=" + a_.str_compact();
  if (kind_ == SuperFamilyKind::SAab) out += " b=" + b_.str_compact();
  return out;
}

bool SuperFamily::same(const SuperFamily& o) const {
  if (kind_ != o.kind_ || !alg_.same(o.alg_)) return false;
  if (!(a_ == o.a_)) return false;
  if (kind_ == SuperFamilyKind::SAab && !(b_ == o.b_)) return false;
  return true;
}

SuperModuleVector SuperModuleVector::v_unit(const SuperFamily& fam, const Scalar& idx) {
  const Scalar off = fam.v_on_coset() ? fam.algebra().alpha() : fam.algebra().lattice().field().zero();
  auto k = fam.algebra().lattice().coords(idx - off);
  if (!k) fail(Errc::WeightError, "v-index " + idx.str_compact() + " not in the v-sector");
  SuperModuleVector v(fam);
  v.vterms_.emplace(*k, fam.algebra().lattice().field().one());
  return v;
}

SuperModuleVector SuperModuleVector::w_unit(const SuperFamily& fam, const Scalar& idx) {
  const Scalar off = fam.v_on_coset() ? fam.algebra().lattice().field().zero() : fam.algebra().alpha();
  auto k = fam.algebra().lattice().coords(idx - off);
  if (!k) fail(Errc::WeightError, "w-index " + idx.str_compact() + " not in the w-sector");
  SuperModuleVector v(fam);
  v.wterms_.emplace(*k, fam.algebra().lattice().field().one());
  return v;
}

void SuperModuleVector::add_v(const std::vector<Int>& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = vterms_.find(k);
  if (it == vterms_.end()) vterms_.emplace(k, c);
  else {
    it->second += c;
    if (it->second.is_zero()) vterms_.erase(it);
  }
}

void SuperModuleVector::add_w(const std::vector<Int>& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = wterms_.find(k);
  if (it == wterms_.end()) wterms_.emplace(k, c);
  else {
    it->second += c;
    if (it->second.is_zero()) wterms_.erase(it);
  }
}

SuperModuleVector SuperModuleVector::operator-() const {
  SuperModuleVector out(fam_);
  for (const auto& [k, c] : vterms_) out.vterms_.emplace(k, -c);
  for (const auto& [k, c] : wterms_) out.wterms_.emplace(k, -c);
  return out;
}

SuperModuleVector operator+(const SuperModuleVector& a, const SuperModuleVector& b) {
  if (!a.fam_.same(b.fam_)) fail(Errc::InvalidArgument, "vectors from different super modules");
  SuperModuleVector out = a;
  for (const auto& [k, c] : b.vterms_) out.add_v(k, c);
  for (const auto& [k, c] : b.wterms_) out.add_w(k, c);
  return out;
}

SuperModuleVector operator-(const SuperModuleVector& a, const SuperModuleVector& b) {
  return a + (-b);
}

bool operator==(const SuperModuleVector& a, const SuperModuleVector& b) {
  return a.fam_.same(b.fam_) && a.vterms_ == b.vterms_ && a.wterms_ == b.wterms_;
}

std::string SuperModuleVector::str() const {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (const auto& [k, c] : vterms_)
    terms.emplace_back(c, "v[" + fam_.v_index(k).str_compact() + "]");
  for (const auto& [k, c] : wterms_)
    terms.emplace_back(c, "w[" + fam_.w_index(k).str_compact() + "]");
  return format_terms(terms);
}

SuperModuleVector sact(const SuperFamily& fam, const SuperElement& x,
                       const SuperModuleVector& v) {
  if (x.algebra().variant() != SuperVariant::NS)
    fail(Errc::VariantMismatch, "module families act for the ns variant");
  if (!x.algebra().same(fam.algebra()))
    fail(Errc::CosetMismatch, "element over a different super algebra");
  if (!v.family().same(fam)) fail(Errc::InvalidArgument, "vector from a different module");

  const Lattice& lat = fam.algebra().lattice();
  const Field& f = lat.field();
  const Scalar half = f.of(Rat(1, 2));
  const Scalar voff = fam.v_on_coset() ? fam.algebra().alpha() : f.zero();
  const Scalar woff = fam.v_on_coset() ? f.zero() : fam.algebra().alpha();
  const Scalar& a = fam.a();
  const Scalar& b = fam.b();

  SuperModuleVector out(fam);
  auto put_v = [&](const Scalar& idx, const Scalar& c) {
    if (c.is_zero()) return;
    auto k = lat.coords(idx - voff);
    if (!k) fail(Errc::WeightError, "internal: v target outside sector");
    out.add_v(*k, c);
  };
  auto put_w = [&](const Scalar& idx, const Scalar& c) {
    if (c.is_zero()) return;
    auto k = lat.coords(idx - woff);
    if (!k) fail(Errc::WeightError, "internal: w target outside sector");
    out.add_w(*k, c);
  };

  for (const auto& [kl, cl] : x.lterms()) {
    const Scalar lam = lat.at(kl);
    for (const auto& [kv, cv] : v.vterms()) {
      const Scalar mu = fam.v_index(kv);
      const Scalar cc = cl * cv;
      switch (fam.kind()) {
        case SuperFamilyKind::SAab:
          put_v(lam + mu, cc * (a + mu + lam * b));
          break;
        case SuperFamilyKind::SAa:
          if (!mu.is_zero()) put_v(lam + mu, cc * (mu + lam));
          else put_v(lam, cc * lam * (lam + a));
          break;
        case SuperFamilyKind::SBa:
          put_v(lam + mu, cc * (mu + half * lam));
          break;
      }
    }
    for (const auto& [kw, cw] : v.wterms()) {
      const Scalar nu = fam.w_index(kw);
      const Scalar cc = cl * cw;
      switch (fam.kind()) {
        case SuperFamilyKind::SAab:
          put_w(lam + nu, cc * (a + nu + lam * (b - half)));
          break;
        case SuperFamilyKind::SAa:
          put_w(lam + nu, cc * (nu + half * lam));
          break;
        case SuperFamilyKind::SBa:
          if (!(nu + lam).is_zero()) put_w(lam + nu, cc * nu);
          else put_w(f.zero(), cc * (-lam) * (lam + a));
          break;
      }
    }
  }
  for (const auto& [kg, cg] : x.gterms()) {
    const Scalar eta = fam.algebra().alpha() + lat.at(kg);
    for (const auto& [kv, cv] : v.vterms()) {
      const Scalar mu = fam.v_index(kv);
      const Scalar cc = cg * cv;
      switch (fam.kind()) {
        case SuperFamilyKind::SAab:
          put_w(eta + mu, cc);
          break;
        case SuperFamilyKind::SAa:
          if (!mu.is_zero()) put_w(eta + mu, cc);
          else put_w(eta, cc * (f.of_int(2) * eta + a));
          break;
        case SuperFamilyKind::SBa:
          if (!(mu + eta).is_zero()) put_w(eta + mu, cc);
          else put_w(f.zero(), cc * (f.of_int(2) * eta + a));
          break;
      }
    }
    for (const auto& [kw, cw] : v.wterms()) {
      const Scalar nu = fam.w_index(kw);
      const Scalar cc = cg * cw;
      switch (fam.kind()) {
        case SuperFamilyKind::SAab:
          put_v(eta + nu, cc * (a + nu + f.of_int(2) * eta * (b - half)));
          break;
        case SuperFamilyKind::SAa:
          put_v(eta + nu, cc * (nu + eta));
          break;
        case SuperFamilyKind::SBa:
          put_v(eta + nu, cc * nu);
          break;
      }
    }
  }
  return out; // c acts as zero
}

SuperModuleVector saxiom_residual(const SuperFamily& fam, const SuperElement& x,
                                  const SuperElement& y, const SuperModuleVector& v) {
  auto px = x.parity(), py = y.parity();
  if (!px || !py) fail(Errc::ParityMismatch, "saxiom requires homogeneous operators");
  SuperModuleVector r = sact(fam, sbracket(x, y), v) - sact(fam, x, sact(fam, y, v));
  SuperModuleVector t = sact(fam, y, sact(fam, x, v));
  if (*px == 1 && *py == 1) return r - t;
  return r + t;
}

} // namespace vir
