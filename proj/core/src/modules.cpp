#include "vir/modules.hpp"

#include <algorithm>
#include <functional>

namespace vir {

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Aab: return "Aab";
    case FamilyKind::Aa: return "Aa";
    case FamilyKind::Ba: return "Ba";
    case FamilyKind::AabPrime: return "AabPrime";
    case FamilyKind::TrivialLine: return "TrivialLine";
    case FamilyKind::PrimePlusLine: return "PrimePlusLine";
  }
  return "?";
}

ModuleFamily ModuleFamily::Aab(const Lattice& lat, const Scalar& a, const Scalar& b) {
  ModuleFamily m;
  m.kind_ = FamilyKind::Aab;
  m.lat_ = lat;
  m.a_ = a;
  m.b_ = b;
  return m;
}

ModuleFamily ModuleFamily::Aa(const Lattice& lat, const Scalar& a) {
  ModuleFamily m;
  m.kind_ = FamilyKind::Aa;
  m.lat_ = lat;
  m.a_ = a;
  m.b_ = lat.field().zero();
  return m;
}

ModuleFamily ModuleFamily::Ba(const Lattice& lat, const Scalar& a) {
  ModuleFamily m;
  m.kind_ = FamilyKind::Ba;
  m.lat_ = lat;
  m.a_ = a;
  m.b_ = lat.field().zero();
  return m;
}

ModuleFamily ModuleFamily::AabPrime(const Lattice& lat, const Scalar& b) {
  if (!(b.is_zero() || b.is_one()))
    fail(Errc::InvalidArgument, "AabPrime exists only for b in {0, 1}");
  ModuleFamily m;
  m.kind_ = FamilyKind::AabPrime;
  m.lat_ = lat;
  m.a_ = lat.field().zero();
  m.b_ = b;
  return m;
}

ModuleFamily ModuleFamily::trivial_line(const Lattice& lat) {
  ModuleFamily m;
  m.kind_ = FamilyKind::TrivialLine;
  m.lat_ = lat;
  m.a_ = lat.field().zero();
  m.b_ = lat.field().zero();
  return m;
}

ModuleFamily ModuleFamily::prime_plus_line(const Lattice& lat) {
  ModuleFamily m;
  m.kind_ = FamilyKind::PrimePlusLine;
  m.lat_ = lat;
  m.a_ = lat.field().zero();
  m.b_ = lat.field().zero();
  return m;
}

bool ModuleFamily::index_supported(const Scalar& nu) const {
  switch (kind_) {
    case FamilyKind::AabPrime: return !nu.is_zero();
    case FamilyKind::TrivialLine: return nu.is_zero();
    default: return true;
  }
}

std::optional<Scalar> ModuleFamily::action_coeff(const Scalar& mu, const Scalar& nu) const {
  const Field& f = lat_.field();
  if (!index_supported(nu))
    fail(Errc::WeightNotInSupport,
         "index " + nu.str_compact() + " is not a weight of " + str());
  const Scalar target = mu + nu;
  switch (kind_) {
    case FamilyKind::Aab:
      return a_ + nu + mu * b_;
    case FamilyKind::Aa:
      if (!nu.is_zero()) return nu + mu;
      return mu * (mu + a_);
    case FamilyKind::Ba:
      if (!(target.is_zero())) return nu;
      return -mu * (mu + a_);
    case FamilyKind::AabPrime:
      if (target.is_zero()) {
        if (b_.is_zero()) return std::nullopt; // lands in the killed line
        return f.zero();                       // coefficient nu+mu vanishes anyway
      }
      return b_.is_zero() ? nu : nu + mu;
    case FamilyKind::TrivialLine:
      return f.zero();
    case FamilyKind::PrimePlusLine:
      if (nu.is_zero()) return f.zero();
      if (target.is_zero()) return std::nullopt;
      return nu;
  }
  return std::nullopt;
}

Scalar ModuleFamily::weight_offset() const {
  return kind_ == FamilyKind::Aab ? a_ : lat_.field().zero();
}

std::string ModuleFamily::str() const {
  switch (kind_) {
    case FamilyKind::Aab: return "Aab a=" + a_.str_compact() + " b=" + b_.str_compact();
    case FamilyKind::Aa: return "Aa a=" + a_.str_compact();
    case FamilyKind::Ba: return "Ba a=" + a_.str_compact();
    case FamilyKind::AabPrime: return "AabPrime b=" + b_.str_compact();
    case FamilyKind::TrivialLine: return "TrivialLine";
    case FamilyKind::PrimePlusLine: return "PrimePlusLine";
  }
  return "?";
}

bool ModuleFamily::same(const ModuleFamily& o) const {
  if (kind_ != o.kind_ || !lat_.same(o.lat_)) return false;
  switch (kind_) {
    case FamilyKind::Aab: return a_ == o.a_ && b_ == o.b_;
    case FamilyKind::Aa:
    case FamilyKind::Ba: return a_ == o.a_;
    case FamilyKind::AabPrime: return b_ == o.b_;
    default: return true;
  }
}

ModuleVector ModuleVector::unit(const ModuleFamily& fam, const Scalar& nu) {
  auto k = fam.lattice().coords(nu);
  if (!k) fail(Errc::NotMember, "index " + nu.str_compact() + " is not in the lattice");
  if (!fam.index_supported(nu))
    fail(Errc::WeightNotInSupport,
         "index " + nu.str_compact() + " is not a weight of " + fam.str());
  ModuleVector v(fam);
  v.terms_.emplace(*k, fam.lattice().field().one());
  return v;
}

void ModuleVector::add(const std::vector<Int>& idx, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(idx);
  if (it == terms_.end()) {
    terms_.emplace(idx, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

ModuleVector ModuleVector::operator-() const {
  ModuleVector out(fam_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

ModuleVector operator+(const ModuleVector& a, const ModuleVector& b) {
  if (!a.fam_.same(b.fam_)) fail(Errc::InvalidArgument, "vectors from different modules");
  ModuleVector out = a;
  for (const auto& [k, c] : b.terms_) out.add(k, c);
  return out;
}

ModuleVector operator-(const ModuleVector& a, const ModuleVector& b) { return a + (-b); }

ModuleVector operator*(const Scalar& s, const ModuleVector& v) {
  ModuleVector out(v.fam_);
  if (s.is_zero()) return out;
  for (const auto& [k, c] : v.terms_) out.terms_.emplace(k, s * c);
  return out;
}

bool operator==(const ModuleVector& a, const ModuleVector& b) {
  return a.fam_.same(b.fam_) && a.terms_ == b.terms_;
}

std::string ModuleVector::str() const {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (const auto& [k, c] : terms_)
    terms.emplace_back(c, "v[" + fam_.lattice().at(k).str_compact() + "]");
  return format_terms(terms);
}

ModuleVector act(const ModuleFamily& fam, const AlgebraElement& x, const ModuleVector& v) {
  if (!x.lattice().same(fam.lattice()))
    fail(Errc::LatticeMismatch, "element over a different lattice");
  if (!v.family().same(fam)) fail(Errc::InvalidArgument, "vector from a different module");
  const Lattice& lat = fam.lattice();
  ModuleVector out(fam);
  for (const auto& [kmu, cmu] : x.lterms()) {
    const Scalar mu = lat.at(kmu);
    for (const auto& [knu, cnu] : v.terms()) {
      const Scalar nu = lat.at(knu);
      auto coeff = fam.action_coeff(mu, nu);
      if (!coeff || coeff->is_zero()) continue;
      std::vector<Int> tgt(kmu.size());
      for (size_t i = 0; i < tgt.size(); ++i) tgt[i] = kmu[i] + knu[i];
      out.add(tgt, cmu * cnu * *coeff);
    }
  }
  return out; // the central coefficient of x acts as zero
}

ModuleVector axiom_residual(const ModuleFamily& fam, const AlgebraElement& x,
                            const AlgebraElement& y, const ModuleVector& v) {
  return act(fam, bracket(x, y), v) - act(fam, x, act(fam, y, v)) +
         act(fam, y, act(fam, x, v));
}

// ---------------------------------------------------------------------------
// Substructure

SubstructureReport substructure(const ModuleFamily& fam) {
  const Field& f = fam.lattice().field();
  SubstructureReport rep;
  auto line = [&](const Scalar& pivot, const std::string& head) {
    Submodule s;
    s.shape = Submodule::Shape::Line;
    s.pivot = pivot;
    s.desc = head + ": line F*v[" + pivot.str_compact() + "] (trivial); quotient ~ AabPrime b=0";
    return s;
  };
  auto complement = [&](const Scalar& pivot, const Scalar& b, const std::string& head) {
    Submodule s;
    s.shape = Submodule::Shape::Complement;
    s.pivot = pivot;
    s.desc = head + ": span{v[nu] : nu != " + pivot.str_compact() + "} ~ AabPrime b=" +
             b.str_compact() + "; quotient ~ trivial line";
    return s;
  };
  switch (fam.kind()) {
    case FamilyKind::Aab: {
      auto inside = fam.lattice().coords(fam.a());
      if (!inside) break; // a not in M: irreducible
      const Scalar pivot = -fam.a();
      if (fam.b().is_zero()) rep.proper.push_back(line(pivot, "submodule"));
      else if (fam.b().is_one()) rep.proper.push_back(complement(pivot, fam.b(), "submodule"));
      break;
    }
    case FamilyKind::Aa:
      rep.proper.push_back(complement(f.zero(), f.one(), "submodule"));
      break;
    case FamilyKind::Ba:
      rep.proper.push_back(line(f.zero(), "submodule"));
      break;
    case FamilyKind::PrimePlusLine:
      rep.proper.push_back(line(f.zero(), "direct summand"));
      rep.proper.push_back(complement(f.zero(), f.zero(), "direct summand"));
      break;
    default:
      break;
  }
  return rep;
}

std::string SubstructureReport::str() const {
  if (proper.empty()) return "irreducible";
  std::string out;
  for (size_t i = 0; i < proper.size(); ++i) {
    if (i) out += "\n";
    out += proper[i].desc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Intertwiner

namespace {

// Action coefficient as a plain scalar: dropped targets count as zero.
Scalar flat_coeff(const ModuleFamily& fam, const Scalar& mu, const Scalar& nu) {
  auto c = fam.action_coeff(mu, nu);
  return c ? *c : fam.lattice().field().zero();
}

std::vector<Int> vadd(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

} // namespace

IntertwinerResult intertwiner(const ModuleFamily& src, const ModuleFamily& dst,
                              const std::vector<std::vector<Int>>& window) {
  IntertwinerResult res;
  if (!src.lattice().same(dst.lattice()))
    fail(Errc::LatticeMismatch, "families over different lattices");
  const Lattice& lat = src.lattice();
  const Field& f = lat.field();

  const Scalar delta = src.weight_offset() - dst.weight_offset();
  auto shift = lat.coords(delta);
  if (!shift) {
    res.obstruction = "weight offsets differ by " + delta.str_compact() + ", not a lattice member";
    return res;
  }

  // Supported window nodes on each side; dimension pattern must agree.
  std::vector<std::vector<Int>> nodes;
  for (const auto& k : window) {
    const Scalar nu = lat.at(k);
    const Scalar nud = nu + delta;
    const bool s_sup = src.index_supported(nu);
    const bool d_sup = dst.index_supported(nud);
    if (s_sup != d_sup) {
      res.obstruction = "weight-space dimensions differ at index " + nu.str_compact();
      return res;
    }
    if (s_sup) nodes.push_back(k);
  }
  if (nodes.empty()) {
    res.obstruction = "window contains no weights";
    return res;
  }

  // Probes: Z-basis steps in both directions.
  std::vector<Scalar> probes;
  for (const auto& b : lat.zbasis()) {
    probes.push_back(b);
    probes.push_back(-b);
  }

  auto node_index = [&](const std::vector<Int>& k) -> int {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), k);
    if (it == nodes.end() || *it != k) return -1;
    return static_cast<int>(it - nodes.begin());
  };
  std::sort(nodes.begin(), nodes.end());

  std::map<std::vector<Int>, Scalar> d;
  std::map<std::vector<Int>, int> comp;
  // Per-component propagation; components split only where both sides vanish.
  int ncomp = 0;
  for (const auto& root : nodes) {
    if (d.count(root)) continue;
    const int cid = ncomp++;
    d[root] = f.one();
    comp[root] = cid;
    std::vector<std::vector<Int>> queue{root};
    while (!queue.empty()) {
      auto k = queue.back();
      queue.pop_back();
      const Scalar nu = lat.at(k);
      for (const auto& p : probes) {
        auto tk = vadd(k, *lat.coords(p));
        if (node_index(tk) < 0 || d.count(tk)) continue;
        const Scalar fs = flat_coeff(src, p, nu);
        const Scalar fd = flat_coeff(dst, p, nu + delta);
        if (fs.is_zero() || fd.is_zero()) continue;
        d[tk] = d[k] * fd / fs;
        comp[tk] = cid;
        queue.push_back(tk);
      }
    }
  }

  // Verify every window equation: F_src(p,nu) d_tau = d_nu F_dst(p,nu+delta).
  for (const auto& k : nodes) {
    const Scalar nu = lat.at(k);
    for (const auto& p : probes) {
      auto tk = vadd(k, *lat.coords(p));
      const Scalar fs = flat_coeff(src, p, nu);
      const Scalar fd = flat_coeff(dst, p, nu + delta);
      if (node_index(tk) < 0) {
        // Target outside the window (or outside the support on both sides):
        // the equation is vacuous only when both coefficients vanish or the
        // target is genuinely off-window.
        const Scalar tnu = nu + p;
        const bool s_sup = src.index_supported(tnu);
        const bool d_sup = dst.index_supported(tnu + delta);
        if (!s_sup && !d_sup) continue; // both drop the target
        if (s_sup != d_sup && !(s_sup ? fs : fd).is_zero()) {
          res.obstruction = "weight-space dimensions differ at index " + tnu.str_compact();
          return res;
        }
        continue; // off-window, no constraint available
      }
      const Scalar lhs = fs * d.at(tk);
      const Scalar rhs = d.at(k) * fd;
      if (!(lhs == rhs)) {
        res.obstruction = "inconsistent constraint at probe " + p.str_compact() + ", index " +
                          nu.str_compact() + ": " + lhs.str() + " != " + rhs.str();
        return res;
      }
    }
  }

  DiagonalMap map;
  map.shift = *shift;
  map.d = std::move(d);

  // Closed-form recognition, up to one free factor per gauge component.
  auto all_equal = [&](auto&& value_of) -> bool {
    std::map<int, Scalar> common;
    for (const auto& [k, dk] : map.d) {
      auto v = value_of(k, dk);
      if (!v) return false;
      auto [it, fresh] = common.emplace(comp.at(k), *v);
      if (!fresh && !(it->second == *v)) return false;
    }
    return true;
  };
  const bool all_one = [&] {
    for (const auto& [k, dk] : map.d)
      if (!dk.is_one()) return false;
    return true;
  }();
  if (all_one) {
    map.closed_form = "d = 1";
  } else if (all_equal([&](const std::vector<Int>&, const Scalar& dk) {
               return std::optional<Scalar>(dk);
             })) {
    map.closed_form = "d = const";
  } else if (all_equal([&](const std::vector<Int>& k, const Scalar& dk) -> std::optional<Scalar> {
               const Scalar w = src.weight_offset() + lat.at(k);
               if (w.is_zero()) return std::nullopt;
               return dk / w;
             })) {
    map.closed_form = "d[nu] ~ a+nu";
  } else if (all_equal([&](const std::vector<Int>& k, const Scalar& dk) -> std::optional<Scalar> {
               const Scalar w = src.weight_offset() + lat.at(k);
               return dk * w;
             })) {
    map.closed_form = "d[nu] ~ 1/(a+nu)";
  }

  res.map = std::move(map);
  return res;
}

ModuleFamily simple_subquotient(const ModuleFamily& fam) {
  const Lattice& lat = fam.lattice();
  switch (fam.kind()) {
    case FamilyKind::Aab:
      if (lat.contains(fam.a()) && (fam.b().is_zero() || fam.b().is_one()))
        return ModuleFamily::AabPrime(lat, fam.b());
      return fam;
    case FamilyKind::Aa: return ModuleFamily::AabPrime(lat, lat.field().one());
    case FamilyKind::Ba: return ModuleFamily::AabPrime(lat, lat.field().zero());
    case FamilyKind::PrimePlusLine: return ModuleFamily::AabPrime(lat, lat.field().zero());
    default: return fam;
  }
}

ModuleFamily restrict_family(const ModuleFamily& fam, const Lattice& sub, const Scalar& x0) {
  const Lattice& lat = fam.lattice();
  if (!lat.contains_lattice(sub))
    fail(Errc::NotASublattice, "restriction target is not a sublattice");
  if (!lat.contains(x0)) fail(Errc::NotMember, "offset x0 must be a lattice member");
  const bool on_base = sub.contains(x0);
  switch (fam.kind()) {
    case FamilyKind::Aab:
      return ModuleFamily::Aab(sub, fam.a() + x0, fam.b());
    case FamilyKind::Aa:
      if (on_base) return ModuleFamily::Aa(sub, fam.a());
      return ModuleFamily::Aab(sub, x0, lat.field().one());
    case FamilyKind::Ba:
      if (on_base) return ModuleFamily::Ba(sub, fam.a());
      return ModuleFamily::Aab(sub, x0, lat.field().zero());
    case FamilyKind::AabPrime:
      if (on_base) return ModuleFamily::AabPrime(sub, fam.b());
      return ModuleFamily::Aab(sub, x0, fam.b());
    case FamilyKind::PrimePlusLine:
      if (on_base) return ModuleFamily::prime_plus_line(sub);
      return ModuleFamily::Aab(sub, x0, lat.field().zero());
    case FamilyKind::TrivialLine:
      if (on_base) return ModuleFamily::trivial_line(sub);
      fail(Errc::InvalidArgument, "restriction of the trivial line along x0 not in sub is zero");
  }
  fail(Errc::InvalidArgument, "unreachable");
}

std::vector<std::vector<Int>> box_window(const Lattice& lat, int radius) {
  std::vector<std::vector<Int>> out;
  const int r = lat.rank();
  std::vector<Int> cur(r, Int(0));
  std::function<void(int)> rec = [&](int i) {
    if (i == r) {
      out.push_back(cur);
      return;
    }
    for (long v = -radius; v <= radius; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

} // namespace vir
