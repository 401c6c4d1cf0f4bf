#include "vir/classifier.hpp"

#include "vir/linsolve.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace vir {

namespace {

using Key = std::vector<Int>;

Key kadd(const Key& a, const Key& b) {
  Key r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool is_zero_key(const Key& k) {
  for (const auto& v : k)
    if (v != 0) return false;
  return true;
}

// Folded view of the even sector: when the offset is a lattice member its
// coordinates are absorbed into the window keys, so the index scalar of a key
// is the actual weight and the residual offset is zero.
struct EvenView {
  Lattice lat;
  Field F;
  Scalar a;     // residual offset
  bool folded = false;
  std::vector<Scalar> probes;
  std::vector<Key> pc;
  std::map<Key, bool> win;
  std::map<std::pair<int, Key>, Scalar> f;
  std::vector<Key> present;

  Scalar idx(const Key& k) const { return lat.at(k); }
  Scalar weight(const Key& k) const { return a + lat.at(k); }
  bool in_window(const Key& k) const { return win.count(k) > 0; }
  bool is_present(const Key& k) const {
    auto it = win.find(k);
    return it != win.end() && it->second;
  }
  const Scalar* entry(int i, const Key& k) const {
    auto it = f.find({i, k});
    return it == f.end() ? nullptr : &it->second;
  }
};

struct OddView {
  Scalar alpha;
  std::vector<Scalar> gprobes;
  std::vector<Key> gc; // coords of eta - alpha
  Key c2a;             // coords of 2*alpha
  std::map<Key, bool> win;
  std::map<std::pair<int, Key>, Scalar> fw;  // even probes acting on the odd sector
  std::map<std::pair<int, Key>, Scalar> gv;  // gprobe: even -> odd
  std::map<std::pair<int, Key>, Scalar> gw;  // gprobe: odd -> even
  std::vector<Key> present;

  bool is_present(const Key& k) const {
    auto it = win.find(k);
    return it != win.end() && it->second;
  }
};

EvenView make_even_view(const ActionTable& t) {
  EvenView v;
  v.lat = t.lattice;
  v.F = t.lattice.field();
  if (t.probes.size() < 2) fail(Errc::WindowTooSmall, "at least two probes required");
  {
    std::vector<Scalar> sorted;
    for (const auto& p : t.probes) {
      if (p.is_zero()) fail(Errc::InvalidArgument, "probes must be nonzero");
      for (const auto& q : sorted)
        if (q == p) fail(Errc::InvalidArgument, "probes must be distinct");
      sorted.push_back(p);
    }
  }
  v.probes = t.probes;
  for (const auto& p : t.probes) {
    auto k = v.lat.coords(p);
    if (!k) fail(Errc::NotMember, "probe " + p.str_compact() + " is not a lattice member");
    v.pc.push_back(*k);
  }
  Key fold(v.lat.rank(), Int(0));
  auto off = v.lat.coords(t.offset);
  if (off) {
    fold = *off;
    v.a = v.F.zero();
    v.folded = true;
  } else {
    v.a = t.offset;
  }
  for (const auto& [k, present] : t.window) v.win.emplace(kadd(k, fold), present);
  for (const auto& [pk, val] : t.f) v.f.emplace(std::make_pair(pk.first, kadd(pk.second, fold)), val);
  int npresent = 0;
  for (const auto& [k, present] : v.win)
    if (present) {
      v.present.push_back(k);
      ++npresent;
    }
  if (npresent < 3) fail(Errc::WindowTooSmall, "at least three present weights required");

  // Completeness of the entry table over the window.
  for (const auto& [pk, val] : v.f) {
    auto src = v.win.find(pk.second);
    if (src == v.win.end() || !src->second)
      fail(Errc::InvalidArgument, "table entry from a weight outside the window");
    const Key tgt = kadd(pk.second, v.pc[pk.first]);
    auto ti = v.win.find(tgt);
    if (ti == v.win.end() || !ti->second)
      fail(Errc::InvalidArgument, "table entry into a missing weight space");
  }
  for (const auto& k : v.present)
    for (size_t i = 0; i < v.pc.size(); ++i) {
      const Key tgt = kadd(k, v.pc[i]);
      if (v.is_present(tgt) && !v.entry(static_cast<int>(i), k))
        fail(Errc::WindowNotClosed, "missing entry for a probe shift inside the window");
    }
  return v;
}

OddView make_odd_view(const ActionTable& t, const EvenView& ev) {
  OddView o;
  o.alpha = t.alpha;
  const Scalar two_alpha = ev.F.of_int(2) * t.alpha;
  auto c2a = ev.lat.coords(two_alpha);
  if (!c2a) fail(Errc::InvalidCoset, "2*alpha must be a lattice member");
  o.c2a = *c2a;
  if (t.gprobes.empty()) fail(Errc::WindowTooSmall, "super tables need odd probes");
  o.gprobes = t.gprobes;
  for (const auto& g : t.gprobes) {
    auto k = ev.lat.coords(g - t.alpha);
    if (!k) fail(Errc::NotMember, "odd probe " + g.str_compact() + " is not in alpha+M");
    o.gc.push_back(*k);
  }
  Key fold(ev.lat.rank(), Int(0));
  if (ev.folded) fold = *ev.lat.coords(t.offset);
  for (const auto& [k, present] : t.wwindow) o.win.emplace(kadd(k, fold), present);
  auto fold_map = [&](const std::map<std::pair<int, Key>, Scalar>& src) {
    std::map<std::pair<int, Key>, Scalar> dst;
    for (const auto& [pk, val] : src)
      dst.emplace(std::make_pair(pk.first, kadd(pk.second, fold)), val);
    return dst;
  };
  o.fw = fold_map(t.fw);
  o.gv = fold_map(t.gv);
  o.gw = fold_map(t.gw);
  for (const auto& [k, present] : o.win)
    if (present) o.present.push_back(k);
  if (o.present.empty()) fail(Errc::WindowTooSmall, "odd window has no weights");

  auto present_odd = [&](const Key& k) { return o.is_present(k); };
  // Completeness checks across the four tables.
  for (const auto& k : o.present) {
    for (size_t i = 0; i < ev.pc.size(); ++i) {
      const Key tgt = kadd(k, ev.pc[i]);
      if (present_odd(tgt) && !o.fw.count({static_cast<int>(i), k}))
        fail(Errc::WindowNotClosed, "missing fw entry inside the window");
    }
    for (size_t j = 0; j < o.gc.size(); ++j) {
      const Key tgt = kadd(kadd(k, o.gc[j]), o.c2a);
      if (ev.is_present(tgt) && !o.gw.count({static_cast<int>(j), k}))
        fail(Errc::WindowNotClosed, "missing gw entry inside the window");
    }
  }
  for (const auto& k : ev.present)
    for (size_t j = 0; j < o.gc.size(); ++j) {
      const Key tgt = kadd(k, o.gc[j]);
      if (present_odd(tgt) && !o.gv.count({static_cast<int>(j), k}))
        fail(Errc::WindowNotClosed, "missing gv entry inside the window");
    }
  return o;
}

// The window graph (all declared weights, including dim-0 ones) must be
// connected under probe shifts; islands would leave gauges unrelatable for
// every candidate. Zero-valued entries may still split a candidate's spanning
// tree, which the per-candidate fit handles with independent roots followed by
// full verification.
void check_connected_even(const EvenView& v) {
  if (v.win.empty()) fail(Errc::WindowTooSmall, "empty window");
  std::set<Key> all;
  for (const auto& [k, present] : v.win) all.insert(k);
  std::set<Key> seen{*all.begin()};
  std::vector<Key> queue{*all.begin()};
  while (!queue.empty()) {
    Key k = queue.back();
    queue.pop_back();
    for (const auto& pcv : v.pc) {
      for (int sgn : {1, -1}) {
        Key t = k;
        for (size_t i = 0; i < t.size(); ++i) t[i] += sgn * pcv[i];
        if (all.count(t) && !seen.count(t)) {
          seen.insert(t);
          queue.push_back(t);
        }
      }
    }
  }
  if (seen.size() != all.size())
    fail(Errc::DisconnectedWindow, "window is not connected under probe shifts");
}

// ---------------------------------------------------------------------------
// Generic gauge fitting over the even sector

using Pred = std::function<Scalar(int, const Key&)>; // probe index, source key -> coefficient
using EdgeOk = std::function<bool(int, const Key&)>;

std::map<Key, Scalar> propagate_even(const EvenView& v, const Pred& pred, const EdgeOk& edge_ok,
                                     std::map<Key, Scalar> gauge) {
  for (const auto& root : v.present) {
    if (gauge.count(root)) continue;
    gauge.emplace(root, v.F.one());
    std::vector<Key> queue{root};
    while (!queue.empty()) {
      Key k = queue.back();
      queue.pop_back();
      for (size_t i = 0; i < v.pc.size(); ++i) {
        const int pi = static_cast<int>(i);
        // forward edge k -> k + p
        const Key fwd = kadd(k, v.pc[i]);
        if (v.is_present(fwd) && !gauge.count(fwd) && edge_ok(pi, k)) {
          const Scalar* e = v.entry(pi, k);
          const Scalar F = pred(pi, k);
          if (e && !e->is_zero() && !F.is_zero()) {
            gauge.emplace(fwd, gauge.at(k) * F / *e);
            queue.push_back(fwd);
          }
        }
        // backward edge (k - p) -> k
        Key back(k.size());
        for (size_t t = 0; t < k.size(); ++t) back[t] = k[t] - v.pc[i][t];
        if (v.is_present(back) && !gauge.count(back) && edge_ok(pi, back)) {
          const Scalar* e = v.entry(pi, back);
          const Scalar F = pred(pi, back);
          if (e && !e->is_zero() && !F.is_zero()) {
            gauge.emplace(back, gauge.at(k) * *e / F);
            queue.push_back(back);
          }
        }
      }
    }
  }
  return gauge;
}

// Verify f(p, k) * s_target = F(p, k) * s_source over every entry.
std::optional<std::string> verify_even(const EvenView& v, const Pred& pred,
                                       const std::map<Key, Scalar>& gauge) {
  for (const auto& [pk, val] : v.f) {
    const Key tgt = kadd(pk.second, v.pc[pk.first]);
    const Scalar lhs = val * gauge.at(tgt);
    const Scalar rhs = pred(pk.first, pk.second) * gauge.at(pk.second);
    if (!(lhs == rhs))
      return "decisive entry f(" + v.probes[pk.first].str_compact() + ", " +
             v.idx(pk.second).str_compact() + ") = " + val.str_compact();
  }
  return std::nullopt;
}

// Candidate values for the slope parameter b of the Aab pattern W + p*b,
// where W = weight(source). Gauge-invariant cycle relations between two
// probes give quadratics in b; differences of adjacent quadratics are linear.
std::vector<Scalar> slope_candidates(const EvenView& v) {
  std::vector<Scalar> cands;
  auto push = [&](const Scalar& s) {
    for (const auto& c : cands)
      if (c == s) return;
    cands.push_back(s);
  };
  // The reducible slopes first: they are the cases whose cycle relations
  // degenerate, and trying them in a fixed order keeps the verdict invariant
  // under gauge scrambling (b = 0 and b = 1 tables are isomorphic when the
  // offset is not a lattice member).
  push(v.F.zero());
  push(v.F.one());
  // Zero entries survive scrambling and pin the slope exactly:
  // W(nu) + p*b = 0.
  for (const auto& [pk, val] : v.f)
    if (val.is_zero()) push(-(v.weight(pk.second) / v.probes[pk.first]));
  // Direct reads (exact for unscrambled tables).
  int taken = 0;
  for (const auto& [pk, val] : v.f) {
    if (taken >= 3) break;
    if (val.is_zero()) continue;
    push((val - v.weight(pk.second)) / v.probes[pk.first]);
    ++taken;
  }
  // Cycle eliminations.
  struct Quad {
    Scalar a2, a1, a0;
  };
  for (size_t i = 0; i + 1 < v.pc.size(); ++i) {
    for (size_t j = i + 1; j < v.pc.size(); ++j) {
      std::vector<Quad> quads;
      const Scalar p = v.probes[i], q = v.probes[j];
      for (const auto& k : v.present) {
        const Key kp = kadd(k, v.pc[i]);
        const Key kq = kadd(k, v.pc[j]);
        const Key kpq = kadd(kp, v.pc[j]);
        if (!v.is_present(kp) || !v.is_present(kq) || !v.is_present(kpq)) continue;
        const Scalar* e1 = v.entry(static_cast<int>(i), k);   // f(p, k)
        const Scalar* e2 = v.entry(static_cast<int>(j), kp);  // f(q, k+p)
        const Scalar* e3 = v.entry(static_cast<int>(j), k);   // f(q, k)
        const Scalar* e4 = v.entry(static_cast<int>(i), kq);  // f(p, k+q)
        if (!e1 || !e2 || !e3 || !e4) continue;
        if (e3->is_zero() || e4->is_zero()) continue; // skipped, enforced at verification
        const Scalar K = (*e1 * *e2) / (*e3 * *e4);
        const Scalar W = v.weight(k);
        const Scalar one = v.F.one();
        Quad Q;
        Q.a2 = (K - one) * p * q;
        Q.a1 = K * (W * p + (W + q) * q) - (W * q + (W + p) * p);
        Q.a0 = K * W * (W + q) - W * (W + p);
        if (Q.a2.is_zero()) {
          if (!Q.a1.is_zero()) push(-(Q.a0 / Q.a1));
        } else {
          quads.push_back(Q);
        }
      }
      for (size_t t = 0; t + 1 < quads.size(); ++t) {
        const Quad& A = quads[t];
        const Quad& B = quads[t + 1];
        const Scalar l1 = A.a1 * B.a2 - B.a1 * A.a2;
        const Scalar l0 = A.a0 * B.a2 - B.a0 * A.a2;
        if (!l1.is_zero()) push(-(l0 / l1));
      }
    }
  }
  return cands;
}

struct EvenFit {
  bool ok = false;
  std::string reject;
  ModuleFamily fam;
  std::map<Key, Scalar> gauge;
};

EvenFit fit_aab(const EvenView& v) {
  EvenFit out;
  for (const auto& [k, present] : v.win)
    if (!present) {
      out.reject = "Aab: window declares a missing weight space";
      return out;
    }
  auto edge_all = [](int, const Key&) { return true; };
  for (const auto& b : slope_candidates(v)) {
    Pred pred = [&](int i, const Key& k) { return v.weight(k) + v.probes[i] * b; };
    auto gauge = propagate_even(v, pred, edge_all, {});
    if (auto bad = verify_even(v, pred, gauge)) {
      out.reject = "Aab b=" + b.str_compact() + ": " + *bad;
      continue;
    }
    out.ok = true;
    out.fam = ModuleFamily::Aab(v.lat, v.a, b);
    out.gauge = std::move(gauge);
    return out;
  }
  if (out.reject.empty()) out.reject = "Aab: no slope candidate";
  return out;
}

// Recover (s_0, x) from linear rows lhs_i * s0 + m_i * x = r_i via the exact
// solver; returns nullopt when inconsistent or s0 = 0.
std::optional<std::pair<Scalar, Scalar>> solve_special(const Field& F,
                                                       const std::vector<Scalar>& c0,
                                                       const std::vector<Scalar>& c1,
                                                       const std::vector<Scalar>& rhs) {
  auto sol = solve_columns(F, {c0, c1}, rhs);
  if (!sol) return std::nullopt;
  if ((*sol)[0].is_zero()) return std::nullopt;
  // The solver sets free variables to zero; re-verify the rows to guard
  // against an underdetermined fit.
  for (size_t i = 0; i < rhs.size(); ++i)
    if (!(c0[i] * (*sol)[0] + c1[i] * (*sol)[1] == rhs[i])) return std::nullopt;
  return std::make_pair((*sol)[0], (*sol)[1]);
}

EvenFit fit_aa(const EvenView& v) {
  EvenFit out;
  out.reject = "Aa: ";
  if (!v.folded && !v.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(v.lat.rank(), Int(0));
  if (!v.is_present(zero)) {
    out.reject += "zero weight not in the window";
    return out;
  }
  for (const auto& [k, present] : v.win)
    if (!present) {
      out.reject += "window declares a missing weight space";
      return out;
    }
  // Interior propagation: edges out of 0 carry the unknown parameter.
  Pred interior = [&](int i, const Key& k) { return v.idx(k) + v.probes[i]; };
  auto edge = [&](int, const Key& src) { return !is_zero_key(src); };
  auto gauge = propagate_even(v, interior, edge, {{zero, v.F.zero()}});
  gauge.erase(zero);
  // Recover s_0 and t_0 = a * s_0 from the rows out of the zero weight:
  // f(p,0) s_p = p^2 s_0 + p t_0.
  std::vector<Scalar> c0, c1, rhs;
  for (size_t i = 0; i < v.pc.size(); ++i) {
    const Scalar* e = v.entry(static_cast<int>(i), zero);
    if (!e || !gauge.count(v.pc[i])) continue;
    const Scalar& p = v.probes[i];
    c0.push_back(p * p);
    c1.push_back(p);
    rhs.push_back(*e * gauge.at(v.pc[i]));
  }
  if (c0.size() < 2) {
    out.reject += "special weight rows unavailable";
    return out;
  }
  auto s0a = solve_special(v.F, c0, c1, rhs);
  if (!s0a) {
    out.reject += "special rows inconsistent";
    return out;
  }
  const Scalar a = s0a->second / s0a->first;
  gauge.emplace(zero, s0a->first);
  Pred pred = [&](int i, const Key& k) {
    if (is_zero_key(k)) return v.probes[i] * (v.probes[i] + a);
    return v.idx(k) + v.probes[i];
  };
  if (auto bad = verify_even(v, pred, gauge)) {
    out.reject += *bad;
    return out;
  }
  out.ok = true;
  out.fam = ModuleFamily::Aa(v.lat, a);
  out.gauge = std::move(gauge);
  return out;
}

EvenFit fit_ba(const EvenView& v) {
  EvenFit out;
  out.reject = "Ba: ";
  if (!v.folded && !v.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(v.lat.rank(), Int(0));
  if (!v.is_present(zero)) {
    out.reject += "zero weight not in the window";
    return out;
  }
  for (const auto& [k, present] : v.win)
    if (!present) {
      out.reject += "window declares a missing weight space";
      return out;
    }
  Pred interior = [&](int, const Key& k) { return v.idx(k); };
  auto edge = [&](int i, const Key& src) {
    return !is_zero_key(src) && !is_zero_key(kadd(src, v.pc[i]));
  };
  auto gauge = propagate_even(v, interior, edge, {{zero, v.F.zero()}});
  gauge.erase(zero);
  // Rows into zero weight: f(p,-p) s_0 + p s_{-p} a = -p^2 s_{-p}.
  std::vector<Scalar> c0, c1, rhs;
  for (size_t i = 0; i < v.pc.size(); ++i) {
    Key mp(v.lat.rank());
    for (size_t t = 0; t < mp.size(); ++t) mp[t] = -v.pc[i][t];
    const Scalar* e = v.entry(static_cast<int>(i), mp);
    if (!e || !gauge.count(mp)) continue;
    const Scalar& p = v.probes[i];
    c0.push_back(*e);
    c1.push_back(p * gauge.at(mp));
    rhs.push_back(-(p * p) * gauge.at(mp));
  }
  if (c0.size() < 2) {
    out.reject += "special weight rows unavailable";
    return out;
  }
  auto s0a = solve_special(v.F, c0, c1, rhs);
  if (!s0a) {
    out.reject += "special rows inconsistent";
    return out;
  }
  const Scalar a = s0a->second;
  gauge.emplace(zero, s0a->first);
  Pred pred = [&](int i, const Key& k) {
    if (is_zero_key(kadd(k, v.pc[i]))) return -v.probes[i] * (v.probes[i] + a);
    return v.idx(k);
  };
  if (auto bad = verify_even(v, pred, gauge)) {
    out.reject += *bad;
    return out;
  }
  out.ok = true;
  out.fam = ModuleFamily::Ba(v.lat, a);
  out.gauge = std::move(gauge);
  return out;
}

EvenFit fit_prime_plus_line(const EvenView& v) {
  EvenFit out;
  out.reject = "PrimePlusLine: ";
  if (!v.folded && !v.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(v.lat.rank(), Int(0));
  if (!v.is_present(zero)) {
    out.reject += "zero weight not in the window";
    return out;
  }
  for (const auto& [k, present] : v.win)
    if (!present) {
      out.reject += "window declares a missing weight space";
      return out;
    }
  Pred pred = [&](int i, const Key& k) {
    if (is_zero_key(k) || is_zero_key(kadd(k, v.pc[i]))) return v.F.zero();
    return v.idx(k);
  };
  auto edge_all = [](int, const Key&) { return true; };
  auto gauge = propagate_even(v, pred, edge_all, {});
  if (auto bad = verify_even(v, pred, gauge)) {
    out.reject += *bad;
    return out;
  }
  out.ok = true;
  out.fam = ModuleFamily::prime_plus_line(v.lat);
  out.gauge = std::move(gauge);
  return out;
}

EvenFit fit_aab_prime(const EvenView& v) {
  EvenFit out;
  out.reject = "AabPrime: ";
  if (!v.folded && !v.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(v.lat.rank(), Int(0));
  auto z = v.win.find(zero);
  if (z == v.win.end() || z->second) {
    out.reject += "no missing weight space at zero";
    return out;
  }
  for (const auto& [k, present] : v.win)
    if (!present && k != zero) {
      out.reject += "missing weight space away from zero";
      return out;
    }
  for (const Scalar& b : {v.F.zero(), v.F.one()}) {
    Pred pred = [&](int i, const Key& k) {
      return b.is_zero() ? v.idx(k) : v.idx(k) + v.probes[i];
    };
    auto edge_all = [](int, const Key&) { return true; };
    auto gauge = propagate_even(v, pred, edge_all, {});
    if (auto bad = verify_even(v, pred, gauge)) {
      out.reject = "AabPrime b=" + b.str_compact() + ": " + *bad;
      continue;
    }
    out.ok = true;
    out.fam = ModuleFamily::AabPrime(v.lat, b);
    out.gauge = std::move(gauge);
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Super fitting: combined even/odd graph

struct SuperPred {
  Pred fe;  // even probe on even sector
  Pred fo;  // even probe on odd sector
  Pred geo; // odd probe: even -> odd
  Pred goe; // odd probe: odd -> even
};

struct SuperFitState {
  std::map<Key, Scalar> se, so;
};

// Node = (sector, key); sector 0 = even, 1 = odd.
void propagate_super(const EvenView& ev, const OddView& ov, const SuperPred& pred,
                     const EdgeOk& even_src_ok, SuperFitState& st) {
  auto has = [&](int sec, const Key& k) {
    return sec == 0 ? st.se.count(k) > 0 : st.so.count(k) > 0;
  };
  auto val = [&](int sec, const Key& k) -> Scalar& { return sec == 0 ? st.se[k] : st.so[k]; };
  auto run_bfs = [&](int sec0, const Key& root) {
    std::vector<std::pair<int, Key>> queue{{sec0, root}};
    while (!queue.empty()) {
      auto [sec, k] = queue.back();
      queue.pop_back();
      const Scalar g = val(sec, k);
      auto try_edge = [&](int tsec, const Key& tkey, const Scalar* e, const Scalar& F,
                          bool forward) {
        if (!e || e->is_zero() || F.is_zero() || has(tsec, tkey)) return;
        val(tsec, tkey) = forward ? g * F / *e : g * *e / F;
        queue.push_back({tsec, tkey});
      };
      if (sec == 0) {
        for (size_t i = 0; i < ev.pc.size(); ++i) {
          const int pi = static_cast<int>(i);
          const Key fwd = kadd(k, ev.pc[i]);
          if (ev.is_present(fwd) && even_src_ok(pi, k))
            try_edge(0, fwd, ev.entry(pi, k), pred.fe(pi, k), true);
        }
        for (size_t j = 0; j < ov.gc.size(); ++j) {
          const int pj = static_cast<int>(j);
          const Key tgt = kadd(k, ov.gc[j]);
          if (ov.is_present(tgt)) {
            auto it = ov.gv.find({pj, k});
            if (it != ov.gv.end() && even_src_ok(-1, k))
              try_edge(1, tgt, &it->second, pred.geo(pj, k), true);
          }
        }
      } else {
        for (size_t i = 0; i < ev.pc.size(); ++i) {
          const int pi = static_cast<int>(i);
          const Key fwd = kadd(k, ev.pc[i]);
          if (ov.is_present(fwd)) {
            auto it = ov.fw.find({pi, k});
            if (it != ov.fw.end()) try_edge(1, fwd, &it->second, pred.fo(pi, k), true);
          }
        }
        for (size_t j = 0; j < ov.gc.size(); ++j) {
          const int pj = static_cast<int>(j);
          const Key tgt = kadd(kadd(k, ov.gc[j]), ov.c2a);
          if (ev.is_present(tgt)) {
            auto it = ov.gw.find({pj, k});
            if (it != ov.gw.end()) try_edge(0, tgt, &it->second, pred.goe(pj, k), true);
          }
        }
      }
      // Backward traversal: scan candidate sources pointing at (sec, k).
      if (sec == 0) {
        for (size_t i = 0; i < ev.pc.size(); ++i) {
          const int pi = static_cast<int>(i);
          Key src(k.size());
          for (size_t t = 0; t < k.size(); ++t) src[t] = k[t] - ev.pc[i][t];
          if (ev.is_present(src) && even_src_ok(pi, src) && !has(0, src)) {
            const Scalar* e = ev.entry(pi, src);
            const Scalar F = pred.fe(pi, src);
            if (e && !e->is_zero() && !F.is_zero()) {
              val(0, src) = g * *e / F;
              queue.push_back({0, src});
            }
          }
        }
        for (size_t j = 0; j < ov.gc.size(); ++j) {
          const int pj = static_cast<int>(j);
          Key src(k.size());
          for (size_t t = 0; t < k.size(); ++t) src[t] = k[t] - ov.gc[j][t] - ov.c2a[t];
          if (ov.is_present(src) && !has(1, src)) {
            auto it = ov.gw.find({pj, src});
            const Scalar F = pred.goe(pj, src);
            if (it != ov.gw.end() && !it->second.is_zero() && !F.is_zero()) {
              val(1, src) = g * it->second / F;
              queue.push_back({1, src});
            }
          }
        }
      } else {
        for (size_t i = 0; i < ev.pc.size(); ++i) {
          const int pi = static_cast<int>(i);
          Key src(k.size());
          for (size_t t = 0; t < k.size(); ++t) src[t] = k[t] - ev.pc[i][t];
          if (ov.is_present(src) && !has(1, src)) {
            auto it = ov.fw.find({pi, src});
            const Scalar F = pred.fo(pi, src);
            if (it != ov.fw.end() && !it->second.is_zero() && !F.is_zero()) {
              val(1, src) = g * it->second / F;
              queue.push_back({1, src});
            }
          }
        }
        for (size_t j = 0; j < ov.gc.size(); ++j) {
          const int pj = static_cast<int>(j);
          Key src(k.size());
          for (size_t t = 0; t < k.size(); ++t) src[t] = k[t] - ov.gc[j][t];
          if (ev.is_present(src) && even_src_ok(-1, src) && !has(0, src)) {
            auto it = ov.gv.find({pj, src});
            const Scalar F = pred.geo(pj, src);
            if (it != ov.gv.end() && !it->second.is_zero() && !F.is_zero()) {
              val(0, src) = g * it->second / F;
              queue.push_back({0, src});
            }
          }
        }
      }
    }
  };
  for (const auto& k : ev.present)
    if (!has(0, k)) {
      val(0, k) = ev.F.one();
      run_bfs(0, k);
    }
  for (const auto& k : ov.present)
    if (!has(1, k)) {
      val(1, k) = ev.F.one();
      run_bfs(1, k);
    }
}

std::optional<std::string> verify_super(const EvenView& ev, const OddView& ov,
                                        const SuperPred& pred, const SuperFitState& st) {
  for (const auto& [pk, val] : ev.f) {
    const Key tgt = kadd(pk.second, ev.pc[pk.first]);
    if (!(val * st.se.at(tgt) == pred.fe(pk.first, pk.second) * st.se.at(pk.second)))
      return "decisive even entry f(" + ev.probes[pk.first].str_compact() + ", " +
             ev.idx(pk.second).str_compact() + ")";
  }
  for (const auto& [pk, val] : ov.fw) {
    const Key tgt = kadd(pk.second, ev.pc[pk.first]);
    if (!(val * st.so.at(tgt) == pred.fo(pk.first, pk.second) * st.so.at(pk.second)))
      return "decisive odd entry fw(" + ev.probes[pk.first].str_compact() + ", " +
             (ov.alpha + ev.idx(pk.second)).str_compact() + ")";
  }
  for (const auto& [pk, val] : ov.gv) {
    const Key tgt = kadd(pk.second, ov.gc[pk.first]);
    if (!(val * st.so.at(tgt) == pred.geo(pk.first, pk.second) * st.se.at(pk.second)))
      return "decisive entry gv(" + ov.gprobes[pk.first].str_compact() + ", " +
             ev.idx(pk.second).str_compact() + ")";
  }
  for (const auto& [pk, val] : ov.gw) {
    const Key tgt = kadd(kadd(pk.second, ov.gc[pk.first]), ov.c2a);
    if (!(val * st.se.at(tgt) == pred.goe(pk.first, pk.second) * st.so.at(pk.second)))
      return "decisive entry gw(" + ov.gprobes[pk.first].str_compact() + ", " +
             (ov.alpha + ev.idx(pk.second)).str_compact() + ")";
  }
  return std::nullopt;
}

struct SuperFit {
  bool ok = false;
  std::string reject;
  SuperVerdict verdict;
  std::map<Key, Scalar> gauge, gauge_odd;
};

SuperFit fit_saab(const EvenView& ev, const OddView& ov) {
  SuperFit out;
  const Field& F = ev.F;
  const Scalar half = F.of(Rat(1, 2));
  auto even_ok = [](int, const Key&) { return true; };
  for (const auto& b : slope_candidates(ev)) {
    SuperPred pred;
    pred.fe = [&](int i, const Key& k) { return ev.weight(k) + ev.probes[i] * b; };
    pred.fo = [&](int i, const Key& k) {
      return ev.a + ov.alpha + ev.idx(k) + ev.probes[i] * (b - half);
    };
    pred.geo = [&](int, const Key&) { return F.one(); };
    pred.goe = [&](int j, const Key& k) {
      return ev.a + ov.alpha + ev.idx(k) + F.of_int(2) * ov.gprobes[j] * (b - half);
    };
    SuperFitState st;
    propagate_super(ev, ov, pred, even_ok, st);
    if (auto bad = verify_super(ev, ov, pred, st)) {
      out.reject = "SAab b=" + b.str_compact() + ": " + *bad;
      continue;
    }
    out.ok = true;
    out.verdict = {SuperFamilyKind::SAab, ev.a, b};
    out.gauge = std::move(st.se);
    out.gauge_odd = std::move(st.so);
    return out;
  }
  if (out.reject.empty()) out.reject = "SAab: no slope candidate";
  return out;
}

SuperFit fit_saa(const EvenView& ev, const OddView& ov) {
  SuperFit out;
  out.reject = "SAa: ";
  const Field& F = ev.F;
  const Scalar half = F.of(Rat(1, 2));
  if (!ev.folded && !ev.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(ev.lat.rank(), Int(0));
  if (!ev.is_present(zero)) {
    out.reject += "zero weight not in the window";
    return out;
  }
  SuperPred interior;
  interior.fe = [&](int i, const Key& k) { return ev.idx(k) + ev.probes[i]; };
  interior.fo = [&](int i, const Key& k) {
    return ov.alpha + ev.idx(k) + half * ev.probes[i];
  };
  interior.geo = [&](int, const Key&) { return F.one(); };
  interior.goe = [&](int j, const Key& k) { return ov.alpha + ev.idx(k) + ov.gprobes[j]; };
  auto skip_zero_src = [&](int, const Key& src) { return !is_zero_key(src); };
  SuperFitState st;
  st.se.emplace(zero, F.zero());
  propagate_super(ev, ov, interior, skip_zero_src, st);
  st.se.erase(zero);
  std::vector<Scalar> c0, c1, rhs;
  for (size_t i = 0; i < ev.pc.size(); ++i) {
    const Scalar* e = ev.entry(static_cast<int>(i), zero);
    if (!e || !st.se.count(ev.pc[i])) continue;
    const Scalar& p = ev.probes[i];
    c0.push_back(p * p);
    c1.push_back(p);
    rhs.push_back(*e * st.se.at(ev.pc[i]));
  }
  if (c0.size() < 2) {
    out.reject += "special weight rows unavailable";
    return out;
  }
  auto s0a = solve_special(F, c0, c1, rhs);
  if (!s0a) {
    out.reject += "special rows inconsistent";
    return out;
  }
  const Scalar a = s0a->second / s0a->first;
  st.se.emplace(zero, s0a->first);
  SuperPred pred = interior;
  pred.fe = [&, a](int i, const Key& k) {
    if (is_zero_key(k)) return ev.probes[i] * (ev.probes[i] + a);
    return ev.idx(k) + ev.probes[i];
  };
  pred.geo = [&, a](int j, const Key& k) {
    if (is_zero_key(k)) return F.of_int(2) * ov.gprobes[j] + a;
    return F.one();
  };
  if (auto bad = verify_super(ev, ov, pred, st)) {
    out.reject += *bad;
    return out;
  }
  out.ok = true;
  out.verdict = {SuperFamilyKind::SAa, a, F.zero()};
  out.gauge = std::move(st.se);
  out.gauge_odd = std::move(st.so);
  return out;
}

SuperFit fit_sba(const EvenView& ev, const OddView& ov) {
  SuperFit out;
  out.reject = "SBa: ";
  const Field& F = ev.F;
  const Scalar half = F.of(Rat(1, 2));
  if (!ev.folded && !ev.a.is_zero()) {
    out.reject += "offset is not a lattice member";
    return out;
  }
  const Key zero(ev.lat.rank(), Int(0));
  if (!ev.is_present(zero)) {
    out.reject += "zero weight not in the window";
    return out;
  }
  // Interior: skip every edge into or out of the even zero node (those carry
  // the parameter or vanish identically).
  SuperPred interior;
  interior.fe = [&](int i, const Key& k) {
    return is_zero_key(kadd(k, ev.pc[i])) ? F.zero() : ev.idx(k);
  };
  interior.fo = [&](int i, const Key& k) {
    return ov.alpha + ev.idx(k) + half * ev.probes[i];
  };
  interior.geo = [&](int, const Key& k) { return ev.idx(k); };
  interior.goe = [&](int j, const Key& k) {
    // zero when eta + nu = 0, i.e. the special row into w_0
    Key tgt = kadd(kadd(k, ov.gc[j]), ov.c2a);
    return is_zero_key(tgt) ? F.zero() : F.one();
  };
  auto even_ok = [](int, const Key&) { return true; };
  SuperFitState st;
  st.se.emplace(zero, F.zero());
  propagate_super(ev, ov, interior, even_ok, st);
  st.se.erase(zero);
  std::vector<Scalar> c0, c1, rhs;
  for (size_t i = 0; i < ev.pc.size(); ++i) {
    Key mp(ev.lat.rank());
    for (size_t t = 0; t < mp.size(); ++t) mp[t] = -ev.pc[i][t];
    const Scalar* e = ev.entry(static_cast<int>(i), mp);
    if (!e || !st.se.count(mp)) continue;
    const Scalar& p = ev.probes[i];
    c0.push_back(*e);
    c1.push_back(p * st.se.at(mp));
    rhs.push_back(-(p * p) * st.se.at(mp));
  }
  if (c0.size() < 2) {
    out.reject += "special weight rows unavailable";
    return out;
  }
  auto s0a = solve_special(F, c0, c1, rhs);
  if (!s0a) {
    out.reject += "special rows inconsistent";
    return out;
  }
  const Scalar a = s0a->second;
  st.se.emplace(zero, s0a->first);
  SuperPred pred = interior;
  pred.fe = [&, a](int i, const Key& k) {
    if (is_zero_key(kadd(k, ev.pc[i]))) return -ev.probes[i] * (ev.probes[i] + a);
    return ev.idx(k);
  };
  pred.goe = [&, a](int j, const Key& k) {
    Key tgt = kadd(kadd(k, ov.gc[j]), ov.c2a);
    if (is_zero_key(tgt)) return F.of_int(2) * ov.gprobes[j] + a;
    return F.one();
  };
  if (auto bad = verify_super(ev, ov, pred, st)) {
    out.reject += *bad;
    return out;
  }
  out.ok = true;
  out.verdict = {SuperFamilyKind::SBa, a, F.zero()};
  out.gauge = std::move(st.se);
  out.gauge_odd = std::move(st.so);
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

std::string SuperVerdict::str() const {
  std::string out = super_family_kind_name(kind);
  out += " a=" + a.str_compact();
  if (kind == SuperFamilyKind::SAab) out += " b=" + b.str_compact();
  return out;
}

std::string ClassificationResult::verdict_str() const {
  if (family) return "verdict: " + family->str();
  if (super_family) return "verdict: " + super_family->str();
  return "verdict: NoMatch";
}

std::string ClassificationResult::report(const ActionTable& table) const {
  std::string out = verdict_str() + "\n";
  if (no_match()) {
    for (const auto& r : rejections) out += "  " + r + "\n";
    return out;
  }
  auto gauge_line = [&](const char* head, const std::map<Key, Scalar>& g, bool odd) {
    std::string l = head;
    for (const auto& [k, val] : g) {
      Scalar idx = table.lattice.at(k);
      if (odd) idx = idx + table.alpha;
      l += " s[" + idx.str_compact() + "]=" + val.str_compact();
    }
    return l + "\n";
  };
  out += gauge_line("gauge:", gauge, false);
  if (super_family) out += gauge_line("gauge-odd:", gauge_odd, true);
  return out;
}

ClassificationResult classify(const ActionTable& table) {
  return classify_candidates(table, {FamilyKind::Aab, FamilyKind::Aa, FamilyKind::Ba,
                                     FamilyKind::PrimePlusLine, FamilyKind::AabPrime});
}

ClassificationResult classify_candidates(const ActionTable& table,
                                         const std::vector<FamilyKind>& kinds) {
  ClassificationResult res;
  EvenView ev = make_even_view(table);

  if (!table.is_super) {
    check_connected_even(ev);
    using FitFn = EvenFit (*)(const EvenView&);
    std::vector<FitFn> fits;
    for (FamilyKind k : kinds) {
      switch (k) {
        case FamilyKind::Aab: fits.push_back(fit_aab); break;
        case FamilyKind::Aa: fits.push_back(fit_aa); break;
        case FamilyKind::Ba: fits.push_back(fit_ba); break;
        case FamilyKind::PrimePlusLine: fits.push_back(fit_prime_plus_line); break;
        case FamilyKind::AabPrime: fits.push_back(fit_aab_prime); break;
        default: fail(Errc::InvalidArgument, "family has no classifier candidate");
      }
    }
    for (FitFn fn : fits) {
      EvenFit fit = fn(ev);
      if (!fit.ok) {
        res.rejections.push_back(fit.reject);
        continue;
      }
      res.family = fit.fam;
      res.gauge = std::move(fit.gauge);
      // Independent certificate through the module action.
      bool certified = true;
      for (const auto& [pk, val] : ev.f) {
        const Key tgt = kadd(pk.second, ev.pc[pk.first]);
        ModuleVector unit = ModuleVector::unit(fit.fam, ev.idx(pk.second));
        AlgebraElement lp = AlgebraElement::L(ev.lat, ev.probes[pk.first], false);
        ModuleVector got = act(fit.fam, lp, unit);
        Scalar coeff = ev.F.zero();
        auto it = got.terms().find(tgt);
        if (it != got.terms().end()) coeff = it->second;
        if (!(val * res.gauge.at(tgt) == coeff * res.gauge.at(pk.second))) {
          certified = false;
          break;
        }
      }
      res.certified = certified;
      if (!certified) {
        res.rejections.push_back(std::string(family_kind_name(fit.fam.kind())) +
                                 ": certificate failed");
        res.family.reset();
        res.gauge.clear();
        continue;
      }
      return res;
    }
    return res;
  }

  OddView ov = make_odd_view(table, ev);
  using SFitFn = SuperFit (*)(const EvenView&, const OddView&);
  const SFitFn fits[] = {fit_saab, fit_saa, fit_sba};
  for (SFitFn fn : fits) {
    SuperFit fit = fn(ev, ov);
    if (!fit.ok) {
      res.rejections.push_back(fit.reject);
      continue;
    }
    res.super_family = fit.verdict;
    res.gauge = std::move(fit.gauge);
    res.gauge_odd = std::move(fit.gauge_odd);
    // Certificate through the super module action.
    SuperAlgebra alg(ev.lat, ov.alpha, SuperVariant::NS);
    SuperFamily sfam;
    switch (fit.verdict.kind) {
      case SuperFamilyKind::SAab:
        sfam = SuperFamily::SAab(alg, fit.verdict.a, fit.verdict.b);
        break;
      case SuperFamilyKind::SAa: sfam = SuperFamily::SAa(alg, fit.verdict.a); break;
      case SuperFamilyKind::SBa: sfam = SuperFamily::SBa(alg, fit.verdict.a); break;
    }
    auto even_unit = [&](const Key& k) {
      const Scalar idx = ev.idx(k);
      return sfam.v_on_coset() ? SuperModuleVector::w_unit(sfam, idx)
                               : SuperModuleVector::v_unit(sfam, idx);
    };
    auto odd_unit = [&](const Key& k) {
      const Scalar idx = ov.alpha + ev.idx(k);
      return sfam.v_on_coset() ? SuperModuleVector::v_unit(sfam, idx)
                               : SuperModuleVector::w_unit(sfam, idx);
    };
    auto even_coeff_of = [&](const SuperModuleVector& mv, const Key& k) {
      const auto& terms = sfam.v_on_coset() ? mv.wterms() : mv.vterms();
      auto it = terms.find(k);
      return it == terms.end() ? ev.F.zero() : it->second;
    };
    auto odd_coeff_of = [&](const SuperModuleVector& mv, const Key& k) {
      const auto& terms = sfam.v_on_coset() ? mv.vterms() : mv.wterms();
      auto it = terms.find(k);
      return it == terms.end() ? ev.F.zero() : it->second;
    };
    bool certified = true;
    for (const auto& [pk, val] : ev.f) {
      const Key tgt = kadd(pk.second, ev.pc[pk.first]);
      auto got = sact(sfam, SuperElement::L(alg, ev.probes[pk.first]), even_unit(pk.second));
      if (!(val * res.gauge.at(tgt) == even_coeff_of(got, tgt) * res.gauge.at(pk.second)))
        certified = false;
    }
    for (const auto& [pk, val] : ov.fw) {
      const Key tgt = kadd(pk.second, ev.pc[pk.first]);
      auto got = sact(sfam, SuperElement::L(alg, ev.probes[pk.first]), odd_unit(pk.second));
      if (!(val * res.gauge_odd.at(tgt) == odd_coeff_of(got, tgt) * res.gauge_odd.at(pk.second)))
        certified = false;
    }
    for (const auto& [pk, val] : ov.gv) {
      const Key tgt = kadd(pk.second, ov.gc[pk.first]);
      auto got = sact(sfam, SuperElement::G(alg, ov.gprobes[pk.first]), even_unit(pk.second));
      if (!(val * res.gauge_odd.at(tgt) == odd_coeff_of(got, tgt) * res.gauge.at(pk.second)))
        certified = false;
    }
    for (const auto& [pk, val] : ov.gw) {
      const Key tgt = kadd(kadd(pk.second, ov.gc[pk.first]), ov.c2a);
      auto got = sact(sfam, SuperElement::G(alg, ov.gprobes[pk.first]), odd_unit(pk.second));
      if (!(val * res.gauge.at(tgt) == even_coeff_of(got, tgt) * res.gauge_odd.at(pk.second)))
        certified = false;
    }
    res.certified = certified;
    if (!certified) {
      res.rejections.push_back(std::string(super_family_kind_name(fit.verdict.kind)) +
                               ": certificate failed");
      res.super_family.reset();
      res.gauge.clear();
      res.gauge_odd.clear();
      continue;
    }
    return res;
  }
  return res;
}

FitResult fit_parameters(const std::vector<FitEntry>& entries) {
  FitResult out;
  int i1 = -1, i2 = -1;
  for (size_t i = 0; i < entries.size() && i2 < 0; ++i) {
    if (i1 < 0) {
      i1 = static_cast<int>(i);
      continue;
    }
    if (!(entries[i].mu == entries[i1].mu)) i2 = static_cast<int>(i);
  }
  if (i1 < 0 || i2 < 0)
    fail(Errc::DegenerateSystem, "need two entries with distinct probe degrees");
  const auto& e1 = entries[i1];
  const auto& e2 = entries[i2];
  // a + mu*b = f - nu, solved from the two distinguished entries.
  const Scalar b = ((e2.f - e2.nu) - (e1.f - e1.nu)) / (e2.mu - e1.mu);
  const Scalar a = e1.f - e1.nu - e1.mu * b;
  for (const auto& e : entries) {
    if (!(a + e.nu + e.mu * b == e.f)) {
      out.violated = e;
      return out;
    }
  }
  out.ab = std::make_pair(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Table generation, scrambling, serialization

ActionTable table_from_family(const ModuleFamily& fam, const std::vector<Scalar>& probes,
                              const std::vector<std::vector<Int>>& window) {
  const Lattice& lat = fam.lattice();
  ActionTable t;
  t.lattice = lat;
  t.offset = fam.weight_offset();
  t.probes = probes;
  std::vector<Key> pc;
  for (const auto& p : probes) pc.push_back(*lat.coords(p));
  for (const auto& k : window) t.window[k] = fam.index_supported(lat.at(k));
  for (const auto& k : window) {
    if (!t.window.at(k)) continue;
    ModuleVector unit = ModuleVector::unit(fam, lat.at(k));
    for (size_t i = 0; i < probes.size(); ++i) {
      const Key tgt = kadd(k, pc[i]);
      auto it = t.window.find(tgt);
      if (it == t.window.end() || !it->second) continue;
      ModuleVector got = act(fam, AlgebraElement::L(lat, probes[i], false), unit);
      Scalar coeff = lat.field().zero();
      auto ct = got.terms().find(tgt);
      if (ct != got.terms().end()) coeff = ct->second;
      t.f[{static_cast<int>(i), k}] = coeff;
    }
  }
  return t;
}

ActionTable table_from_super_family(const SuperFamily& fam, const std::vector<Scalar>& probes,
                                    const std::vector<Scalar>& gprobes,
                                    const std::vector<std::vector<Int>>& even_window,
                                    const std::vector<std::vector<Int>>& odd_window) {
  const SuperAlgebra& alg = fam.algebra();
  const Lattice& lat = alg.lattice();
  const Field& F = lat.field();
  ActionTable t;
  t.lattice = lat;
  t.offset = fam.kind() == SuperFamilyKind::SAab ? fam.a() : F.zero();
  t.probes = probes;
  t.is_super = true;
  t.alpha = alg.alpha();
  t.gprobes = gprobes;
  std::vector<Key> pc, gc;
  for (const auto& p : probes) pc.push_back(*lat.coords(p));
  for (const auto& g : gprobes) gc.push_back(*lat.coords(g - alg.alpha()));
  const Key c2a = *lat.coords(F.of_int(2) * alg.alpha());
  for (const auto& k : even_window) t.window[k] = true;
  for (const auto& k : odd_window) t.wwindow[k] = true;

  auto even_unit = [&](const Key& k) {
    const Scalar idx = lat.at(k);
    return fam.v_on_coset() ? SuperModuleVector::w_unit(fam, idx)
                            : SuperModuleVector::v_unit(fam, idx);
  };
  auto odd_unit = [&](const Key& k) {
    const Scalar idx = alg.alpha() + lat.at(k);
    return fam.v_on_coset() ? SuperModuleVector::v_unit(fam, idx)
                            : SuperModuleVector::w_unit(fam, idx);
  };
  auto even_terms = [&](const SuperModuleVector& mv) -> const std::map<Key, Scalar>& {
    return fam.v_on_coset() ? mv.wterms() : mv.vterms();
  };
  auto odd_terms = [&](const SuperModuleVector& mv) -> const std::map<Key, Scalar>& {
    return fam.v_on_coset() ? mv.vterms() : mv.wterms();
  };
  auto coeff_at = [&](const std::map<Key, Scalar>& terms, const Key& k) {
    auto it = terms.find(k);
    return it == terms.end() ? F.zero() : it->second;
  };

  for (const auto& k : even_window) {
    auto u = even_unit(k);
    for (size_t i = 0; i < probes.size(); ++i) {
      const Key tgt = kadd(k, pc[i]);
      if (!t.window.count(tgt)) continue;
      auto got = sact(fam, SuperElement::L(alg, probes[i]), u);
      t.f[{static_cast<int>(i), k}] = coeff_at(even_terms(got), tgt);
    }
    for (size_t j = 0; j < gprobes.size(); ++j) {
      const Key tgt = kadd(k, gc[j]);
      if (!t.wwindow.count(tgt)) continue;
      auto got = sact(fam, SuperElement::G(alg, gprobes[j]), u);
      t.gv[{static_cast<int>(j), k}] = coeff_at(odd_terms(got), tgt);
    }
  }
  for (const auto& k : odd_window) {
    auto u = odd_unit(k);
    for (size_t i = 0; i < probes.size(); ++i) {
      const Key tgt = kadd(k, pc[i]);
      if (!t.wwindow.count(tgt)) continue;
      auto got = sact(fam, SuperElement::L(alg, probes[i]), u);
      t.fw[{static_cast<int>(i), k}] = coeff_at(odd_terms(got), tgt);
    }
    for (size_t j = 0; j < gprobes.size(); ++j) {
      const Key tgt = kadd(kadd(k, gc[j]), c2a);
      if (!t.window.count(tgt)) continue;
      auto got = sact(fam, SuperElement::G(alg, gprobes[j]), u);
      t.gw[{static_cast<int>(j), k}] = coeff_at(even_terms(got), tgt);
    }
  }
  return t;
}

ActionTable scramble(const ActionTable& table, const std::map<std::vector<Int>, Scalar>& gauge,
                     const std::map<std::vector<Int>, Scalar>& gauge_odd) {
  ActionTable t = table;
  const Field& F = table.lattice.field();
  std::vector<Key> pc, gc;
  for (const auto& p : t.probes) pc.push_back(*t.lattice.coords(p));
  Key c2a;
  if (t.is_super) {
    for (const auto& g : t.gprobes) gc.push_back(*t.lattice.coords(g - t.alpha));
    c2a = *t.lattice.coords(F.of_int(2) * t.alpha);
  }
  auto g_at = [&](const std::map<Key, Scalar>& m, const Key& k) {
    auto it = m.find(k);
    if (it == m.end()) return F.one();
    if (it->second.is_zero()) fail(Errc::InvalidArgument, "gauge values must be nonzero");
    return it->second;
  };
  for (auto& [pk, val] : t.f)
    val = val * g_at(gauge, pk.second) / g_at(gauge, kadd(pk.second, pc[pk.first]));
  for (auto& [pk, val] : t.fw)
    val = val * g_at(gauge_odd, pk.second) / g_at(gauge_odd, kadd(pk.second, pc[pk.first]));
  for (auto& [pk, val] : t.gv)
    val = val * g_at(gauge, pk.second) / g_at(gauge_odd, kadd(pk.second, gc[pk.first]));
  for (auto& [pk, val] : t.gw)
    val = val * g_at(gauge_odd, pk.second) /
          g_at(gauge, kadd(kadd(pk.second, gc[pk.first]), c2a));
  return t;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

} // namespace

ActionTable parse_table(const Field& field, const std::string& text) {
  ActionTable t;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::vector<Scalar> gens;
  bool have_header = false;
  auto need = [&](bool cond, const std::string& msg) {
    if (!cond) fail(Errc::ParseError, "table line " + std::to_string(lineno) + ": " + msg);
  };
  auto sc = [&](const std::string& tok) { return field.parse(tok); };
  auto key_of = [&](const Scalar& idx, bool odd) -> Key {
    auto k = odd ? t.lattice.coords(idx - t.alpha) : t.lattice.coords(idx);
    need(k.has_value(), "index " + idx.str_compact() + " outside the lattice/coset");
    return *k;
  };
  auto probe_id = [&](const Scalar& mu, bool odd) -> int {
    const auto& list = odd ? t.gprobes : t.probes;
    for (size_t i = 0; i < list.size(); ++i)
      if (list[i] == mu) return static_cast<int>(i);
    need(false, "unknown probe " + mu.str_compact());
    return -1;
  };
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& cmd = toks[0];
    if (cmd == "table") {
      // table over <g1,g2,...> offset <scalar>
      need(toks.size() == 5 && toks[1] == "over" && toks[3] == "offset", "bad table header");
      std::string genlist = toks[2];
      std::string cur;
      for (char ch : genlist + ",") {
        if (ch == ',') {
          if (!cur.empty()) gens.push_back(sc(cur));
          cur.clear();
        } else {
          cur.push_back(ch);
        }
      }
      need(!gens.empty(), "empty generator list");
      t.lattice = Lattice::make(field, gens);
      t.offset = sc(toks[4]);
      have_header = true;
      continue;
    }
    need(have_header, "table header must come first");
    if (cmd == "probe") {
      need(toks.size() == 2, "probe <scalar>");
      t.probes.push_back(sc(toks[1]));
    } else if (cmd == "w" || cmd == "wzero") {
      need(toks.size() == 2, "w <scalar>");
      t.window[key_of(sc(toks[1]), false)] = (cmd == "w");
    } else if (cmd == "f") {
      need(toks.size() == 4, "f <mu> <nu> <scalar>");
      t.f[{probe_id(sc(toks[1]), false), key_of(sc(toks[2]), false)}] = sc(toks[3]);
    } else if (cmd == "coset") {
      need(toks.size() == 2, "coset <scalar>");
      t.is_super = true;
      t.alpha = sc(toks[1]);
    } else if (cmd == "gprobe") {
      need(toks.size() == 2 && t.is_super, "gprobe after coset");
      t.gprobes.push_back(sc(toks[1]));
    } else if (cmd == "ow" || cmd == "owzero") {
      need(toks.size() == 2 && t.is_super, "ow after coset");
      t.wwindow[key_of(sc(toks[1]), true)] = (cmd == "ow");
    } else if (cmd == "fw") {
      need(toks.size() == 4 && t.is_super, "fw <mu> <nu> <scalar>");
      t.fw[{probe_id(sc(toks[1]), false), key_of(sc(toks[2]), true)}] = sc(toks[3]);
    } else if (cmd == "gv") {
      need(toks.size() == 4 && t.is_super, "gv <eta> <mu> <scalar>");
      t.gv[{probe_id(sc(toks[1]), true), key_of(sc(toks[2]), false)}] = sc(toks[3]);
    } else if (cmd == "gw") {
      need(toks.size() == 4 && t.is_super, "gw <eta> <nu> <scalar>");
      t.gw[{probe_id(sc(toks[1]), true), key_of(sc(toks[2]), true)}] = sc(toks[3]);
    } else {
      need(false, "unknown table row '" + cmd + "'");
    }
  }
  need(have_header, "missing table header");
  return t;
}

std::string format_table(const ActionTable& t) {
  std::string out = "table over ";
  const auto& gens = t.lattice.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ",";
    out += gens[i].str_compact();
  }
  out += " offset " + t.offset.str_compact() + "\n";
  for (const auto& p : t.probes) out += "probe " + p.str_compact() + "\n";
  if (t.is_super) {
    out += "coset " + t.alpha.str_compact() + "\n";
    for (const auto& g : t.gprobes) out += "gprobe " + g.str_compact() + "\n";
  }
  const Lattice& lat = t.lattice;
  for (const auto& [k, present] : t.window)
    out += std::string(present ? "w " : "wzero ") + lat.at(k).str_compact() + "\n";
  for (const auto& [pk, val] : t.f)
    out += "f " + t.probes[pk.first].str_compact() + " " + lat.at(pk.second).str_compact() +
           " " + val.str_compact() + "\n";
  if (t.is_super) {
    for (const auto& [k, present] : t.wwindow)
      out += std::string(present ? "ow " : "owzero ") + (t.alpha + lat.at(k)).str_compact() +
             "\n";
    for (const auto& [pk, val] : t.fw)
      out += "fw " + t.probes[pk.first].str_compact() + " " +
             (t.alpha + lat.at(pk.second)).str_compact() + " " + val.str_compact() + "\n";
    for (const auto& [pk, val] : t.gv)
      out += "gv " + t.gprobes[pk.first].str_compact() + " " + lat.at(pk.second).str_compact() +
             " " + val.str_compact() + "\n";
    for (const auto& [pk, val] : t.gw)
      out += "gw " + t.gprobes[pk.first].str_compact() + " " +
             (t.alpha + lat.at(pk.second)).str_compact() + " " + val.str_compact() + "\n";
  }
  return out;
}

} // namespace vir
