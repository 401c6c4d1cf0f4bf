#include "vir/subalgebra.hpp"

#include "vir/linsolve.hpp"

#include <map>

namespace vir {

AlgebraElement exp_ad_lowering(const Scalar& alpha, const Scalar& x,
                               const AlgebraElement& target) {
  if (!target.centerless()) fail(Errc::ModeError, "exp(ad) lowering works in centerless mode");
  const Lattice& lat = target.lattice();
  if (!lat.contains(x)) fail(Errc::NotMember, "x must be a lattice member");
  if (x.is_zero()) fail(Errc::ZeroDegree, "x must be nonzero");
  // Degrees must lie in Z_{>=0} * x, or be -x itself.
  const Scalar xi = x.inv();
  for (const auto& [k, c] : target.lterms()) {
    const Scalar ratio = lat.at(k) * xi;
    auto m = ratio.as_integer();
    if (!m || *m < -1)
      fail(Errc::NotNilpotentChain,
           "degree " + lat.at(k).str_compact() + " is not in Z>=0*x or -x");
  }
  const Field& f = lat.field();
  AlgebraElement lower = AlgebraElement::L(lat, -x, true);
  AlgebraElement acc = target;
  AlgebraElement term = target;
  long k = 1;
  while (!term.is_zero()) {
    term = (alpha * f.of(Rat(1, k))) * bracket(lower, term);
    acc = acc + term;
    ++k;
  }
  return acc;
}

TwoDimPair two_dim_pair(const Lattice& lat, const Scalar& x, const Scalar& alpha, int n) {
  if (x.is_zero()) fail(Errc::ZeroDegree, "x must be nonzero");
  if (n <= 0) fail(Errc::InvalidArgument, "n must be a positive integer");
  const Field& f = lat.field();
  AlgebraElement l0 = AlgebraElement::L(lat, f.zero(), true);
  AlgebraElement lnx = AlgebraElement::L(lat, f.of_int(n) * x, true);
  TwoDimPair p;
  p.X = exp_ad_lowering(alpha, x, l0); // = L_0 + alpha*x*L_{-x}
  p.Y = exp_ad_lowering(alpha, x, lnx);
  p.eigen = f.of_int(n) * x;
  if (!(bracket(p.X, p.Y) == p.eigen * p.Y))
    fail(Errc::InvalidArgument, "eigenvalue certificate [X,Y] = nx*Y failed");
  return p;
}

namespace {

// Column ids for the sparse span: one id per degree coordinate vector seen.
struct ColumnIndex {
  std::map<std::vector<Int>, int> ids;
  int of(const std::vector<Int>& k) {
    auto [it, fresh] = ids.emplace(k, static_cast<int>(ids.size()));
    return it->second;
  }
};

std::vector<std::pair<int, Scalar>> sparse_of(ColumnIndex& cols, const AlgebraElement& e) {
  std::vector<std::pair<int, Scalar>> v;
  v.reserve(e.lterms().size());
  for (const auto& [k, c] : e.lterms()) v.emplace_back(cols.of(k), c);
  return v;
}

} // namespace

ClosureReport closure(const std::vector<AlgebraElement>& gens, int cap) {
  if (gens.empty()) fail(Errc::InvalidArgument, "closure needs at least one generator");
  if (cap < static_cast<int>(gens.size()))
    fail(Errc::InvalidArgument, "cap must be at least the number of generators");
  const Field& f = gens.front().lattice().field();
  for (const auto& g : gens)
    if (!g.centerless()) fail(Errc::ModeError, "closure works in centerless mode");

  ColumnIndex cols;
  SpanBasis span(f);
  ClosureReport rep;
  for (const auto& g : gens)
    if (span.insert(sparse_of(cols, g))) rep.basis.push_back(g);

  size_t i = 0, j = 1;
  auto advance = [&](size_t& a, size_t& b) {
    // enumerate unordered pairs (a < b) in insertion order of b
    ++a;
    if (a >= b) {
      a = 0;
      ++b;
    }
  };
  while (j < rep.basis.size()) {
    AlgebraElement br = bracket(rep.basis[i], rep.basis[j]);
    if (span.insert(sparse_of(cols, br))) {
      rep.basis.push_back(std::move(br));
      if (static_cast<int>(rep.basis.size()) > cap) {
        rep.dim = static_cast<int>(rep.basis.size());
        rep.status = ClosureReport::Status::CapExceeded;
        return rep;
      }
    }
    advance(i, j);
  }
  rep.dim = static_cast<int>(rep.basis.size());
  rep.status = ClosureReport::Status::Closed;
  return rep;
}

std::optional<std::vector<Scalar>> span_membership(const AlgebraElement& x,
                                                   const std::vector<AlgebraElement>& basis) {
  const Field& f = x.lattice().field();
  // Union of supports, plus one row for the central coefficient.
  std::map<std::vector<Int>, int> row_of;
  auto touch = [&](const AlgebraElement& e) {
    for (const auto& [k, c] : e.lterms()) row_of.emplace(k, 0);
  };
  touch(x);
  for (const auto& b : basis) touch(b);
  int next = 0;
  for (auto& [k, id] : row_of) id = next++;
  const int rows = next + 1; // last row: c coefficient

  auto dense = [&](const AlgebraElement& e) {
    std::vector<Scalar> col(rows, f.zero());
    for (const auto& [k, c] : e.lterms()) col[row_of.at(k)] = c;
    col[rows - 1] = e.central_coeff();
    return col;
  };
  std::vector<std::vector<Scalar>> cols;
  cols.reserve(basis.size());
  for (const auto& b : basis) cols.push_back(dense(b));
  return solve_columns(f, cols, dense(x));
}

} // namespace vir
