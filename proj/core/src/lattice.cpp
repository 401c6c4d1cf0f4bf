#include "vir/lattice.hpp"

#include <algorithm>

namespace vir {

namespace {

// Row Hermite normal form over Z. Returns the nonzero rows (echelon, positive
// pivots, entries above each pivot reduced into [0, pivot)), and the pivot
// column of each row.
struct Hnf {
  std::vector<std::vector<Int>> rows;
  std::vector<int> pivot_col;
};

Hnf hermite_normal_form(std::vector<std::vector<Int>> m) {
  Hnf out;
  if (m.empty()) return out;
  const int cols = static_cast<int>(m[0].size());
  const int n = static_cast<int>(m.size());
  int r = 0;
  for (int col = 0; col < cols && r < n; ++col) {
    // Euclidean elimination below row r in this column.
    while (true) {
      int best = -1;
      for (int i = r; i < n; ++i)
        if (m[i][col] != 0 && (best < 0 || cmp(abs(m[i][col]), abs(m[best][col])) < 0)) best = i;
      if (best < 0) break;
      std::swap(m[r], m[best]);
      bool more = false;
      for (int i = r + 1; i < n; ++i) {
        if (m[i][col] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][col].get_mpz_t(), m[r][col].get_mpz_t());
        for (int j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        if (m[i][col] != 0) more = true;
      }
      if (!more) break;
    }
    if (m[r][col] == 0) continue;
    if (m[r][col] < 0)
      for (int j = 0; j < cols; ++j) m[r][j] = -m[r][j];
    // Reduce entries above the pivot.
    for (int i = 0; i < r; ++i) {
      if (m[i][col] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][col].get_mpz_t(), m[r][col].get_mpz_t());
      if (q == 0) continue;
      for (int j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    out.pivot_col.push_back(col);
    ++r;
  }
  out.rows.assign(m.begin(), m.begin() + r);
  return out;
}

// Clear denominators: returns the integer matrix D * coords(elements) and D.
std::pair<std::vector<std::vector<Int>>, Int> cleared_coord_matrix(
    const Field& field, const std::vector<Scalar>& elements) {
  Int den(1);
  for (const auto& e : elements)
    for (const auto& c : e.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<std::vector<Int>> m;
  m.reserve(elements.size());
  for (const auto& e : elements) {
    std::vector<Int> row;
    row.reserve(field.degree());
    for (const auto& c : e.coeffs()) {
      Rat v = c * Rat(den);
      v.canonicalize();
      row.push_back(v.get_num());
    }
    m.push_back(std::move(row));
  }
  return {std::move(m), den};
}

} // namespace

struct Lattice::Data {
  Field field;
  std::vector<Scalar> generators;
  std::vector<Scalar> zbasis;
  Int den;                          // cleared denominator D
  std::vector<std::vector<Int>> hnf; // r x degree, rows of D * zbasis coords
  std::vector<int> pivot_col;
};

Lattice Lattice::make(const Field& field, std::vector<Scalar> generators) {
  if (generators.empty()) fail(Errc::EmptyGenerators, "lattice needs at least one generator");
  for (const auto& g : generators) {
    if (!g.field().same(field)) fail(Errc::InvalidArgument, "generator from a different field");
    if (g.is_zero()) fail(Errc::InvalidArgument, "lattice generators must be nonzero");
  }
  auto [m, den] = cleared_coord_matrix(field, generators);
  Hnf h = hermite_normal_form(std::move(m));

  auto d = std::make_shared<Data>();
  d->field = field;
  d->generators = std::move(generators);
  d->den = den;
  d->hnf = std::move(h.rows);
  d->pivot_col = std::move(h.pivot_col);
  for (const auto& row : d->hnf) {
    std::vector<Rat> coeffs;
    coeffs.reserve(row.size());
    for (const auto& v : row) {
      Rat r(v, den);
      r.canonicalize();
      coeffs.push_back(r);
    }
    d->zbasis.push_back(field.from_coeffs(std::move(coeffs)));
  }
  Lattice lat;
  lat.d_ = std::move(d);
  return lat;
}

const Field& Lattice::field() const { return d_->field; }
int Lattice::rank() const { return static_cast<int>(d_->zbasis.size()); }
const std::vector<Scalar>& Lattice::zbasis() const { return d_->zbasis; }
const std::vector<Scalar>& Lattice::generators() const { return d_->generators; }

std::optional<std::vector<Int>> Lattice::coords(const Scalar& x) const {
  if (!x.field().same(d_->field)) fail(Errc::InvalidArgument, "scalar from a different field");
  // Solve sum k_i * hnf_i = D * coords(x) over Z using the echelon structure.
  std::vector<Int> target;
  target.reserve(x.coeffs().size());
  for (const auto& c : x.coeffs()) {
    Rat v = c * Rat(d_->den);
    v.canonicalize();
    if (v.get_den() != 1) return std::nullopt;
    target.push_back(v.get_num());
  }
  std::vector<Int> ks;
  ks.reserve(d_->hnf.size());
  for (size_t r = 0; r < d_->hnf.size(); ++r) {
    const int pc = d_->pivot_col[r];
    const Int& pivot = d_->hnf[r][pc];
    Int k, rem;
    mpz_fdiv_qr(k.get_mpz_t(), rem.get_mpz_t(), target[pc].get_mpz_t(), pivot.get_mpz_t());
    if (rem != 0) return std::nullopt;
    if (k != 0)
      for (size_t j = 0; j < target.size(); ++j) target[j] -= k * d_->hnf[r][j];
    ks.push_back(std::move(k));
  }
  for (const auto& t : target)
    if (t != 0) return std::nullopt;
  return ks;
}

Scalar Lattice::at(std::span<const Int> coords) const {
  if (coords.size() != d_->zbasis.size())
    fail(Errc::InvalidArgument, "coordinate vector length does not match lattice rank");
  Scalar acc = d_->field.zero();
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    Rat r(coords[i]);
    acc += d_->field.of(r) * d_->zbasis[i];
  }
  return acc;
}

bool Lattice::same(const Lattice& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  if (!d_->field.same(o.d_->field)) return false;
  if (d_->zbasis.size() != o.d_->zbasis.size()) return false;
  for (size_t i = 0; i < d_->zbasis.size(); ++i)
    if (!(d_->zbasis[i] == o.d_->zbasis[i])) return false;
  return true;
}

bool Lattice::contains_lattice(const Lattice& sub) const {
  for (const auto& b : sub.zbasis())
    if (!contains(b)) return false;
  return true;
}

std::string Lattice::str() const {
  std::string out = "{";
  for (size_t i = 0; i < d_->zbasis.size(); ++i) {
    if (i) out += ", ";
    out += d_->zbasis[i].str_compact();
  }
  return out + "}";
}

int span_rank(const Field& field, const std::vector<Scalar>& elements) {
  std::vector<Scalar> nonzero;
  for (const auto& e : elements) {
    if (!e.field().same(field)) fail(Errc::InvalidArgument, "element from a different field");
    if (!e.is_zero()) nonzero.push_back(e);
  }
  if (nonzero.empty()) return 0;
  auto [m, den] = cleared_coord_matrix(field, nonzero);
  (void)den;
  return static_cast<int>(hermite_normal_form(std::move(m)).rows.size());
}

bool scaler_test(const Lattice& lat, const Scalar& a) {
  if (a.is_zero()) fail(Errc::ZeroScaler, "scaler must be nonzero");
  const Scalar ai = a.inv();
  for (const auto& b : lat.zbasis()) {
    if (!lat.contains(a * b)) return false;
    if (!lat.contains(ai * b)) return false;
  }
  return true;
}

bool Coset::same(const Coset& o) const {
  if (!lat_.same(o.lat_)) return false;
  return lat_.contains(off_ - o.off_);
}

UnitHom::UnitHom(Lattice lattice, std::vector<Scalar> values_on_zbasis)
    : lat_(std::move(lattice)), vals_(std::move(values_on_zbasis)) {
  if (static_cast<int>(vals_.size()) != lat_.rank())
    fail(Errc::InvalidArgument, "one value per Z-basis element required");
  for (const auto& v : vals_)
    if (v.is_zero()) fail(Errc::InvalidArgument, "unit homomorphism values must be nonzero");
}

Scalar UnitHom::operator()(const Scalar& x) const {
  auto ks = lat_.coords(x);
  if (!ks) fail(Errc::NotMember, "argument " + x.str_compact() + " is not in the lattice");
  Scalar acc = lat_.field().one();
  for (size_t i = 0; i < ks->size(); ++i) {
    const Int& k = (*ks)[i];
    if (k == 0) continue;
    if (!k.fits_slong_p()) fail(Errc::InvalidArgument, "coordinate too large");
    acc *= vals_[i].pow(k.get_si());
  }
  return acc;
}

} // namespace vir
