#include "vir/linsolve.hpp"

#include <algorithm>

namespace vir {

std::optional<std::vector<Scalar>> solve_columns(const Field& field,
                                                 const std::vector<std::vector<Scalar>>& cols,
                                                 const std::vector<Scalar>& rhs) {
  const int n = static_cast<int>(cols.size());
  const int m = static_cast<int>(rhs.size());
  // Augmented matrix [cols | rhs], eliminate by rows.
  std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(n + 1, field.zero()));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a[i][j] = cols[j][i];
  for (int i = 0; i < m; ++i) a[i][n] = rhs[i];

  std::vector<int> pivot_of_col(n, -1);
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (!a[i][col].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[row], a[p]);
    Scalar inv = a[row][col].inv();
    for (int j = col; j <= n; ++j) a[row][j] = a[row][j] * inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      Scalar f = a[i][col];
      for (int j = col; j <= n; ++j) a[i][j] = a[i][j] - f * a[row][j];
    }
    pivot_of_col[col] = row;
    ++row;
  }
  // Consistency: no row of the form [0 ... 0 | nonzero].
  for (int i = row; i < m; ++i)
    if (!a[i][n].is_zero()) return std::nullopt;

  std::vector<Scalar> sol(n, field.zero());
  for (int col = 0; col < n; ++col)
    if (pivot_of_col[col] >= 0) sol[col] = a[pivot_of_col[col]][n];
  return sol;
}

int column_rank(const Field& field, const std::vector<std::vector<Scalar>>& cols) {
  if (cols.empty()) return 0;
  SpanBasis sb(field);
  for (const auto& c : cols) {
    std::vector<std::pair<int, Scalar>> v;
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
      if (!c[i].is_zero()) v.emplace_back(i, c[i]);
    sb.insert(std::move(v));
  }
  return sb.dim();
}

namespace {

void axpy(std::vector<std::pair<int, Scalar>>& v, const Scalar& f,
          const std::vector<std::pair<int, Scalar>>& row, const Field& field) {
  // v -= f * row ; both sorted by column id
  std::vector<std::pair<int, Scalar>> out;
  out.reserve(v.size() + row.size());
  size_t i = 0, j = 0;
  while (i < v.size() || j < row.size()) {
    if (j >= row.size() || (i < v.size() && v[i].first < row[j].first)) {
      out.push_back(v[i++]);
    } else if (i >= v.size() || row[j].first < v[i].first) {
      out.emplace_back(row[j].first, field.zero() - f * row[j].second);
      ++j;
    } else {
      Scalar c = v[i].second - f * row[j].second;
      if (!c.is_zero()) out.emplace_back(v[i].first, c);
      ++i;
      ++j;
    }
  }
  std::erase_if(out, [](const auto& p) { return p.second.is_zero(); });
  v = std::move(out);
}

} // namespace

std::vector<std::pair<int, Scalar>> SpanBasis::reduce(
    std::vector<std::pair<int, Scalar>> v) const {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::erase_if(v, [](const auto& p) { return p.second.is_zero(); });
  for (const auto& row : rows_) {
    if (v.empty()) break;
    const int pivot = row.front().first;
    auto it = std::lower_bound(v.begin(), v.end(), pivot,
                               [](const auto& p, int c) { return p.first < c; });
    if (it == v.end() || it->first != pivot) continue;
    axpy(v, it->second, row, field_);
  }
  return v;
}

bool SpanBasis::insert(std::vector<std::pair<int, Scalar>> v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  Scalar inv = v.front().second.inv();
  for (auto& p : v) p.second = p.second * inv;
  // Back-substitute into existing rows to keep reduction one-pass.
  for (auto& row : rows_) {
    const int pivot = v.front().first;
    auto it = std::lower_bound(row.begin(), row.end(), pivot,
                               [](const auto& p, int c) { return p.first < c; });
    if (it == row.end() || it->first != pivot) continue;
    axpy(row, it->second, v, field_);
  }
  rows_.push_back(std::move(v));
  std::sort(rows_.begin(), rows_.end(),
            [](const auto& a, const auto& b) { return a.front().first < b.front().first; });
  return true;
}

} // namespace vir
