#ifndef VIR_LINSOLVE_HPP
#define VIR_LINSOLVE_HPP

#include "vir/scalar.hpp"

#include <optional>
#include <vector>

namespace vir {

/// Exact Gaussian elimination over the ground field, dense, desk scale.

/// Solve sum_j lambda_j * cols[j] = rhs. Returns one solution (free variables
/// set to zero) or nullopt when the system is inconsistent.
std::optional<std::vector<Scalar>> solve_columns(const Field& field,
                                                 const std::vector<std::vector<Scalar>>& cols,
                                                 const std::vector<Scalar>& rhs);

/// Rank of the column family.
int column_rank(const Field& field, const std::vector<std::vector<Scalar>>& cols);

/// Incremental echelon span over sparse vectors keyed by an integer column id.
/// Used by the closure iteration to test linear independence exactly.
class SpanBasis {
public:
  explicit SpanBasis(Field field) : field_(std::move(field)) {}

  /// Reduce v against the current span; returns the residual (empty if v is in
  /// the span).
  std::vector<std::pair<int, Scalar>> reduce(std::vector<std::pair<int, Scalar>> v) const;

  /// Insert v if independent. Returns true when the dimension grew.
  bool insert(std::vector<std::pair<int, Scalar>> v);

  int dim() const { return static_cast<int>(rows_.size()); }

private:
  Field field_;
  // rows sorted internally; each row normalized to pivot coefficient 1, pivot =
  // smallest column id present
  std::vector<std::vector<std::pair<int, Scalar>>> rows_;
};

} // namespace vir

#endif
