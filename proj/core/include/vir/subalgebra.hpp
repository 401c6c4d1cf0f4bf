#ifndef VIR_SUBALGEBRA_HPP
#define VIR_SUBALGEBRA_HPP

#include "vir/element.hpp"

#include <optional>
#include <vector>

namespace vir {

/// Finite-dimensional subalgebra experiments in the centerless quotient.

/// exp(alpha ad L_{-x}) applied to target, as a finite exact sum. Every degree
/// of target must be a non-negative integer multiple of x (or -x itself), which
/// makes ad L_{-x} nilpotent along the chain. Throws NotNilpotentChain
/// otherwise and ModeError on centered input.
AlgebraElement exp_ad_lowering(const Scalar& alpha, const Scalar& x,
                               const AlgebraElement& target);

struct TwoDimPair {
  AlgebraElement X; // L_0 + alpha*x*L_{-x} = exp(alpha ad L_{-x}) L_0
  AlgebraElement Y; // exp(alpha ad L_{-x}) L_{nx}
  Scalar eigen;     // nx, certified by [X,Y] = nx*Y
};

/// The two-dimensional subalgebra construction; the eigenvalue certificate
/// [X,Y] = nx*Y is verified exactly before returning. Throws ZeroDegree for
/// x = 0.
TwoDimPair two_dim_pair(const Lattice& lat, const Scalar& x, const Scalar& alpha, int n);

struct ClosureReport {
  enum class Status { Closed, CapExceeded };
  std::vector<AlgebraElement> basis;
  int dim = 0;
  Status status = Status::Closed;
};

/// Iteratively bracket basis pairs, extending by elements independent over F,
/// until closed or dim exceeds cap. CapExceeded is a normal status (evidence,
/// not proof, of infinite dimension). Requires centerless generators and
/// cap >= |gens|.
ClosureReport closure(const std::vector<AlgebraElement>& gens, int cap = 12);

/// Exact coordinates of x in the span of basis, or nullopt.
std::optional<std::vector<Scalar>> span_membership(const AlgebraElement& x,
                                                   const std::vector<AlgebraElement>& basis);

} // namespace vir

#endif
