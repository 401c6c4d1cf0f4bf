#ifndef VIR_SAMPLER_HPP
#define VIR_SAMPLER_HPP

#include "vir/element.hpp"
#include "vir/svir.hpp"

#include <cstdint>
#include <random>

namespace vir {

/// Deterministic sampler of small exact values. All randomized verification
/// sweeps are seeded through this, never through global state.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  long int_in(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng_);
  }

  Rat rational(long num_radius = 9, long den_max = 4) {
    Rat r(int_in(-num_radius, num_radius), int_in(1, den_max));
    r.canonicalize();
    return r;
  }

  Scalar scalar(const Field& f, bool nonzero = false) {
    for (;;) {
      std::vector<Rat> c(f.degree());
      for (auto& x : c) x = rational(6, 3);
      Scalar s = f.from_coeffs(std::move(c));
      if (!nonzero || !s.is_zero()) return s;
    }
  }

  std::vector<Int> coords(int rank, long radius, bool nonzero = false) {
    for (;;) {
      std::vector<Int> k(rank);
      bool all_zero = true;
      for (auto& v : k) {
        v = Int(int_in(-radius, radius));
        if (v != 0) all_zero = false;
      }
      if (!nonzero || !all_zero) return k;
    }
  }

  Scalar member(const Lattice& lat, long radius, bool nonzero = false) {
    return lat.at(coords(lat.rank(), radius, nonzero));
  }

  AlgebraElement element(const Lattice& lat, bool centerless, int max_terms = 3,
                         long radius = 5) {
    AlgebraElement e = AlgebraElement::zero(lat, centerless);
    const int n = static_cast<int>(int_in(1, max_terms));
    for (int i = 0; i < n; ++i)
      e = e + scalar(lat.field()) * AlgebraElement::L(lat, member(lat, radius), centerless);
    if (!centerless && int_in(0, 2) == 0)
      e = e + scalar(lat.field()) * AlgebraElement::central(lat);
    return e;
  }

  /// Homogeneous super element of the requested parity.
  SuperElement super_element(const SuperAlgebra& alg, int parity, int max_terms = 2,
                             long radius = 4) {
    SuperElement e = SuperElement::zero(alg);
    const Field& f = alg.lattice().field();
    const int n = static_cast<int>(int_in(1, max_terms));
    for (int i = 0; i < n; ++i) {
      if (parity == 0) {
        e = e + scalar(f) * SuperElement::L(alg, member(alg.lattice(), radius));
      } else {
        const Scalar deg = alg.alpha() + member(alg.lattice(), radius);
        e = e + scalar(f) * SuperElement::G(alg, deg);
      }
    }
    if (parity == 0 && int_in(0, 2) == 0)
      e = e + scalar(f) * SuperElement::central(alg);
    return e;
  }

  std::mt19937_64& rng() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace vir

#endif
