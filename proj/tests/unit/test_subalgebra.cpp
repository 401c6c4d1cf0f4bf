#include "vir/sampler.hpp"
#include "vir/subalgebra.hpp"

#include <doctest.h>

using namespace vir;

namespace {

struct Fix {
  Field q = Field::rationals();
  Lattice z;
  Fix() { z = Lattice::make(q, {q.one()}); }
  AlgebraElement L(long d) const { return AlgebraElement::L(z, q.of_int(d), true); }
  AlgebraElement c(Rat r, long d) const { return q.of(r) * L(d); }
};

} // namespace

TEST_CASE("exp_ad_lowering chains") {
  Fix x;
  // alpha symbolic sample, x = 1, target L_1 -> L_1 + 2a L_0 + a^2 L_{-1}
  const Scalar a = x.q.of(Rat(2, 3));
  auto r = exp_ad_lowering(a, x.q.one(), x.L(1));
  CHECK(r == x.L(1) + (x.q.of_int(2) * a) * x.L(0) + (a * a) * x.L(-1));

  // alpha = 1, x = 1, target L_2 -> L_2 + 3L_1 + 3L_0 + L_{-1}
  auto r2 = exp_ad_lowering(x.q.one(), x.q.one(), x.L(2));
  CHECK(r2 == x.L(2) + x.q.of_int(3) * x.L(1) + x.q.of_int(3) * x.L(0) + x.L(-1));

  // alpha = 0 leaves the target unchanged
  CHECK(exp_ad_lowering(x.q.zero(), x.q.one(), x.L(2)) == x.L(2));

  // degree -2 is not on the nilpotent chain for x = 1
  CHECK_THROWS_AS(exp_ad_lowering(a, x.q.one(), x.L(-2)), Error);
  // centered input is rejected
  CHECK_THROWS_AS(exp_ad_lowering(a, x.q.one(), AlgebraElement::L(x.z, x.q.one(), false)),
                  Error);
}

TEST_CASE("two_dim_pair certificates") {
  Fix x;
  // x=1, generic alpha, n=1
  const Scalar a = x.q.of(Rat(5, 7));
  auto p = two_dim_pair(x.z, x.q.one(), a, 1);
  CHECK(p.X == x.L(0) + a * x.L(-1));
  CHECK(p.Y == x.L(1) + (x.q.of_int(2) * a) * x.L(0) + (a * a) * x.L(-1));
  CHECK(bracket(p.X, p.Y) == p.eigen * p.Y);
  CHECK(p.eigen == x.q.one());

  // x=2, alpha=1, n=1
  auto p2 = two_dim_pair(x.z, x.q.of_int(2), x.q.one(), 1);
  CHECK(p2.X == x.L(0) + x.q.of_int(2) * x.L(-2));
  CHECK(p2.Y == x.L(2) + x.q.of_int(4) * x.L(0) + x.q.of_int(4) * x.L(-2));
  CHECK(p2.eigen == x.q.of_int(2));

  // x=1, alpha=1, n=2
  auto p3 = two_dim_pair(x.z, x.q.one(), x.q.one(), 2);
  CHECK(p3.Y == x.L(2) + x.q.of_int(3) * x.L(1) + x.q.of_int(3) * x.L(0) + x.L(-1));
  CHECK(p3.eigen == x.q.of_int(2));

  CHECK_THROWS_AS(two_dim_pair(x.z, x.q.zero(), a, 1), Error);
}

TEST_CASE("the literal Lemma-3.2 element fails span membership for x=2, alpha=1, n=1") {
  Fix x;
  // X_literal = L_0 + alpha L_{-x} (coefficient alpha instead of alpha*x)
  auto Xlit = x.L(0) + x.L(-2);
  auto Y = exp_ad_lowering(x.q.one(), x.q.of_int(2), x.L(2));
  auto br = bracket(Xlit, Y);
  CHECK_FALSE(span_membership(br, {Xlit, Y}).has_value());
  // while the conjugated X works
  auto p = two_dim_pair(x.z, x.q.of_int(2), x.q.one(), 1);
  CHECK(span_membership(bracket(p.X, p.Y), {p.X, p.Y}).has_value());
}

TEST_CASE("closure") {
  Fix x;
  auto sl2 = closure({x.L(-1), x.L(0), x.L(1)});
  CHECK(sl2.status == ClosureReport::Status::Closed);
  CHECK(sl2.dim == 3);

  // the section-3 pair closes at dimension 2
  auto X = x.c(Rat(3, 16), 0) + x.L(1) + x.L(2);
  auto Y = x.c(Rat(3, 16), 0) + x.c(Rat(1, 16), -1) + x.c(Rat(1, 256), -2);
  auto rep = closure({X, Y});
  CHECK(rep.status == ClosureReport::Status::Closed);
  CHECK(rep.dim == 2);
  // supports span a rank-1 group
  std::vector<Scalar> supp;
  for (const auto& b : rep.basis)
    for (const auto& s : b.support()) supp.push_back(s);
  CHECK(span_rank(x.q, supp) == 1);

  auto open = closure({x.L(1), x.L(2)}, 10);
  CHECK(open.status == ClosureReport::Status::CapExceeded);

  CHECK_THROWS_AS(closure({x.L(1), x.L(2)}, 1), Error); // cap below generator count
}

TEST_CASE("four independent elements never close (dimension bound)") {
  Fix x;
  Sampler s(67);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<AlgebraElement> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(s.element(x.z, true, 3, 4));
    auto rep = closure(gens, 9);
    if (rep.basis.size() < 4) continue; // sampled a dependent set
    CHECK(rep.status == ClosureReport::Status::CapExceeded);
  }
}

TEST_CASE("span membership coordinates") {
  Fix x;
  auto X = x.c(Rat(3, 16), 0) + x.L(1) + x.L(2);
  auto Y = x.c(Rat(3, 16), 0) + x.c(Rat(1, 16), -1) + x.c(Rat(1, 256), -2);
  auto co = span_membership(bracket(X, Y), {X, Y});
  REQUIRE(co);
  CHECK((*co)[0] == x.q.of(Rat(-3, 8)));
  CHECK((*co)[1] == x.q.of(Rat(-3, 8)));

  CHECK_FALSE(span_membership(x.L(0), {x.L(1)}).has_value());

  auto zero = AlgebraElement::zero(x.z, true);
  auto co0 = span_membership(zero, {x.L(1), x.L(2)});
  REQUIRE(co0);
  CHECK((*co0)[0].is_zero());
  CHECK((*co0)[1].is_zero());
}

TEST_CASE("centered section-3 pair does not close (central term obstructs)") {
  Fix x;
  auto mk = [&](Rat r, long d) {
    return x.q.of(r) * AlgebraElement::L(x.z, x.q.of_int(d), false);
  };
  auto X = mk(Rat(3, 16), 0) + mk(Rat(1), 1) + mk(Rat(1), 2);
  auto Y = mk(Rat(3, 16), 0) + mk(Rat(1, 16), -1) + mk(Rat(1, 256), -2);
  auto br = bracket(X, Y);
  CHECK_FALSE(br.central_coeff().is_zero());
  CHECK_FALSE(span_membership(br, {X, Y}).has_value());
}
