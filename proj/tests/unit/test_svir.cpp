#include "vir/modules.hpp"
#include "vir/sampler.hpp"
#include "vir/svir.hpp"

#include <doctest.h>

using namespace vir;

namespace {

struct Fix {
  Field q = Field::rationals();
  Lattice z;
  SuperAlgebra ns, tilde;
  Fix() {
    z = Lattice::make(q, {q.one()});
    ns = SuperAlgebra(z, q.of(Rat(1, 2)), SuperVariant::NS);
    tilde = SuperAlgebra(z, q.of(Rat(1, 2)), SuperVariant::Tilde);
  }
  Scalar r(long n, long d = 1) const { return q.of(Rat(n, d)); }
};

} // namespace

TEST_CASE("super brackets of basis vectors") {
  Fix x;
  // NS: [G_{1/2}, G_{-1/2}] = 2 L_0 (central factor vanishes)
  auto g1 = SuperElement::G(x.ns, x.r(1, 2));
  auto g2 = SuperElement::G(x.ns, x.r(-1, 2));
  CHECK(sbracket(g1, g2) == x.r(2) * SuperElement::L(x.ns, x.q.zero()));

  // NS: [G_{3/2}, G_{-3/2}] = 2 L_0 - 2/3 c
  auto g3 = SuperElement::G(x.ns, x.r(3, 2));
  auto g4 = SuperElement::G(x.ns, x.r(-3, 2));
  CHECK(sbracket(g3, g4) ==
        x.r(2) * SuperElement::L(x.ns, x.q.zero()) + x.r(-2, 3) * SuperElement::central(x.ns));
  CHECK(sbracket(g3, g4).str() == "2*L[0] - 2/3*c");

  // tilde: [G_{1/2}, G_{-1/2}] = c
  auto t1 = SuperElement::G(x.tilde, x.r(1, 2));
  auto t2 = SuperElement::G(x.tilde, x.r(-1, 2));
  CHECK(sbracket(t1, t2) == SuperElement::central(x.tilde));

  // [L_mu, G_nu] coefficients per variant
  auto l1 = SuperElement::L(x.ns, x.q.one());
  CHECK(sbracket(l1, g1) == x.q.zero() * g1); // (1/2 - 1/2) G_{3/2} = 0
  auto l1t = SuperElement::L(x.tilde, x.q.one());
  CHECK(sbracket(l1t, t1) == x.q.one() * SuperElement::G(x.tilde, x.r(3, 2)));

  CHECK_THROWS_AS(sbracket(g1, t1), Error); // VariantMismatch
}

TEST_CASE("coset condition 2*alpha in M") {
  Fix x;
  CHECK_THROWS_AS(SuperAlgebra(x.z, x.q.of(Rat(1, 3)), SuperVariant::NS), Error);
  // alpha = 0 and alpha = 1/2 are fine over Z
  SuperAlgebra a0(x.z, x.q.zero(), SuperVariant::NS);
  SuperAlgebra ah(x.z, x.q.of(Rat(1, 2)), SuperVariant::NS);
  CHECK(a0.valid());
  CHECK(ah.valid());
}

TEST_CASE("super jacobi residual vanishes; mixed parity rejected") {
  Fix x;
  auto g1 = SuperElement::G(x.ns, x.r(1, 2));
  auto g2 = SuperElement::G(x.ns, x.r(-1, 2));
  auto g3 = SuperElement::G(x.ns, x.r(-3, 2));
  auto l1 = SuperElement::L(x.ns, x.q.one());
  auto l2 = SuperElement::L(x.ns, x.q.of_int(2));
  CHECK(super_jacobi_residual(g1, g1, g2).is_zero());
  CHECK(super_jacobi_residual(l1, g1, g3).is_zero());
  CHECK(super_jacobi_residual(l1, l2, g1).is_zero());
  auto tl1 = SuperElement::L(x.tilde, x.q.one());
  auto tl2 = SuperElement::L(x.tilde, x.q.of_int(2));
  CHECK(super_jacobi_residual(tl1, tl2, SuperElement::G(x.tilde, x.r(1, 2))).is_zero());
  CHECK_THROWS_AS(super_jacobi_residual(l1 + g1, l2, g2), Error);

  Sampler s(47);
  for (const SuperAlgebra& alg : {x.ns, x.tilde}) {
    for (int i = 0; i < 150; ++i) {
      auto a = s.super_element(alg, static_cast<int>(s.int_in(0, 1)));
      auto b = s.super_element(alg, static_cast<int>(s.int_in(0, 1)));
      auto c = s.super_element(alg, static_cast<int>(s.int_in(0, 1)));
      CHECK(super_jacobi_residual(a, b, c).is_zero());
    }
  }
}

TEST_CASE("even part reproduces the Vir bracket") {
  Fix x;
  Sampler s(53);
  for (int i = 0; i < 100; ++i) {
    auto a = s.super_element(x.ns, 0);
    auto b = s.super_element(x.ns, 0);
    CHECK(sbracket(a, b).even_part() == bracket(a.even_part(), b.even_part()));
  }
}

TEST_CASE("extension data checkers") {
  Fix x;
  auto cw = box_window(x.z, 4); // 9 coset points
  auto ew = box_window(x.z, 10);

  auto tilde_data = canonical_extension(x.tilde, SuperVariant::Tilde, cw);
  CHECK(extension_check(x.tilde, tilde_data, cw, ew).empty());

  auto ns_data = canonical_extension(x.ns, SuperVariant::NS, cw);
  CHECK(extension_check(x.ns, ns_data, cw, ew).empty());

  // perturb y at +-1/2: a (5.4b)-family instance with lambda+mu+nu = 0 must fire
  auto bad = ns_data;
  bad.y[*x.z.coords(x.q.zero())] = x.q.one();       // y_{1/2}, key = coords(1/2 - 1/2)
  bad.y[*x.z.coords(x.q.of_int(-1))] = x.q.one();   // y_{-1/2}
  auto v = extension_check(x.ns, bad, cw, ew);
  CHECK_FALSE(v.empty());
  bool has_54b = false;
  for (const auto& viol : v)
    if (viol.equation == "5.4b" || viol.equation == "5.5") has_54b = true;
  CHECK(has_54b);

  // asymmetric y violates (5.6)
  auto asym = ns_data;
  asym.y[*x.z.coords(x.q.zero())] = x.q.of_int(7);
  bool has_56 = false;
  for (const auto& viol : extension_check(x.ns, asym, cw, ew))
    if (viol.equation == "5.6") has_56 = true;
  CHECK(has_56);

  // incomplete tables raise WindowNotClosed
  auto chopped = ns_data;
  chopped.y.erase(chopped.y.begin());
  CHECK_THROWS_AS(extension_check(x.ns, chopped, cw, ew), Error);
}

TEST_CASE("super module actions, one display each") {
  Fix x;
  // SAab a=0, b=1/2: G_eta w_nu = nu v_{eta+nu}
  auto saab = SuperFamily::SAab(x.ns, x.q.zero(), x.r(1, 2));
  auto w = SuperModuleVector::w_unit(saab, x.r(3, 2));
  auto g = SuperElement::G(x.ns, x.r(1, 2));
  CHECK(sact(saab, g, w) == [&] {
    auto v = SuperModuleVector::v_unit(saab, x.r(2));
    SuperModuleVector scaled(saab);
    for (const auto& [k, c] : v.vterms()) scaled.add_v(k, x.r(3, 2) * c);
    return scaled;
  }());

  // SAab: G_eta v_mu = w_{eta+mu}
  CHECK(sact(saab, g, SuperModuleVector::v_unit(saab, x.q.one())) ==
        SuperModuleVector::w_unit(saab, x.r(3, 2)));

  // SAa a=3: G_{1/2} v_0 = 4 w_{1/2}
  auto saa = SuperFamily::SAa(x.ns, x.q.of_int(3));
  auto got = sact(saa, g, SuperModuleVector::v_unit(saa, x.q.zero()));
  auto expect = [&] {
    auto u = SuperModuleVector::w_unit(saa, x.r(1, 2));
    SuperModuleVector scaled(saa);
    for (const auto& [k, c] : u.wterms()) scaled.add_w(k, x.r(4) * c);
    return scaled;
  }();
  CHECK(got == expect);
  CHECK(got.str() == "4*w[1/2]");

  // central element acts as zero
  CHECK(sact(saab, SuperElement::central(x.ns), w).is_zero());

  // families require the ns variant
  CHECK_THROWS_AS(SuperFamily::SAab(x.tilde, x.q.zero(), x.q.zero()), Error);
}

TEST_CASE("super module axiom residuals, including special weights") {
  Fix x;
  Sampler s(59);
  auto saab = SuperFamily::SAab(x.ns, x.r(1, 3), x.r(2, 7));
  auto saa = SuperFamily::SAa(x.ns, x.r(-5, 2));
  auto sba = SuperFamily::SBa(x.ns, x.r(4, 3));

  // {G_eta, G_eta'} consistency on v_mu equals the action of 2 L_{eta+eta'}
  auto g1 = SuperElement::G(x.ns, x.r(1, 2));
  auto g2 = SuperElement::G(x.ns, x.r(3, 2));
  auto v1 = SuperModuleVector::v_unit(saab, x.q.one());
  CHECK(saxiom_residual(saab, g1, g2, v1).is_zero());
  CHECK(sact(saab, sbracket(g1, g2), v1) ==
        sact(saab, g1, sact(saab, g2, v1)) + sact(saab, g2, sact(saab, g1, v1)));

  // x = c gives zero
  CHECK(saxiom_residual(saab, SuperElement::central(x.ns), g1, v1).is_zero());

  // SBa boundary weight instance: (G_eta, v_{-eta})
  auto vb = SuperModuleVector::v_unit(sba, x.r(-1, 2));
  CHECK(saxiom_residual(sba, g1, SuperElement::L(x.ns, x.q.one()), vb).is_zero());

  // SAa special weight v_0 and SBa special weight w_{-lambda}
  CHECK(saxiom_residual(saa, g1, g2, SuperModuleVector::v_unit(saa, x.q.zero())).is_zero());
  CHECK(saxiom_residual(sba, SuperElement::L(x.ns, x.q.of_int(2)), g1,
                        SuperModuleVector::w_unit(sba, x.q.of_int(-2)))
            .is_zero());

  for (const auto& fam : {saab, saa, sba}) {
    for (int i = 0; i < 120; ++i) {
      auto a = s.super_element(x.ns, static_cast<int>(s.int_in(0, 1)), 2, 3);
      auto b = s.super_element(x.ns, static_cast<int>(s.int_in(0, 1)), 2, 3);
      const Scalar voff = fam.v_on_coset() ? x.r(1, 2) : x.q.zero();
      auto v = SuperModuleVector::v_unit(fam, voff + s.member(x.z, 3));
      CHECK(saxiom_residual(fam, a, b, v).is_zero());
      const Scalar woff = fam.v_on_coset() ? x.q.zero() : x.r(1, 2);
      auto wv = SuperModuleVector::w_unit(fam, woff + s.member(x.z, 3));
      CHECK(saxiom_residual(fam, a, b, wv).is_zero());
    }
  }
}

TEST_CASE("parity bookkeeping") {
  Fix x;
  auto g = SuperElement::G(x.ns, x.r(1, 2));
  auto l = SuperElement::L(x.ns, x.q.one());
  CHECK(*g.parity() == 1);
  CHECK(*l.parity() == 0);
  CHECK(*SuperElement::central(x.ns).parity() == 0);
  CHECK(*SuperElement::zero(x.ns).parity() == 0);
  CHECK_FALSE((g + l).parity().has_value());
  CHECK((g + l).str() == "L[1] + G[1/2]");
}
