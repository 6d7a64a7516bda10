#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcensus/quadratic.hpp"
#include "qcensus/relations.hpp"
#include "qcensus/splitting.hpp"
#include "qcensus/units.hpp"
#include "qcensus/subfields.hpp"
#include "qcensus/roots.hpp"

using namespace qc;

namespace {
OrderHandle max_order(const FieldPtr& f) { return make_order_handle(order_maximal_at(f, {}, true)); }
}  // namespace

TEST_CASE("regulator floor justification: no tiny quartic units") {
    /* The certificate in fundamental_unit relies on: a non-torsion unit of a
     * totally complex quartic order has rho = |log a| > 0.05.  Verify the
     * integer-pinching numerically: for rho <= 0.05 the quantities
     * c3 - c1 = 2(a^{-1} - a)(cos t - cos p) and
     * c2 - 2 - c3^2/4-ish force non-integrality.  Exhaustive scan over the
     * finitely many integer quartics x^4+ax^3+bx^2+cx+1 whose roots could
     * realise rho <= 0.05 (coefficient boxes |a|,|c| <= 4, |b| <= 7). */
    double worst = 1e9;
    for (int a = -4; a <= 4; ++a)
        for (int b = -7; b <= 7; ++b)
            for (int c = -4; c <= 4; ++c) {
                IntPoly f({1, c, b, a, 1});
                if (f.degree() != 4 || !f.is_squarefree()) continue;
                if (count_real_roots(f) != 0) continue;
                // cyclotomic (torsion) minimal polynomials are excluded
                if (f == IntPoly({1, 1, 1, 1, 1}) || f == IntPoly({1, 0, 0, 0, 1}) ||
                    f == IntPoly({1, -1, 1, -1, 1}) || f == IntPoly({1, 0, -1, 0, 1}) ||
                    f == IntPoly({1, 0, 1, 0, 1}) || f == IntPoly({1, 1, 2, 1, 1}) ||
                    f == IntPoly({1, -1, 2, -1, 1}) || f == IntPoly({1, 2, 3, 2, 1}) ||
                    f == IntPoly({1, -2, 3, -2, 1}))
                    continue;
                auto roots = complex_roots(f, 1e-12);
                // product of |roots| = 1; rho = max |log |root||
                double rho = 0;
                bool all_unit_circle = true;
                for (auto& r : roots) {
                    double m = std::hypot(r.re.mid_double(), r.im.mid_double());
                    rho = std::max(rho, std::abs(std::log(m)));
                    if (std::abs(m - 1.0) > 1e-9) all_unit_circle = false;
                }
                if (!all_unit_circle && rho > 1e-9) worst = std::min(worst, rho);
            }
    CHECK(worst > 0.05);
}

TEST_CASE("torsion units") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto [mu5, g5] = torsion_units(max_order(f5));
    CHECK(mu5 == 10);
    // the generator's minimal polynomial is the 10th cyclotomic
    CHECK(max_order(f5)->min_poly_of(g5) == IntPoly({1, -1, 1, -1, 1}));

    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto [mu8, g8] = torsion_units(max_order(f8));
    CHECK(mu8 == 8);
    CHECK(max_order(f8)->min_poly_of(g8) == IntPoly({1, 0, 0, 0, 1}));

    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    auto [mu12, g12] = torsion_units(max_order(f12));
    CHECK(mu12 == 12);
    CHECK(max_order(f12)->min_poly_of(g12) == IntPoly({1, 0, -1, 0, 1}));

    auto f10 = make_field(IntPoly({-10, 0, 1}));
    auto [mu10, g10] = torsion_units(make_order_handle(order_maximal_at(f10, {}, true)));
    CHECK(mu10 == 2);

    // an S4 totally complex quartic has only +-1
    auto fs4 = make_field(IntPoly({1, -1, 0, 0, 1}));
    REQUIRE(fs4->totally_complex());
    auto [mus4, gs4] = torsion_units(max_order(fs4));
    CHECK(mus4 == 2);
}

TEST_CASE("fundamental unit of real quadratic orders") {
    // Z[(1+sqrt5)/2]: R = log((1+sqrt5)/2)
    auto f5 = make_field(IntPoly({-5, 0, 1}));
    auto o5 = make_order_handle(order_maximal_at(f5, {}, true));
    UnitData u5 = fundamental_unit(o5);
    CHECK(u5.regulator.mid_double() == doctest::Approx(0.4812118250596).epsilon(1e-10));
    CHECK(u5.mu == 2);

    // Z[sqrt2] (disc 8): R = log(1+sqrt2)
    auto f2 = make_field(IntPoly({-2, 0, 1}));
    auto o2 = make_order_handle(order_maximal_at(f2, {}, true));
    UnitData u2 = fundamental_unit(o2);
    CHECK(u2.regulator.mid_double() == doctest::Approx(0.8813735870195).epsilon(1e-10));

    // continued-fraction oracle agreement for a batch of discs
    for (long D : {5L, 8L, 12L, 13L, 40L, 44L, 229L, 1024L + 1L}) {
        if (!is_quadratic_discriminant(D)) continue;
        auto F = make_field(IntPoly({mpz_class(-D), mpz_class(0), mpz_class(1)}));
        Order eq = equation_order(F);
        // order of discriminant D: p-maximalise nothing; the equation order of
        // x^2 - D has disc 4D; for D = 1 mod 4 the PQa convention targets
        // disc D, so build via order_maximal_at at 2 when needed
        double R_oracle = quadratic_regulator(D);
        long eq_disc = 4 * D;
        OrderHandle oh;
        if (eq.disc() == D)
            oh = make_order_handle(std::move(eq));
        else if (D % 4 == 1) {
            oh = make_order_handle(p_maximal_order(eq, 2));
            REQUIRE(oh->disc() == D);
        } else {
            REQUIRE(eq.disc() == eq_disc);
            continue;  // disc 4D order: oracle below uses D directly
        }
        UnitData u = fundamental_unit(oh);
        CHECK(u.regulator.mid_double() == doctest::Approx(R_oracle).epsilon(1e-9));
    }
}

TEST_CASE("fundamental unit of Q(zeta5): regulator 2 log(golden)") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o = max_order(f5);
    UnitData u = fundamental_unit(o);
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(u.rho.mid_double() == doctest::Approx(std::log(golden)).epsilon(1e-9));
    CHECK(u.regulator.mid_double() == doctest::Approx(2 * std::log(golden)).epsilon(1e-9));
    CHECK(u.mu == 10);
    CHECK(o->norm(u.fund_unit) == 1);

    // enumeration oracle: no unit with smaller positive rho exists within the
    // certified ball 2(e^{2 rho} + e^{-2 rho})
    double rho = u.rho.mid_double();
    double bound = 2 * (std::exp(2 * rho) + std::exp(-2 * rho)) * 1.0001;
    auto gram = o->t2_gram_upper(192);
    auto vecs = enumerate_t2_ball(gram, bound);
    double best = 1e18;
    for (auto& v : vecs) {
        mpz_class nrm = o->norm(v);
        if (nrm != 1 && nrm != -1) continue;
        RBall r(256);
        CBall e0 = o->embed(v, 0, 256);
        RBall ab = e0.abs();
        if (!ab.is_positive()) continue;
        double rr = std::abs(std::log(ab.mid_double()));
        if (rr > 1e-9) best = std::min(best, rr);
    }
    CHECK(best == doctest::Approx(rho).epsilon(1e-9));
}

TEST_CASE("fundamental unit of Q(zeta12) and a Cc field") {
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    UnitData u12 = fundamental_unit(max_order(f12));
    // Q(zeta12) contains Q(sqrt3), fundamental unit 2+sqrt3, and the
    // cyclotomic unit of half that logarithm exists: R(O) = 2 rho with
    // rho = log(2+sqrt3)/2 = log(1+sqrt3 over sqrt2)... just sanity checks:
    CHECK(u12.rho.mid_double() > 0.05);
    CHECK(u12.mu == 12);

    // a Cc-style field: x^4+2x^2+2 (D4, imaginary quadratic subfield only)
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    UnitData ud4 = fundamental_unit(max_order(fd4));
    CHECK(ud4.rho.mid_double() > 0.05);
    CHECK(max_order(fd4)->norm(ud4.fund_unit) == 1);
    // angles well defined and in (0, pi)
    CHECK(ud4.theta.mid_double() > 0);
    CHECK(ud4.theta.mid_double() < 3.14159266);
    CHECK(ud4.phi.mid_double() > 0);
    CHECK(ud4.phi.mid_double() < 3.14159266);
}

TEST_CASE("regulator invariance under basis permutation seeds") {
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    UnitData a = fundamental_unit(max_order(fd4));
    UnitSearchBudget b2;
    b2.max_relations = 300;
    UnitData b = fundamental_unit(max_order(fd4), b2);
    CHECK(std::abs(a.regulator.mid_double() - b.regulator.mid_double()) < 1e-12);
}

TEST_CASE("kappa") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o5 = max_order(f5);
    UnitData u5 = fundamental_unit(o5);
    CHECK(kappa(o5, u5) == 4);  // C4 Galois group permutes fundamental units

    // trivial automorphism group: kappa = 1
    auto fs4 = make_field(IntPoly({1, -1, 0, 0, 1}));
    auto os4 = max_order(fs4);
    UnitData us4 = fundamental_unit(os4);
    CHECK(kappa(os4, us4) == 1);
}

TEST_CASE("nu invariant dual route and symmetry") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o5 = max_order(f5);
    UnitData u5 = fundamental_unit(o5);
    RBall nu5 = nu_invariant(o5, u5);
    CHECK(nu5.mid_double() >= 0.0);
    CHECK(nu5.mid_double() <= 16.0);
    CHECK(nu5.rad_double() < 1e-9);

    // invariance under eps -> zeta eps^{-1}: recompute with a replaced rep
    UnitData alt = u5;
    {
        auto field = o5->field();
        QVec eps = o5->to_power_basis(u5.fund_unit);
        QVec zeps = field_mul(field, o5->to_power_basis(u5.torsion_gen),
                              field_inverse(field, eps));
        ZVec coords;
        REQUIRE(o5->from_power_basis(zeps, coords));
        alt.fund_unit = coords;
    }
    RBall nu_alt = nu_invariant(o5, alt);
    CHECK(std::abs(nu5.mid_double() - nu_alt.mid_double()) < 1e-9);

    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto od4 = max_order(fd4);
    UnitData ud4 = fundamental_unit(od4);
    RBall nud4 = nu_invariant(od4, ud4);
    CHECK(nud4.mid_double() >= 0.0);
    CHECK(nud4.mid_double() <= 16.0);
}

TEST_CASE("weak neatness bridges Cc versus Cr") {
    // Cr: Q(zeta5) (real subfield Q(sqrt5)) is not weakly neat
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o5 = max_order(f5);
    CHECK_FALSE(weakly_neat(o5, fundamental_unit(o5)));

    // Cc-style: x^4+2x^2+2 has no real quadratic subfield
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    bool has_real = false;
    for (auto& d : quadratic_subfields(fd4))
        if (d > 0) has_real = true;
    REQUIRE_FALSE(has_real);
    auto od4 = max_order(fd4);
    CHECK(weakly_neat(od4, fundamental_unit(od4)));
}

TEST_CASE("unit power descent into a suborder") {
    // suborder Z[theta] of Q(sqrt5): eps_sub = golden^3 = 2 + sqrt5
    auto f5 = make_field(IntPoly({-5, 0, 1}));
    Order eq = equation_order(f5);  // disc 20, index 2 in the maximal order
    auto oh = make_order_handle(std::move(eq));
    UnitData u = fundamental_unit(oh);
    // golden^3 = 2+sqrt5: log = 1.4436354751788103
    CHECK(u.regulator.mid_double() == doctest::Approx(3 * 0.4812118250596).epsilon(1e-9));
}
