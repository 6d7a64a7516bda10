#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcensus/num_util.hpp"
#include "qcensus/order.hpp"
#include "qcensus/subfields.hpp"

using namespace qc;

TEST_CASE("make_field signatures and errors") {
    auto f1 = make_field(IntPoly({1, 0, 0, 0, 1}));  // x^4+1
    CHECK(f1->real_embeddings() == 0);
    CHECK(f1->complex_pairs() == 2);
    CHECK(f1->totally_complex());

    auto f2 = make_field(IntPoly({-5, 0, 1}));  // x^2-5
    CHECK(f2->real_embeddings() == 2);
    CHECK(f2->complex_pairs() == 0);

    auto f3 = make_field(IntPoly({1, 0, -1, 0, 1}));  // x^4-x^2+1, 12th cyclotomic
    CHECK(f3->real_embeddings() == 0);
    CHECK(f3->complex_pairs() == 2);

    CHECK_THROWS_AS(make_field(IntPoly({-1, 0, 1})), not_a_field_error);       // x^2-1
    CHECK_THROWS_AS(make_field(IntPoly({1, 2, 0, 0, 1})), not_a_field_error);  // has root -1
    CHECK_THROWS_AS(make_field(IntPoly({4, 0, 4, 0, 1})), not_a_field_error);  // (x^2+2)^2
    // x^4 + 4 = (x^2-2x+2)(x^2+2x+2): reducible without rational roots
    CHECK_THROWS_AS(make_field(IntPoly({4, 0, 0, 0, 1})), not_a_field_error);
}

TEST_CASE("unsupported degree") {
    CHECK_THROWS_AS(make_field(IntPoly({1, 1, 0, 1})), unsupported_degree_error);  // deg 3
    CHECK_THROWS_AS(make_field(IntPoly({2, 1})), unsupported_degree_error);        // deg 1
}

TEST_CASE("equation_order discs") {
    CHECK(equation_order(make_field(IntPoly({-5, 0, 1}))).disc() == 20);
    CHECK(equation_order(make_field(IntPoly({1, 0, 0, 0, 1}))).disc() == 256);
    CHECK(equation_order(make_field(IntPoly({1, 0, 1}))).disc() == -4);
}

TEST_CASE("p_maximal_order on x^2-5 at 2 gives Z[(1+sqrt5)/2]") {
    auto F = make_field(IntPoly({-5, 0, 1}));
    Order o = p_maximal_order(equation_order(F), 2);
    CHECK(o.disc() == 5);
    CHECK(o.maximal_at().count(2) == 1);
    // basis must contain (1+theta)/2: check the element is in the lattice
    QVec half{mpq_class(1, 2), mpq_class(1, 2)};
    CHECK(o.contains(half));
    // verify by minimal polynomial x^2 - x - 1
    ZVec coords;
    REQUIRE(o.from_power_basis(half, coords));
    CHECK(o.min_poly_of(coords) == IntPoly({-1, -1, 1}));
    // idempotent
    Order o2 = p_maximal_order(o, 2);
    CHECK(o2.disc() == 5);
}

TEST_CASE("p_maximal_order leaves maximal orders alone") {
    // Z[i] at 2: disc -4 stays (Dedekind criterion)
    auto F = make_field(IntPoly({1, 0, 1}));
    Order o = p_maximal_order(equation_order(F), 2);
    CHECK(o.disc() == -4);

    // Z[zeta8] at 2: disc 256 = field disc (ramified only at 2)
    auto F8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    Order o8 = p_maximal_order(equation_order(F8), 2);
    CHECK(o8.disc() == 256);
}

TEST_CASE("order_maximal_at") {
    // x^2-5 with S={2}: disc 5
    auto F = make_field(IntPoly({-5, 0, 1}));
    Order o = order_maximal_at(F, {2});
    CHECK(o.disc() == 5);

    // Q(zeta5) with S={2,3}: power basis already maximal, disc 125
    auto F5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    Order o5 = order_maximal_at(F5, {2, 3});
    CHECK(o5.disc() == 125);

    // S empty, no global flag: equation order unchanged
    Order oe = order_maximal_at(F5, {});
    CHECK(oe.disc() == equation_order(F5).disc());

    // global: maximal order of Q(zeta12), field disc 144
    auto F12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    Order o12 = order_maximal_at(F12, {}, true);
    CHECK(o12.disc() == 144);
    CHECK(F12->field_disc() == 144);
}

TEST_CASE("maximal order disc of quadratic fields matches the classical formula") {
    for (long D = 2; D <= 200; ++D) {
        mpz_class Dz(D);
        if (squarefree_part(Dz) != Dz) continue;  // want squarefree
        for (long sgn : {1L, -1L}) {
            mpz_class d = sgn * Dz;
            if (d == 1) continue;
            auto F = make_field(IntPoly({mpz_class(-d), mpz_class(0), mpz_class(1)}));
            Order om = order_maximal_at(F, {}, true);
            mpz_class expect = (((d % 4) + 4) % 4 == 1) ? d : 4 * d;
            CHECK(om.disc() == expect);
        }
    }
}

TEST_CASE("multiplicative closure invariant on constructed orders") {
    auto F = make_field(IntPoly({1, 1, 1, 1, 1}));
    Order o = order_maximal_at(F, {2, 3});
    int n = o.degree();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ZVec a(n, mpz_class(0)), b(n, mpz_class(0));
            a[i] = 1;
            b[j] = 1;
            ZVec c = o.mul(a, b);  // throws inside if not closed
            CHECK(static_cast<int>(c.size()) == n);
        }
}

TEST_CASE("norm and trace") {
    auto F = make_field(IntPoly({-5, 0, 1}));
    Order o = order_maximal_at(F, {2});
    // golden ratio (1+sqrt5)/2 has norm -1, trace 1
    ZVec phi;
    REQUIRE(o.from_power_basis({mpq_class(1, 2), mpq_class(1, 2)}, phi));
    CHECK(o.norm(phi) == -1);
    CHECK(o.trace(phi) == 1);
}

TEST_CASE("quadratic_subfields") {
    // Q(zeta8): {-1, 2, -2}
    auto F8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto subs8 = quadratic_subfields(F8);
    REQUIRE(subs8.size() == 3);
    CHECK(subs8[0] == -2);
    CHECK(subs8[1] == -1);
    CHECK(subs8[2] == 2);

    // Q(zeta5): cyclic quartic, exactly one subfield, d = 5
    auto F5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto subs5 = quadratic_subfields(F5);
    REQUIRE(subs5.size() == 1);
    CHECK(subs5[0] == 5);

    // S4 quartic: x^4 - x - 1 has Galois group S4: no quadratic subfield
    auto Fs4 = make_field(IntPoly({-1, -1, 0, 0, 1}));
    CHECK(quadratic_subfields(Fs4).empty());

    // Q(zeta12): subfields -1, 3, -3
    auto F12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    auto subs12 = quadratic_subfields(F12);
    REQUIRE(subs12.size() == 3);
    CHECK(subs12[0] == -3);
    CHECK(subs12[1] == -1);
    CHECK(subs12[2] == 3);
}

TEST_CASE("automorphisms") {
    auto F5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    CHECK(automorphism_count_exact(F5) == 4);  // C4
    CHECK(field_automorphisms(F5).size() == 4);

    auto F8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    CHECK(automorphism_count_exact(F8) == 4);  // V4
    CHECK(field_automorphisms(F8).size() == 4);

    auto Fs4 = make_field(IntPoly({-1, -1, 0, 0, 1}));
    CHECK(automorphism_count_exact(Fs4) == 1);
    CHECK(field_automorphisms(Fs4).size() == 1);

    // automorphisms permute the roots: sigma applied to theta satisfies f
    auto auts = field_automorphisms(F5);
    const IntPoly& f = F5->min_poly();
    for (auto& s : auts) {
        QVec th{mpq_class(0), mpq_class(1), mpq_class(0), mpq_class(0)};
        QVec img = apply_automorphism(F5, s, th);
        // f(img) = 0 mod f: check via repeated multiply
        QVec acc(4, mpq_class(0));
        for (int k = 4; k >= 0; --k) {
            // acc = acc * img + f_k
            QVec prod(7, mpq_class(0));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) prod[i + j] += acc[i] * img[j];
            for (int kk = 6; kk >= 4; --kk) {
                if (prod[kk] == 0) continue;
                mpq_class c = prod[kk];
                prod[kk] = 0;
                for (int j = 0; j < 4; ++j) prod[kk - 4 + j] -= c * mpq_class(f.coeff(j));
            }
            for (int i = 0; i < 4; ++i) acc[i] = prod[i];
            acc[0] += mpq_class(f.coeff(k));
        }
        for (int i = 0; i < 4; ++i) CHECK(acc[i] == 0);
    }
}

TEST_CASE("roots_in_field and isomorphism") {
    auto F8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    // x^2+1 has roots in Q(zeta8): zeta8^2 = i
    auto roots = roots_in_field(IntPoly({1, 0, 1}), F8);
    CHECK(roots.size() == 2);
    // x^2-3 has no root in Q(zeta8)
    CHECK(roots_in_field(IntPoly({-3, 0, 1}), F8).empty());

    // isomorphic presentations: x^4+1 vs x^4+4x^2+2 (Q(zeta8) contains sqrt2... )
    // x^4 - 4x^2 + 2 generates Q(sqrt(2+sqrt2)) which is real; use instead the
    // standard pair x^4+1 and x^4+2x^2+2 (zeta8 * (1+i) flavour): check both ways
    auto G = make_field(IntPoly({2, 0, 2, 0, 1}));
    bool iso = fields_isomorphic(F8, G);
    bool iso_rev = fields_isomorphic(G, F8);
    CHECK(iso == iso_rev);

    auto F5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    CHECK_FALSE(fields_isomorphic(F8, F5));
    CHECK(fields_isomorphic(F5, F5));
}
