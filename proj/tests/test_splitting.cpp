#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcensus/splitting.hpp"
#include "qcensus/subfields.hpp"

using namespace qc;

namespace {
OrderHandle max_at(const FieldPtr& f, std::set<unsigned long> s, bool global = false) {
    return make_order_handle(order_maximal_at(f, s, global));
}
}  // namespace

TEST_CASE("splitting types of spec examples") {
    // Q(zeta5) at 2: irreducible mod 2 -> [(1,4)]
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o5 = max_at(f5, {2});
    auto st = splitting_type(o5, 2);
    REQUIRE(st.ef.size() == 1);
    CHECK(st.ef[0] == std::make_pair(1, 4));

    // Q(zeta8) at 2: totally ramified -> [(4,1)]
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto o8 = max_at(f8, {2});
    auto st8 = splitting_type(o8, 2);
    REQUIRE(st8.ef.size() == 1);
    CHECK(st8.ef[0] == std::make_pair(4, 1));

    // Q(sqrt5) at 11: split, 5 is a QR mod 11 (4^2 = 16 = 5)
    auto fq = make_field(IntPoly({-5, 0, 1}));
    auto oq = max_at(fq, {11});
    auto stq = splitting_type(oq, 11);
    REQUIRE(stq.ef.size() == 2);
    CHECK(stq.ef[0] == std::make_pair(1, 1));
    CHECK(stq.ef[1] == std::make_pair(1, 1));

    // Q(zeta8) at 3: two primes of inertia degree 2 (x^4+1 = two quadratics mod 3)
    auto o83 = max_at(f8, {3});
    auto st83 = splitting_type(o83, 3);
    REQUIRE(st83.ef.size() == 2);
    CHECK(st83.ef[0] == std::make_pair(1, 2));
    CHECK(st83.ef[1] == std::make_pair(1, 2));

    CHECK_THROWS_AS(splitting_type(make_order_handle(equation_order(f5)), 2),
                    invalid_argument_error);
}

TEST_CASE("splitting at an index prime uses the p-maximal basis") {
    // x^2 - 5 at 2: index prime of the equation order; maximal order is inert
    // at 2 (disc 5, kronecker(5,2) = -1): [(1,2)]
    auto f = make_field(IntPoly({-5, 0, 1}));
    auto o = max_at(f, {2});
    auto st = splitting_type(o, 2);
    REQUIRE(st.ef.size() == 1);
    CHECK(st.ef[0] == std::make_pair(1, 2));
}

TEST_CASE("is_non_decomposed") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o = max_at(f5, {2, 3, 11});
    CHECK(is_non_decomposed(o, 2));
    CHECK(is_non_decomposed(o, 3));
    CHECK_FALSE(is_non_decomposed(o, 11));  // 11 = 1 mod 5 splits completely

    auto fq = make_field(IntPoly({-5, 0, 1}));
    CHECK_FALSE(is_non_decomposed(max_at(fq, {11}), 11));
}

TEST_CASE("lambda_S") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o = max_at(f5, {2, 3});
    CHECK(lambda_S(o, {2, 3}) == 16);  // f_2 = f_3 = 4

    // odd or empty S rejected
    CHECK_THROWS_AS(lambda_S(o, {2}), invalid_argument_error);
    CHECK_THROWS_AS(lambda_S(o, {}), invalid_argument_error);

    // Q(zeta8): 3 is decomposed, so {2,3} leaves C(S)
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto o8 = max_at(f8, {2, 3});
    CHECK_THROWS_AS(lambda_S(o8, {2, 3}), field_not_in_cs_error);

    // Q(zeta12) with S = {2,3}: both non-decomposed with e = f = 2
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    auto o12 = max_at(f12, {2, 3});
    CHECK(lambda_S(o12, {2, 3}) == 4);  // f_2 = 2 and f_3 = 2
}

TEST_CASE("sum e_i f_i equals the degree across a small corpus") {
    std::vector<IntPoly> polys = {
        IntPoly({1, 1, 1, 1, 1}), IntPoly({1, 0, 0, 0, 1}), IntPoly({1, 0, -1, 0, 1}),
        IntPoly({-1, -1, 0, 0, 1}), IntPoly({1, 0, 3, 0, 1}), IntPoly({2, 0, 2, 0, 1}),
        IntPoly({-5, 0, 1}), IntPoly({1, 0, 1}), IntPoly({-10, 0, 1})};
    for (auto& f : polys) {
        auto F = make_field(f);
        for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 13ul}) {
            auto o = max_at(F, {p});
            auto st = splitting_type(o, p);
            CHECK(st.degree_sum() == F->degree());
        }
    }
}

TEST_CASE("classify_field") {
    // Q(zeta5) with S={2,3}: in C(S) and has the real subfield Q(sqrt5): Cr
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    CHECK(classify_field(f5, {2, 3}) == FieldClass::Cr);

    // Q(zeta12) with S={2,3}: non-decomposed at both, real subfield Q(sqrt3): Cr
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    CHECK(classify_field(f12, {2, 3}) == FieldClass::Cr);

    // Q(zeta8) with S={2,3}: 3 decomposed: NotInC
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    CHECK(classify_field(f8, {2, 3}) == FieldClass::NotInC);

    // x^4 - x^3 + 2x + 1 is a totally complex S4 quartic (disc 697 < 0? check
    // via class): pick instead x^4+x^3+x^2+x+2... use a verified Cc example:
    // x^4 + 2x^2 + 2 (Eisenstein): totally complex, subfields: resolvent
    // cubic has root;  D4 with imaginary quadratic subfield only.
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto cls = classify_field(fd4, {2, 3});
    // whatever the class, it must not be Cr if no positive d exists
    bool has_real = false;
    for (auto& d : quadratic_subfields(fd4))
        if (d > 0) has_real = true;
    if (cls == FieldClass::Cr) CHECK(has_real);
    if (cls == FieldClass::Cc) CHECK_FALSE(has_real);
}

TEST_CASE("prime ideal norms multiply correctly") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o = max_at(f5, {5});
    // 5 is totally ramified in Q(zeta5): one prime, e=4, f=1
    auto pf = prime_ideals_above(o, 5);
    REQUIRE(pf.size() == 1);
    CHECK(pf[0].e == 4);
    CHECK(pf[0].f == 1);
    CHECK(pf[0].ideal.norm == 5);
    // P^4 = (5)
    OrderIdeal p4 = ideal_pow(pf[0].ideal, 4);
    ZVec five = o->one();
    for (auto& v : five) v *= 5;
    OrderIdeal i5 = ideal_principal(o, five);
    CHECK(ideal_equal(p4, i5));
}

TEST_CASE("ideal norm multiplicativity") {
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto o = max_at(f8, {2, 3, 5});
    auto p2 = prime_ideals_above(o, 2);
    auto p3 = prime_ideals_above(o, 3);
    OrderIdeal a = p2[0].ideal;
    OrderIdeal b = p3[0].ideal;
    OrderIdeal ab = ideal_mul(a, b);
    CHECK(ab.norm == a.norm * b.norm);
    OrderIdeal asq = ideal_mul(a, a);
    CHECK(asq.norm == a.norm * a.norm);
}
