#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcensus/class_group.hpp"
#include "qcensus/quadratic.hpp"
#include "qcensus/splitting.hpp"
#include "qcensus/num_util.hpp"

using namespace qc;

namespace {
OrderHandle max_order(const FieldPtr& f) {
    return make_order_handle(order_maximal_at(f, {}, true));
}
}  // namespace

TEST_CASE("minkowski_bound") {
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    CHECK(minkowski_bound(f8, mpz_class(256)) == doctest::Approx(2.432).epsilon(1e-3));
    auto f5 = make_field(IntPoly({-5, 0, 1}));
    CHECK(minkowski_bound(f5, mpz_class(5)) == doctest::Approx(1.118).epsilon(1e-3));
    CHECK_THROWS_AS(minkowski_bound(f5, mpz_class(0)), invalid_argument_error);
}

TEST_CASE("class numbers of classical quadratic orders") {
    // Z[(1+sqrt5)/2]: h = 1
    auto f5 = make_field(IntPoly({-5, 0, 1}));
    CHECK(class_number(max_order(f5)).h == 1);

    // disc 40 = Q(sqrt10): h = 2
    auto f10 = make_field(IntPoly({-10, 0, 1}));
    auto r10 = class_number(max_order(f10));
    CHECK(r10.h == 2);
    REQUIRE(r10.elementary_divisors.size() == 1);
    CHECK(r10.elementary_divisors[0] == 2);

    // forms oracle agrees
    CHECK(quadratic_class_number(40) == 2);
    CHECK(quadratic_class_number(5) == 1);

    // disc 229: h = 3 (classical)
    auto f229 = make_field(IntPoly({-229, 0, 1}));
    CHECK(class_number(max_order(f229)).h == 3);
    CHECK(quadratic_class_number(229) == 3);
}

TEST_CASE("imaginary quadratic class numbers") {
    CHECK(quadratic_class_number(-4) == 1);
    CHECK(quadratic_class_number(-23) == 3);
    CHECK(quadratic_class_number(-47) == 5);
    CHECK(quadratic_class_number(-3) == 1);
    auto fi23 = make_field(IntPoly({6, 1, 1}));  // x^2+x+6, disc -23
    CHECK(class_number(max_order(fi23)).h == 3);
}

TEST_CASE("quartic class numbers") {
    // maximal order of Q(zeta8): h = 1 (unique norm-2 prime is principal)
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    CHECK(class_number(max_order(f8)).h == 1);

    // Q(zeta5): h = 1
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    CHECK(class_number(max_order(f5)).h == 1);

    // Q(zeta12): h = 1
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    CHECK(class_number(max_order(f12)).h == 1);

    // x^4+2x^2+2: disc of field? equation disc -2048; h of this D4 field = 1
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto rd4 = class_number(max_order(fd4));
    CHECK(rd4.h >= 1);
}

TEST_CASE("is_principal examples") {
    auto f8 = make_field(IntPoly({1, 0, 0, 0, 1}));
    auto o8 = max_order(f8);
    UnitData u8 = fundamental_unit(o8);

    // whole order: generator 1
    auto whole = ideal_whole(o8);
    auto g = is_principal(o8, whole, &u8);
    REQUIRE(g.has_value());
    CHECK(*g == o8->one());

    // the norm-2 prime (1+zeta8): principal, (1+zeta8)^4 has norm 16 = 2^4
    auto pf2 = prime_ideals_above(o8, 2);
    REQUIRE(pf2.size() == 1);
    auto gen2 = is_principal(o8, pf2[0].ideal, &u8);
    REQUIRE(gen2.has_value());
    mpz_class n2 = o8->norm(*gen2);
    if (n2 < 0) n2 = -n2;
    CHECK(n2 == 2);

    // nonprincipal norm-2 ideal in the disc-40 order: absence certified
    auto f10 = make_field(IntPoly({-10, 0, 1}));
    auto o10 = max_order(f10);
    UnitData u10 = fundamental_unit(o10);
    auto pf = prime_ideals_above(o10, 2);
    REQUIRE(pf.size() == 1);  // 2 ramifies in Q(sqrt10)
    CHECK(pf[0].f == 1);
    auto gen10 = is_principal(o10, pf[0].ideal, &u10);
    CHECK_FALSE(gen10.has_value());
}

TEST_CASE("forms vs ideal path on a batch of fundamental discriminants") {
    int tested = 0;
    for (long D = 5; D <= 300; ++D) {
        if (!is_quadratic_discriminant(D)) continue;
        // fundamental: D = 1 mod 4 squarefree, or D = 4m with m squarefree,
        // m = 2, 3 mod 4
        mpz_class Dz(D);
        bool fundamental = false;
        if (D % 4 == 1 && squarefree_part(Dz) == Dz) fundamental = true;
        if (D % 4 == 0) {
            long m = D / 4;
            mpz_class mz(m);
            long mm = ((m % 4) + 4) % 4;
            if (squarefree_part(mz) == mz && (mm == 2 || mm == 3)) fundamental = true;
        }
        if (!fundamental) continue;
        ++tested;
        unsigned long h_forms = quadratic_class_number(D);
        // ideal path
        long n = (D % 4 == 0) ? D / 4 : D;
        auto F = make_field(IntPoly({mpz_class(-n), mpz_class(0), mpz_class(1)}));
        auto O = max_order(F);
        REQUIRE(O->disc() == D);
        unsigned long h_ideal = class_number(O).h;
        CHECK(h_forms == h_ideal);
    }
    CHECK(tested > 40);
}

TEST_CASE("class number of a non-maximal quadratic order via the conductor formula") {
    // Z[sqrt5]: disc 20, conductor 2: h(O_20) = 1 classically
    auto f5 = make_field(IntPoly({-5, 0, 1}));
    auto eq = make_order_handle(equation_order(f5));
    REQUIRE(eq->disc() == 20);
    CHECK(class_number(eq).h == 1);
    CHECK(quadratic_class_number(20) == 1);

    // Z[3 sqrt(-1)]-style: disc -36 order inside Z[i]: h(-36) = 2? check
    // against the forms count
    auto fi = make_field(IntPoly({1, 0, 1}));
    Order eqi = equation_order(fi);  // disc -4 (maximal)
    // suborder with conductor 3: basis {1, 3i}
    QMat b{{mpq_class(1), mpq_class(0)}, {mpq_class(0), mpq_class(3)}};
    auto sub = make_order_handle(Order(fi, b));
    REQUIRE(sub->disc() == -36);
    CHECK(class_number(sub).h == quadratic_class_number(-36));

    // a real quadratic non-maximal order: disc 45 = 9*5: h(45) from forms
    auto f5b = make_field(IntPoly({-5, 0, 1}));
    QMat b45{{mpq_class(1), mpq_class(0)}, {mpq_class(3, 2), mpq_class(3, 2)}};
    auto sub45 = make_order_handle(Order(f5b, b45));
    REQUIRE(sub45->disc() == 45);
    CHECK(class_number(sub45).h == quadratic_class_number(45));
}

TEST_CASE("ideal norm multiplicativity on random pairs") {
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    auto o = max_order(f12);
    std::vector<OrderIdeal> pool;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
        auto oh = make_order_handle(p_maximal_order(*o, p));
        for (auto& pf : prime_ideals_above(oh, p)) pool.push_back(pf.ideal);
    }
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = 0; j < pool.size(); ++j) {
            OrderIdeal prod = ideal_mul(pool[i], pool[j]);
            CHECK(prod.norm == pool[i].norm * pool[j].norm);
        }
}
