#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcensus/geodesic.hpp"
#include "qcensus/class_group.hpp"
#include "qcensus/splitting.hpp"
#include "qcensus/subfields.hpp"

using namespace qc;

namespace {
OrderHandle max_order(const FieldPtr& f) {
    return make_order_handle(order_maximal_at(f, {}, true));
}
}  // namespace

TEST_CASE("unit_matrix basics") {
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o = max_order(f5);

    // unit = 1 -> identity matrix
    ZMat m1 = unit_matrix(o, o->one());
    CHECK(m1 == zmat_identity(4));

    // torsion zeta of order mu: matrix with zeta^mu = identity
    auto [mu, zeta] = torsion_units(o);
    ZMat mz = unit_matrix(o, zeta);
    // power the matrix mu times
    ZMat acc = zmat_identity(4);
    for (unsigned long i = 0; i < mu; ++i) {
        ZMat next(4, ZVec(4, mpz_class(0)));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) next[a][b] += acc[a][c] * mz[c][b];
        acc = next;
    }
    CHECK(acc == zmat_identity(4));

    // fundamental unit: det 1, char poly = min poly
    UnitData u = fundamental_unit(o);
    ZMat me = unit_matrix(o, u.fund_unit);
    CHECK(zmat_det(me) == 1);
    if (o->min_poly_of(u.fund_unit).degree() == 4)
        CHECK(IntPoly(zmat_charpoly(me)) == o->min_poly_of(u.fund_unit));

    // non-unit rejected
    ZVec two = o->one();
    for (auto& v : two) v *= 2;
    CHECK_THROWS_AS(unit_matrix(o, two), invalid_argument_error);
}

TEST_CASE("geodesic_data on a Cc order") {
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto o = max_order(fd4);
    UnitData u = fundamental_unit(o);
    OrderCensusInvariants inv;
    inv.h = class_number(o).h;
    inv.lambda_s = 1;
    inv.kappa_val = kappa(o, u);
    GeodesicClass g = geodesic_data(o, u, inv);

    // a in (0, 1)
    CHECK(g.a.mid_double() > 0.0);
    CHECK(g.a.mid_double() < 1.0);
    // length = 8 |log a|, N = e^length = e^{4R}
    CHECK(g.length.mid_double() ==
          doctest::Approx(8 * std::abs(std::log(g.a.mid_double()))).epsilon(1e-12));
    CHECK(g.n_gamma.mid_double() ==
          doctest::Approx(std::exp(4 * u.regulator.mid_double())).epsilon(1e-9));
    // trace formula
    double th = g.theta.mid_double(), ph = g.phi.mid_double();
    CHECK(g.trace_sigma_tilde.mid_double() ==
          doctest::Approx(4 * (1 - std::cos(2 * th)) * (1 - std::cos(2 * ph))).epsilon(1e-12));
    CHECK(g.trace_sigma_tilde.mid_double() >= 0.0);
    CHECK(g.trace_sigma_tilde.mid_double() <= 16.0);
    // chi1 * weight = 4 h lambda / kappa exactly
    mpq_class lhs = g.chi1 * g.weight;
    mpq_class rhs = mpq_class(4) * mpq_class(inv.h) * mpq_class(inv.lambda_s) /
                    mpq_class(inv.kappa_val);
    rhs.canonicalize();
    CHECK(lhs == rhs);
    // chi1 mu = 1 exactly
    CHECK(g.chi1 * mpq_class(static_cast<unsigned long>(u.mu)) == 1);

    // torsion input rejected
    UnitData torsion_ud = u;
    torsion_ud.fund_unit = u.torsion_gen;
    CHECK_THROWS_AS(geodesic_data(o, torsion_ud, inv), not_a_geodesic_error);
}

TEST_CASE("spectrum pairing: eigenvalues closed under conjugation, product 1") {
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto o = max_order(fd4);
    UnitData u = fundamental_unit(o);
    // embedding values of eps
    auto pw = o->to_power_basis(u.fund_unit);
    double prod_re = 1, prod_im = 0;
    for (int k = 0; k < 4; ++k) {
        CBall v = o->embed(u.fund_unit, k, 256);
        double re = v.re.mid_double(), im = v.im.mid_double();
        double nr = prod_re * re - prod_im * im;
        double ni = prod_re * im + prod_im * re;
        prod_re = nr;
        prod_im = ni;
    }
    CHECK(prod_re == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(prod_im) < 1e-9);
    (void)pw;
}

TEST_CASE("check_correspondence on Cc and Cr orders") {
    // Cc example
    auto fd4 = make_field(IntPoly({2, 0, 2, 0, 1}));
    auto o = max_order(fd4);
    UnitData u = fundamental_unit(o);
    OrderCensusInvariants inv;
    inv.h = class_number(o).h;
    inv.lambda_s = 1;
    inv.kappa_val = kappa(o, u);
    auto rep = check_correspondence(o, u, inv, /*is_cc=*/true);
    CHECK(rep.all_ok);

    // Cr example: Q(zeta5) fails the weak-neatness iff Cc test when labelled Cc
    auto f5 = make_field(IntPoly({1, 1, 1, 1, 1}));
    auto o5 = max_order(f5);
    UnitData u5 = fundamental_unit(o5);
    OrderCensusInvariants inv5;
    inv5.h = 1;
    inv5.lambda_s = 16;
    inv5.kappa_val = kappa(o5, u5);
    CHECK_THROWS_AS(check_correspondence(o5, u5, inv5, /*is_cc=*/true),
                    correspondence_violation_error);
    auto rep5 = check_correspondence(o5, u5, inv5, /*is_cc=*/false);
    CHECK(rep5.all_ok);
}

TEST_CASE("kappa > 1 angle condition on Q(zeta12)") {
    // kappa(O_zeta12) = 4; the angle condition must hold
    auto f12 = make_field(IntPoly({1, 0, -1, 0, 1}));
    auto o12 = max_order(f12);
    UnitData u12 = fundamental_unit(o12);
    int kap = kappa(o12, u12);
    CHECK(kap > 1);
    if (!u12.angles_exact_degenerate) {
        double th = u12.theta.mid_double(), ph = u12.phi.mid_double();
        double pi = 3.14159265358979323846;
        double best = 1e9;
        for (double v : {th + ph, th - ph})
            for (double step : {pi / 2, pi / 3})
                best = std::min(best, std::abs(v - std::round(v / step) * step));
        CHECK(best < 1e-8);
    }
}
