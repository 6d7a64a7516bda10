#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcensus/errors.hpp"
#include "qcensus/rep_verifier.hpp"

using namespace qc;

namespace {
int mult_of(const VirtualDecomposition& d, const KMType& t) {
    auto it = d.find(t);
    return it == d.end() ? 0 : it->second;
}
}  // namespace

TEST_CASE("km_character values") {
    CHECK(km_character(KMType::delta_lk(2, 2), 0, 0, false).real() == doctest::Approx(2.0));
    CHECK(km_character(KMType::delta(), 0, 0, true).real() == doctest::Approx(-1.0));
    CHECK(km_character(KMType::delta_lk(2, 0), 3.14159265358979323846 / 2, 0, false).real() ==
          doctest::Approx(-2.0));
    CHECK(km_character(KMType::delta_lk(2, 2), 0.3, 0.4, true).real() == doctest::Approx(0.0));
    CHECK(km_character(KMType::triv(), 0.3, 0.4, true).real() == doctest::Approx(1.0));
}

TEST_CASE("exterior powers of p_M reproduce the table") {
    // n = 0: triv
    auto d0 = decompose_exterior(ExteriorSpace::pM, 0);
    CHECK(d0.size() == 1);
    CHECK(mult_of(d0, KMType::triv()) == 1);

    // n = 1: delta_{2,0} + delta_{0,2}
    auto d1 = decompose_exterior(ExteriorSpace::pM, 1);
    CHECK(d1.size() == 2);
    CHECK(mult_of(d1, KMType::delta_lk(2, 0)) == 1);
    CHECK(mult_of(d1, KMType::delta_lk(0, 2)) == 1);

    // n = 2: 2 delta + delta_{2,2} + delta_{2,-2}
    auto d2 = decompose_exterior(ExteriorSpace::pM, 2);
    CHECK(d2.size() == 3);
    CHECK(mult_of(d2, KMType::delta()) == 2);
    CHECK(mult_of(d2, KMType::delta_lk(2, 2)) == 1);
    CHECK(mult_of(d2, KMType::delta_lk(2, -2)) == 1);

    // n = 3 mirrors n = 1; n = 4 mirrors n = 0
    auto d3 = decompose_exterior(ExteriorSpace::pM, 3);
    CHECK(d3 == d1);
    auto d4 = decompose_exterior(ExteriorSpace::pM, 4);
    CHECK(d4 == d0);
}

TEST_CASE("exterior powers of m reproduce the table") {
    // n = 1: 2 delta + delta_{2,0} + delta_{0,2}
    auto d1 = decompose_exterior(ExteriorSpace::m, 1);
    CHECK(mult_of(d1, KMType::delta()) == 2);
    CHECK(mult_of(d1, KMType::delta_lk(2, 0)) == 1);
    CHECK(mult_of(d1, KMType::delta_lk(0, 2)) == 1);
    CHECK(d1.size() == 3);

    // n = 2: triv + 2 delta + 2(delta_{2,0} + delta_{0,2}) + delta_{2,2} + delta_{2,-2}
    auto d2 = decompose_exterior(ExteriorSpace::m, 2);
    CHECK(mult_of(d2, KMType::triv()) == 1);
    CHECK(mult_of(d2, KMType::delta()) == 2);
    CHECK(mult_of(d2, KMType::delta_lk(2, 0)) == 2);
    CHECK(mult_of(d2, KMType::delta_lk(0, 2)) == 2);
    CHECK(mult_of(d2, KMType::delta_lk(2, 2)) == 1);
    CHECK(mult_of(d2, KMType::delta_lk(2, -2)) == 1);

    // n = 3: 4 triv + 2(delta_{2,0} + delta_{0,2} + delta_{2,2} + delta_{2,-2})
    auto d3 = decompose_exterior(ExteriorSpace::m, 3);
    CHECK(mult_of(d3, KMType::triv()) == 4);
    CHECK(mult_of(d3, KMType::delta()) == 0);
    CHECK(mult_of(d3, KMType::delta_lk(2, 0)) == 2);
    CHECK(mult_of(d3, KMType::delta_lk(0, 2)) == 2);
    CHECK(mult_of(d3, KMType::delta_lk(2, 2)) == 2);
    CHECK(mult_of(d3, KMType::delta_lk(2, -2)) == 2);

    // n = 4 mirrors n = 2
    auto d4 = decompose_exterior(ExteriorSpace::m, 4);
    CHECK(d4 == d2);
}

TEST_CASE("dimension bookkeeping") {
    // sum over n of dim Lambda^n p_M = 2^4
    long total = 0;
    for (int n = 0; n <= 4; ++n) {
        auto d = decompose_exterior(ExteriorSpace::pM, n);
        long dim = 0;
        for (auto& [t, m] : d) dim += m * t.dim();
        long binom[5] = {1, 4, 6, 4, 1};
        CHECK(dim == binom[n]);
        total += dim;
    }
    CHECK(total == 16);
    // and Lambda^n m has dim C(6, n)
    long binom6[7] = {1, 6, 15, 20, 15, 6, 1};
    for (int n = 0; n <= 6; ++n) {
        auto d = decompose_exterior(ExteriorSpace::m, n);
        long dim = 0;
        for (auto& [t, m] : d) dim += m * t.dim();
        CHECK(dim == binom6[n]);
        // all multiplicities nonnegative for genuine modules
        for (auto& [t, m] : d) CHECK(m >= 0);
    }
}

TEST_CASE("ak identity") {
    auto rep = verify_ak_identity();
    CHECK(rep.ok);
    for (long r : rep.residuals) CHECK(r == 0);
    CHECK(rep.grid_residual < 1e-12);
    // spot values: k = 3: a3 + 2 a2 + a1 = -10 + 12 - 3 = -1
    CHECK(rep.residuals.size() == 5);
}

TEST_CASE("sigma_tilde_trace") {
    double pi = 3.14159265358979323846;
    CHECK(sigma_tilde_trace(pi / 2, pi / 2) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(sigma_tilde_trace(0, 1.234) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(sigma_tilde_trace(pi / 3, pi / 4) == doctest::Approx(6.0).epsilon(1e-12));
    // nonnegative on a 100 x 100 grid, zero exactly on the degenerate lines
    double minv = 1e9;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            double v = sigma_tilde_trace(2 * pi * i / 100, 2 * pi * j / 100);
            minv = std::min(minv, v);
            CHECK(v >= -1e-13);
            if (i % 50 == 0 || j % 50 == 0) CHECK(std::abs(v) < 1e-12);  // theta or phi in pi Z
        }
    CHECK(minv >= -1e-13);
}

TEST_CASE("weyl integral equals 2") {
    CHECK(weyl_integral(4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(weyl_integral(8) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(weyl_integral(100) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(weyl_integral(3), invalid_argument_error);
    // analytic cross-check: integral of sin^2 over a period is pi
    double two_pi = 2 * 3.14159265358979323846;
    int g = 64;
    double s = 0;
    for (int i = 0; i < g; ++i) {
        double t = two_pi * i / g;
        s += std::sin(t) * std::sin(t) * (two_pi / g);
    }
    CHECK(s == doctest::Approx(3.14159265358979323846).epsilon(1e-12));
}

TEST_CASE("duality Lambda^n = Lambda^{dim-n}") {
    for (int n = 0; n <= 4; ++n)
        CHECK(decompose_exterior(ExteriorSpace::pM, n) ==
              decompose_exterior(ExteriorSpace::pM, 4 - n));
}
