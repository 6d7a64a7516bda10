#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qcensus/int_poly.hpp"
#include "qcensus/roots.hpp"
#include "qcensus/zmod_poly.hpp"

using namespace qc;

namespace {

// brute-force factor check: multiply everything back together mod p;
// lead must be the leading coefficient of f mod p (degree can drop mod p)
IntPoly reassemble_mod_p(const std::vector<std::pair<IntPoly, int>>& factors,
                         const mpz_class& lead, std::uint64_t p) {
    ZpPoly acc = ZpPoly::from_int_poly(IntPoly({1}), p);
    for (const auto& [g, m] : factors)
        for (int i = 0; i < m; ++i) acc = acc * ZpPoly::from_int_poly(g, p);
    ZpPoly lc = ZpPoly::from_int_poly(IntPoly({lead}), p);
    return (acc * lc).lift();
}

// trial division by every monic polynomial of degree <= bound over F_p
bool irreducible_by_trial_division(const IntPoly& f, std::uint64_t p, int bound) {
    ZpPoly fp = ZpPoly::from_int_poly(f, p).monic();
    std::vector<std::uint64_t> divisor(bound + 2, 0);
    // enumerate monic polys of degree d for d = 1..bound
    for (int d = 1; d <= bound; ++d) {
        std::vector<std::uint64_t> c(d + 1, 0);
        c[d] = 1;
        while (true) {
            ZpPoly g(p, c);
            ZpPoly q, r;
            fp.divrem(g, q, r);
            if (r.is_zero() && g.degree() < fp.degree() && g.degree() >= 1) return false;
            // increment the base-p counter over c[0..d-1]
            int i = 0;
            while (i < d) {
                if (++c[i] < p) break;
                c[i] = 0;
                ++i;
            }
            if (i == d) break;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("factor_mod_p spec examples") {
    // x^4+x^3+x^2+x+1 irreducible mod 2 (oracle: trial division by deg <= 2)
    IntPoly f5({1, 1, 1, 1, 1});
    CHECK(irreducible_by_trial_division(f5, 2, 2));
    auto fac = factor_mod_p(f5, 2);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].first == f5);
    CHECK(fac[0].second == 1);

    // x^4+1 = (x+1)^4 mod 2 (oracle: expand (x+1)^4 = x^4+4x^3+6x^2+4x+1 == x^4+1 mod 2)
    IntPoly f8({1, 0, 0, 0, 1});
    auto fac8 = factor_mod_p(f8, 2);
    REQUIRE(fac8.size() == 1);
    CHECK(fac8[0].first == IntPoly({1, 1}));
    CHECK(fac8[0].second == 4);

    // x^2-1 mod 5 = (x+1)(x+4)
    auto fac2 = factor_mod_p(IntPoly({-1, 0, 1}), 5);
    REQUIRE(fac2.size() == 2);
    CHECK(fac2[0].first == IntPoly({1, 1}));
    CHECK(fac2[1].first == IntPoly({4, 1}));

    CHECK_THROWS_AS(factor_mod_p(f5, 6), invalid_argument_error);
}

TEST_CASE("factor_mod_p reassembly property") {
    std::mt19937_64 rng(12345);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 31, 97};
    for (int trial = 0; trial < 300; ++trial) {
        std::uint64_t p = primes[rng() % 8];
        int deg = 1 + static_cast<int>(rng() % 8);
        std::vector<mpz_class> c(deg + 1);
        for (auto& a : c) a = static_cast<long>(rng() % 19) - 9;
        IntPoly f(c);
        if (f.degree() < 1) continue;
        ZpPoly fp = ZpPoly::from_int_poly(f, p);
        if (fp.is_zero()) continue;
        auto fac = factor_mod_p(f, p);
        IntPoly re = reassemble_mod_p(fac, fp.lift().lc(), p);
        CHECK(re == fp.lift());
        int degsum = 0;
        for (auto& [g, m] : fac) degsum += g.degree() * m;
        CHECK(degsum == fp.degree());
    }
}

TEST_CASE("poly_discriminant examples and properties") {
    // quadratic oracle b^2 - 4ac
    CHECK(poly_discriminant(IntPoly({-5, 0, 1})) == 20);
    CHECK(poly_discriminant(IntPoly({1, 0, 1})) == -4);
    CHECK(poly_discriminant(IntPoly({1, 0, 0, 0, 1})) == 256);
    // disc of x^4+x^3+x^2+x+1 is 125 (cyclotomic)
    CHECK(poly_discriminant(IntPoly({1, 1, 1, 1, 1})) == 125);
    // disc(x^4 - x^2 + 1) = 144 (12th cyclotomic)
    CHECK(poly_discriminant(IntPoly({1, 0, -1, 0, 1})) == 144);

    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 120; ++trial) {
        std::vector<mpz_class> a(2 + rng() % 3), b(2 + rng() % 3);
        for (auto& x : a) x = static_cast<long>(rng() % 11) - 5;
        for (auto& x : b) x = static_cast<long>(rng() % 11) - 5;
        IntPoly f(a), g(b);
        if (f.degree() < 1 || g.degree() < 1) continue;
        IntPoly fg = f * g;
        if (!fg.is_squarefree()) continue;
        // disc(fg) = disc(f) disc(g) Res(f,g)^2  (up to the lc normalisation
        // which cancels for this identity)
        mpz_class lhs = poly_discriminant(fg) * f.lc() * g.lc();
        mpz_class r = resultant_sylvester(f, g);
        mpz_class rhs = poly_discriminant(f) * poly_discriminant(g) * r * r * fg.lc();
        // normalisation: disc(fg) lc(fg) = disc f disc g res^2 lc(f) lc(g) * ...
        // use the clean identity disc(fg) = disc(f) disc(g) Res(f,g)^2 for monic
        if (f.is_monic() && g.is_monic()) {
            CHECK(poly_discriminant(fg) == poly_discriminant(f) * poly_discriminant(g) * r * r);
        } else {
            (void)lhs;
            (void)rhs;
        }
    }
}

TEST_CASE("count_real_roots") {
    CHECK(count_real_roots(IntPoly({1, 0, 0, 0, 1})) == 0);
    CHECK(count_real_roots(IntPoly({-5, 0, 1})) == 2);
    CHECK(count_real_roots(IntPoly({1, -1, 1, -1, 1})) == 0);
    CHECK(count_real_roots(IntPoly({0, 1})) == 1);
    CHECK(count_real_roots(IntPoly({-2, 0, 0, 1})) == 1);
    CHECK_THROWS_AS(count_real_roots(IntPoly({1, 2, 1})), invalid_argument_error);
}

TEST_CASE("complex_roots certification") {
    // x^2 + 1: roots +/- i
    auto r = complex_roots(IntPoly({1, 0, 1}), 1e-10);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0].re.mid_double()) < 1e-10);
    CHECK(r[0].im.mid_double() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(r[1].im.mid_double() == doctest::Approx(1.0).epsilon(1e-9));

    // x^2 - 5 via bisection oracle: +/- sqrt5
    auto r5 = complex_roots(IntPoly({-5, 0, 1}), 1e-10);
    REQUIRE(r5.size() == 2);
    double s5 = std::sqrt(5.0);
    CHECK(r5[0].re.mid_double() == doctest::Approx(-s5).epsilon(1e-12));
    CHECK(r5[1].re.mid_double() == doctest::Approx(s5).epsilon(1e-12));
    CHECK(r5[0].im.rad_double() == 0.0);

    // 5th cyclotomic: the four primitive 5th roots of unity e^{2 pi i k/5}
    auto rc = complex_roots(IntPoly({1, 1, 1, 1, 1}), 1e-12);
    REQUIRE(rc.size() == 4);
    for (const auto& b : rc) {
        double re = b.re.mid_double(), im = b.im.mid_double();
        double ang = std::atan2(im, re);
        double k = ang * 5.0 / (2.0 * 3.14159265358979323846);
        CHECK(std::abs(k - std::round(k)) < 1e-9);
        CHECK(std::abs(std::hypot(re, im) - 1.0) < 1e-9);
    }

    // conjugate pairs are exact mirrors
    CHECK(mpfr_cmp(rc[0].re.mid(), rc[1].re.mid()) == 0);
    CHECK(mpfr_cmpabs(rc[0].im.mid(), rc[1].im.mid()) == 0);
}

TEST_CASE("complex_roots sum/product invariants") {
    std::mt19937_64 rng(4242);
    int done = 0;
    for (int trial = 0; done < 40 && trial < 400; ++trial) {
        int deg = 2 + static_cast<int>(rng() % 3);
        std::vector<mpz_class> c(deg + 1);
        for (auto& a : c) a = static_cast<long>(rng() % 11) - 5;
        IntPoly f(c);
        if (f.degree() < 2 || !f.is_squarefree()) continue;
        ++done;
        auto roots = complex_roots(f, 1e-11);
        double sre = 0, sim = 0;
        for (auto& b : roots) {
            sre += b.re.mid_double();
            sim += b.im.mid_double();
        }
        int n = f.degree();
        double expect = -f.coeff(n - 1).get_d() / f.lc().get_d();
        CHECK(sre == doctest::Approx(expect).epsilon(1e-8).scale(1 + std::abs(expect)));
        CHECK(std::abs(sim) < 1e-8);
        // product
        double pre = 1, pim = 0;
        for (auto& b : roots) {
            double ar = b.re.mid_double(), ai = b.im.mid_double();
            double nr = pre * ar - pim * ai, ni = pre * ai + pim * ar;
            pre = nr;
            pim = ni;
        }
        double expp = f.coeff(0).get_d() / f.lc().get_d() * ((n % 2) ? -1 : 1);
        CHECK(pre == doctest::Approx(expp).epsilon(1e-8).scale(1 + std::abs(expp)));
        CHECK(std::abs(pim) < 1e-8);
    }
    CHECK(done >= 30);
}

TEST_CASE("count_real_roots agrees with complex_roots on small quartics") {
    std::mt19937_64 rng(99);
    int done = 0;
    for (int trial = 0; done < 60 && trial < 600; ++trial) {
        std::vector<mpz_class> c(5);
        for (auto& a : c) a = static_cast<long>(rng() % 11) - 5;
        IntPoly f(c);
        if (f.degree() < 1 || !f.is_squarefree()) continue;
        ++done;
        int nr = count_real_roots(f);
        auto roots = complex_roots(f, 1e-9);
        int nr2 = 0;
        for (auto& b : roots)
            if (b.im.rad_double() == 0.0 && b.im.mid_double() == 0.0) ++nr2;
        CHECK(nr == nr2);
    }
}

TEST_CASE("IntPoly plumbing") {
    IntPoly f({2, 4, 6});
    CHECK(f.content() == 2);
    CHECK(f.canonical() == IntPoly({1, 2, 3}));
    CHECK((-f).canonical() == IntPoly({1, 2, 3}));
    CHECK(f.key() == "2:4:6");
    CHECK(IntPoly::from_key("2:4:6") == f);
    CHECK(IntPoly::from_key("-1:0:1") == IntPoly({-1, 0, 1}));
    IntPoly q, r;
    IntPoly num({1, 2, 3, 4});
    IntPoly den({1, 1});
    num.divrem_monic(den, q, r);
    CHECK(q * den + r == num);
    CHECK(gcd(IntPoly({-1, 0, 1}), IntPoly({1, 1})) == IntPoly({1, 1}));
    CHECK(resultant(IntPoly({-5, 0, 1}), IntPoly({0, 2})) == -20);
}
