#include "qcensus/roots.hpp"

#include <algorithm>
#include <complex>

namespace qc {

namespace {

constexpr mpfr_prec_t kMaxPrec = 8192;

struct MpC {
    mpfr_t re, im;
    explicit MpC(mpfr_prec_t p) {
        mpfr_init2(re, p);
        mpfr_init2(im, p);
        mpfr_set_zero(re, 1);
        mpfr_set_zero(im, 1);
    }
    MpC(const MpC&) = delete;
    MpC& operator=(const MpC&) = delete;
    MpC(MpC&& o) noexcept {
        mpfr_init2(re, mpfr_get_prec(o.re));
        mpfr_init2(im, mpfr_get_prec(o.im));
        mpfr_swap(re, o.re);
        mpfr_swap(im, o.im);
    }
    ~MpC() {
        mpfr_clear(re);
        mpfr_clear(im);
    }
    std::complex<double> to_d() const {
        return {mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN)};
    }
};

// Aberth-Ehrlich iteration at working precision; returns approximations.
std::vector<MpC> aberth(const IntPoly& f, mpfr_prec_t prec) {
    int n = f.degree();
    std::vector<MpC> z;
    z.reserve(n);
    // Cauchy-style radius
    double m = 0;
    double lcd = std::abs(f.lc().get_d());
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f.coeff(i).get_d()) / lcd);
    double r0 = 1.0 + m;
    for (int i = 0; i < n; ++i) {
        MpC zi(prec);
        double ang = 2.0 * 3.14159265358979323846 * i / n + 0.4;
        mpfr_set_d(zi.re, r0 * std::cos(ang), MPFR_RNDN);
        mpfr_set_d(zi.im, r0 * std::sin(ang) + 0.0625, MPFR_RNDN);
        z.push_back(std::move(zi));
    }
    IntPoly fp = f.derivative();

    int max_iter = 80 + 4 * static_cast<int>(mpfr_get_exp(z[0].re));
    max_iter = std::max(max_iter, 300);
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            // Newton correction computed in mpfr to preserve accuracy
            mpfr_t nr, ni, dr, di, tr, ti, t2, den;
            mpfr_inits2(prec, nr, ni, dr, di, tr, ti, t2, den, static_cast<mpfr_ptr>(nullptr));
            // f(z_i)
            mpfr_set_zero(nr, 1);
            mpfr_set_zero(ni, 1);
            for (int k = f.degree(); k >= 0; --k) {
                mpfr_mul(tr, nr, z[i].re, MPFR_RNDN);
                mpfr_mul(t2, ni, z[i].im, MPFR_RNDN);
                mpfr_sub(tr, tr, t2, MPFR_RNDN);
                mpfr_mul(ti, nr, z[i].im, MPFR_RNDN);
                mpfr_mul(t2, ni, z[i].re, MPFR_RNDN);
                mpfr_add(ti, ti, t2, MPFR_RNDN);
                mpfr_add_z(tr, tr, f.coeff(k).get_mpz_t(), MPFR_RNDN);
                mpfr_set(nr, tr, MPFR_RNDN);
                mpfr_set(ni, ti, MPFR_RNDN);
            }
            // f'(z_i)
            mpfr_set_zero(dr, 1);
            mpfr_set_zero(di, 1);
            for (int k = fp.degree(); k >= 0; --k) {
                mpfr_mul(tr, dr, z[i].re, MPFR_RNDN);
                mpfr_mul(t2, di, z[i].im, MPFR_RNDN);
                mpfr_sub(tr, tr, t2, MPFR_RNDN);
                mpfr_mul(ti, dr, z[i].im, MPFR_RNDN);
                mpfr_mul(t2, di, z[i].re, MPFR_RNDN);
                mpfr_add(ti, ti, t2, MPFR_RNDN);
                mpfr_add_z(tr, tr, fp.coeff(k).get_mpz_t(), MPFR_RNDN);
                mpfr_set(dr, tr, MPFR_RNDN);
                mpfr_set(di, ti, MPFR_RNDN);
            }
            // newton = f/f'
            mpfr_mul(den, dr, dr, MPFR_RNDN);
            mpfr_mul(t2, di, di, MPFR_RNDN);
            mpfr_add(den, den, t2, MPFR_RNDN);
            if (mpfr_zero_p(den)) {
                mpfr_clears(nr, ni, dr, di, tr, ti, t2, den, static_cast<mpfr_ptr>(nullptr));
                // nudge and continue
                mpfr_add_d(z[i].re, z[i].re, 1e-3, MPFR_RNDN);
                continue;
            }
            mpfr_t qr, qi;
            mpfr_inits2(prec, qr, qi, static_cast<mpfr_ptr>(nullptr));
            mpfr_mul(tr, nr, dr, MPFR_RNDN);
            mpfr_mul(t2, ni, di, MPFR_RNDN);
            mpfr_add(tr, tr, t2, MPFR_RNDN);
            mpfr_div(qr, tr, den, MPFR_RNDN);
            mpfr_mul(ti, ni, dr, MPFR_RNDN);
            mpfr_mul(t2, nr, di, MPFR_RNDN);
            mpfr_sub(ti, ti, t2, MPFR_RNDN);
            mpfr_div(qi, ti, den, MPFR_RNDN);
            // Aberth correction: newton / (1 - newton * sum_{j!=i} 1/(zi-zj))
            std::complex<double> newton(mpfr_get_d(qr, MPFR_RNDN), mpfr_get_d(qi, MPFR_RNDN));
            std::complex<double> s(0, 0);
            std::complex<double> zi = z[i].to_d();
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                std::complex<double> d = zi - z[j].to_d();
                double dn = std::norm(d);
                if (dn < 1e-280) d = std::complex<double>(1e-140, 1e-140), dn = std::norm(d);
                s += std::conj(d) / dn;
            }
            std::complex<double> denom = 1.0 - newton * s;
            std::complex<double> corr;
            if (std::abs(denom) < 1e-140) {
                corr = newton;
            } else {
                // full-precision newton scaled by double-precision Aberth factor
                corr = newton / denom;
            }
            // apply correction: when |corr| is representable as double this is
            // accurate enough only at the double level, so apply the mpfr
            // newton step scaled by (newton/corr ratio) — use mpfr for the
            // final tiny corrections instead:
            if (std::abs(corr) > 1e-250) {
                std::complex<double> ratio = corr / (std::abs(newton) > 0 ? newton : 1.0);
                // corr = newton * ratio computed in mpfr
                mpfr_t cr, ci;
                mpfr_inits2(prec, cr, ci, static_cast<mpfr_ptr>(nullptr));
                mpfr_mul_d(cr, qr, ratio.real(), MPFR_RNDN);
                mpfr_mul_d(tr, qi, ratio.imag(), MPFR_RNDN);
                mpfr_sub(cr, cr, tr, MPFR_RNDN);
                mpfr_mul_d(ci, qr, ratio.imag(), MPFR_RNDN);
                mpfr_mul_d(tr, qi, ratio.real(), MPFR_RNDN);
                mpfr_add(ci, ci, tr, MPFR_RNDN);
                mpfr_sub(z[i].re, z[i].re, cr, MPFR_RNDN);
                mpfr_sub(z[i].im, z[i].im, ci, MPFR_RNDN);
                mpfr_clears(cr, ci, static_cast<mpfr_ptr>(nullptr));
            } else {
                mpfr_sub(z[i].re, z[i].re, qr, MPFR_RNDN);
                mpfr_sub(z[i].im, z[i].im, qi, MPFR_RNDN);
            }
            worst = std::max(worst, std::abs(corr));
            mpfr_clears(nr, ni, dr, di, tr, ti, t2, den, qr, qi,
                        static_cast<mpfr_ptr>(nullptr));
        }
        double thresh = std::max(std::ldexp(1.0, -static_cast<int>(prec) + 8), 1e-290) * (1.0 + r0);
        if (worst < thresh) break;
    }
    return z;
}

}  // namespace

std::vector<std::pair<mpq_class, mpq_class>> real_root_intervals(const IntPoly& f,
                                                                 const mpq_class& width) {
    std::vector<std::pair<mpq_class, mpq_class>> out;
    if (f.degree() < 1) return out;
    // root bound
    mpz_class m = 0;
    for (int i = 0; i < f.degree(); ++i) {
        mpz_class a = abs(f.coeff(i));
        if (a > m) m = a;
    }
    mpz_class lcm_ = abs(f.lc());
    mpq_class bound = mpq_class(m) / mpq_class(lcm_) + 2;
    std::vector<std::pair<mpq_class, mpq_class>> stack{{-bound, bound}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int cnt = count_real_roots_between(f, lo, hi);
        if (cnt == 0) continue;
        if (cnt == 1 && hi - lo <= width) {
            out.emplace_back(lo, hi);
            continue;
        }
        mpq_class midq = (lo + hi) / 2;
        if (f.eval(midq) == 0) {
            // rational root exactly at midpoint: shrink a hair around it
            mpq_class eps = width / 4;
            out.emplace_back(midq - eps, midq + eps);
            // note: the interval (mid-eps, mid+eps] contains just this root
            // provided width is small; recurse on the flanks
            stack.emplace_back(lo, midq - eps);
            stack.emplace_back(midq + eps, hi);
        } else {
            stack.emplace_back(lo, midq);
            stack.emplace_back(midq, hi);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CBall> complex_roots(const IntPoly& f, double target_radius) {
    if (f.degree() < 1) throw invalid_argument_error("complex_roots: degree < 1");
    if (!f.is_squarefree()) throw invalid_argument_error("complex_roots: input not squarefree");
    if (!(target_radius > 0)) throw invalid_argument_error("complex_roots: target_radius <= 0");
    int n = f.degree();

    // exact real roots via Sturm bisection
    mpq_class w(1, 2);
    while (mpq_class(target_radius * 0.5) < w) w /= 2;
    auto rints = real_root_intervals(f, w);
    int n_real = static_cast<int>(rints.size());

    for (mpfr_prec_t prec = 128; prec <= kMaxPrec; prec *= 2) {
        auto z = aberth(f, prec);
        bool ok = true;

        /* Classification by count: Sturm fixes the number of real roots, so
         * the n_real approximations nearest the axis are the real ones and
         * the rest must form conjugate pairs. */
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return mpfr_cmpabs(z[a].im, z[b].im) < 0;
        });
        std::vector<int> upper;
        for (int k = n_real; k < n; ++k)
            if (mpfr_sgn(z[order[k]].im) > 0) upper.push_back(order[k]);
        if (2 * static_cast<int>(upper.size()) != n - n_real) {
            if (prec == kMaxPrec)
                throw precision_exhausted_error("complex_roots: real/complex split unstable");
            continue;
        }

        /* Canonical points: exact-rational midpoints for real roots (their
         * enclosures come straight from Sturm) and exact conjugate mirrors
         * for the complex ones. */
        std::vector<CBall> pts;
        std::vector<double> halfwidth;
        pts.reserve(n);
        for (auto& [lo, hi] : rints) {
            mpq_class mid = (lo + hi) / 2;
            RBall re = RBall::exact(mid, prec);
            pts.emplace_back(re, RBall::exact(0L, prec));
            mpq_class half = (hi - lo) / 2;
            halfwidth.push_back(mpq_class(half).get_d() * (1 + 1e-15) + 1e-300);
        }
        for (int i : upper) {
            RBall re(prec), im(prec);
            mpfr_set(re.mid_mut(), z[i].re, MPFR_RNDN);
            mpfr_set(im.mid_mut(), z[i].im, MPFR_RNDN);
            CBall zz(re, im);
            pts.push_back(zz);
            pts.push_back(zz.conj());
        }

        /* Weierstrass bound: each disk D(pt_i, n |f(pt_i)/(lc prod (pt_i-pt_j))|)
         * contains a root, and a disjoint family isolates one root each. */
        std::vector<double> wrad(n, 0.0);
        for (int i = 0; i < n && ok; ++i) {
            CBall fz(RBall::exact(f.coeff(n), prec), RBall::exact(0L, prec));
            for (int k = n - 1; k >= 0; --k) {
                fz = fz * pts[i];
                fz.re = fz.re + RBall::exact(f.coeff(k), prec);
            }
            CBall denom(RBall::exact(f.lc(), prec), RBall::exact(0L, prec));
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                denom = denom * (pts[i] - pts[j]);
            }
            if (denom.contains_zero()) {
                ok = false;
                break;
            }
            CBall wq = fz / denom;
            wrad[i] = wq.abs().upper_double() * n;
            if (!(wrad[i] < target_radius)) ok = false;
        }
        // isolation radii: W-disk, and for real roots also the Sturm interval
        std::vector<double> iso(n);
        for (int i = 0; i < n && ok; ++i)
            iso[i] = (i < n_real) ? std::max(wrad[i], halfwidth[i]) : wrad[i];
        if (ok) {
            for (int i = 0; i < n && ok; ++i)
                for (int j = i + 1; j < n && ok; ++j) {
                    CBall d = pts[i] - pts[j];
                    double dr = d.re.abs_lower(), di = d.im.abs_lower();
                    double dist_lo = std::sqrt(dr * dr + di * di) * (1 - 1e-14);
                    if (!(dist_lo > iso[i] + iso[j])) ok = false;
                }
        }
        if (ok) {
            std::vector<CBall> final_balls;
            for (int i = 0; i < n; ++i) {
                CBall ball = pts[i];
                RBall pad(prec);
                if (i < n_real) {
                    mpfr_set_d(pad.rad_mut(), halfwidth[i], MPFR_RNDU);
                    mpfr_add(ball.re.rad_mut(), ball.re.rad(), pad.rad(), MPFR_RNDU);
                } else {
                    mpfr_set_d(pad.rad_mut(), wrad[i], MPFR_RNDU);
                    mpfr_add(ball.re.rad_mut(), ball.re.rad(), pad.rad(), MPFR_RNDU);
                    mpfr_add(ball.im.rad_mut(), ball.im.rad(), pad.rad(), MPFR_RNDU);
                }
                final_balls.push_back(ball);
            }
            std::sort(final_balls.begin(), final_balls.end(), [](const CBall& a, const CBall& b) {
                int c = mpfr_cmp(a.re.mid(), b.re.mid());
                if (c != 0) return c < 0;
                return mpfr_cmp(a.im.mid(), b.im.mid()) < 0;
            });
            return final_balls;
        }
    }
    throw precision_exhausted_error("complex_roots: could not certify at 8192 bits");
}

}  // namespace qc
