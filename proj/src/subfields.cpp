#include "qcensus/subfields.hpp"

#include <algorithm>
#include <cmath>

#include "qcensus/num_util.hpp"
#include "qcensus/roots.hpp"

namespace qc {

namespace {

// Solve sum_j c_j r_i^j = w_i by ball Gaussian elimination.
// Returns false when a pivot enclosure touches zero (retry at higher prec).
bool solve_vandermonde(const std::vector<CBall>& roots, const std::vector<CBall>& w,
                       std::vector<CBall>& c) {
    int n = static_cast<int>(roots.size());
    std::vector<std::vector<CBall>> m;
    std::vector<CBall> rhs = w;
    for (int i = 0; i < n; ++i) {
        std::vector<CBall> row;
        CBall p(RBall::exact(1L, roots[i].prec()), RBall::exact(0L, roots[i].prec()));
        for (int j = 0; j < n; ++j) {
            row.push_back(p);
            p = p * roots[i];
        }
        m.push_back(std::move(row));
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = -1;
        double best_mag = 0;
        for (int r = col; r < n; ++r) {
            double mag = m[r][col].abs().lower_double();
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best < 0) return false;
        std::swap(m[best], m[col]);
        std::swap(rhs[best], rhs[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            if (m[r][col].contains_zero() && m[r][col].abs().upper_double() == 0) continue;
            CBall f = m[r][col] / m[col][col];
            for (int j = col; j < n; ++j) m[r][j] = m[r][j] - f * m[col][j];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    c.clear();
    for (int i = 0; i < n; ++i) {
        if (m[i][i].contains_zero()) return false;
        c.push_back(rhs[i] / m[i][i]);
    }
    return true;
}

// all integer roots of a monic integer polynomial
std::vector<mpz_class> integer_roots(const IntPoly& g) {
    std::vector<mpz_class> out;
    int k = 0;
    while (k < g.degree() && g.coeff(k) == 0) ++k;
    if (k > 0) out.push_back(0);
    if (k > g.degree()) return out;
    std::vector<mpz_class> shifted(g.coeffs().begin() + k, g.coeffs().end());
    IntPoly h(shifted);
    if (h.degree() >= 1 && h.coeff(0) != 0) {
        std::vector<mpz_class> divs{1};
        for (auto& [p, e] : factor_mpz(h.coeff(0))) {
            std::vector<mpz_class> next;
            mpz_class pk = 1;
            for (int i = 0; i <= e; ++i) {
                for (auto& d : divs) next.push_back(d * pk);
                pk *= p;
            }
            divs = next;
        }
        for (auto& d : divs) {
            if (h.eval(d) == 0) out.push_back(d);
            mpz_class nd = -d;
            if (h.eval(nd) == 0) out.push_back(nd);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

// conjugate partner of each entry of a root list: an exact mirror exists by
// construction of complex_roots; real entries pair with themselves
std::vector<int> conj_pairing(const std::vector<CBall>& roots) {
    int n = static_cast<int>(roots.size());
    std::vector<int> conj_of(n, -1);
    for (int i = 0; i < n; ++i) {
        if (mpfr_zero_p(roots[i].im.mid())) {
            conj_of[i] = i;
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (mpfr_cmp(roots[i].re.mid(), roots[j].re.mid()) == 0 &&
                mpfr_cmpabs(roots[i].im.mid(), roots[j].im.mid()) == 0 &&
                mpfr_sgn(roots[i].im.mid()) == -mpfr_sgn(roots[j].im.mid())) {
                conj_of[i] = j;
                break;
            }
        }
        if (conj_of[i] < 0) throw internal_error("conj_pairing: missing mirror root");
    }
    return conj_of;
}

namespace {

// conjugation-compatible index maps for the embeddings of F
// done as: image of each conjugate-pair representative
std::vector<std::vector<int>> conj_compatible_maps(const FieldPtr& F, int target_count) {
    std::vector<std::vector<int>> maps;
    int n = F->degree();
    auto emb = F->embeddings(128);
    std::vector<int> conj_of = conj_pairing(emb);
    // enumerate maps a: {0..n-1} -> {0..target_count-1} with a(conj i) = conj a(i)
    // target conjugation: same adjacency convention on the target root list
    std::vector<int> a(n, -1);
    std::vector<int> reps;
    for (int i = 0; i < n; ++i)
        if (conj_of[i] >= i) reps.push_back(i);
    std::vector<int> choice(reps.size(), 0);
    while (true) {
        // build map
        bool valid = true;
        for (size_t k = 0; k < reps.size() && valid; ++k) {
            int i = reps[k];
            a[i] = choice[k];
            if (conj_of[i] != i) a[conj_of[i]] = -2;  // fill later with conj
        }
        maps.push_back(a);
        // increment
        size_t k = 0;
        while (k < reps.size()) {
            if (++choice[k] < target_count) break;
            choice[k] = 0;
            ++k;
        }
        if (k == reps.size()) break;
    }
    return maps;
}

}  // namespace

int automorphism_count_exact(const FieldPtr& F) {
    if (F->degree() == 2) return 2;
    const IntPoly& f = F->min_poly();
    mpz_class c3 = f.coeff(3), c2 = f.coeff(2), c1 = f.coeff(1), c0 = f.coeff(0);
    // resolvent cubic y^3 - c2 y^2 + (c3 c1 - 4 c0) y - (c3^2 c0 - 4 c2 c0 + c1^2)
    IntPoly r3({-(c3 * c3 * c0 - 4 * c2 * c0 + c1 * c1), c3 * c1 - 4 * c0, -c2, 1});
    std::vector<mpz_class> roots = integer_roots(r3);
    if (roots.empty()) return 1;  // S4 or A4
    if (roots.size() == 3) return 4;  // V4
    // one rational root: C4 vs D4 via Kappe-Warren
    mpz_class y0 = roots[0];
    mpz_class disc = poly_discriminant(f);
    mpz_class d1 = c3 * c3 - 4 * (c2 - y0);
    mpz_class d2 = y0 * y0 - 4 * c0;
    auto splits_over_sqrt_disc = [&](const mpz_class& d) {
        if (d == 0) return true;
        if (is_square(d)) return true;
        return is_square(d * disc);
    };
    if (splits_over_sqrt_disc(d1) && splits_over_sqrt_disc(d2)) return 4;  // C4
    return 2;                                                              // D4
}

std::vector<FieldAutomorphism> field_automorphisms(const FieldPtr& F) {
    int n = F->degree();
    const IntPoly& f = F->min_poly();
    int want = automorphism_count_exact(F);
    if (n == 2) {
        // theta' = -c1 - theta, exactly
        std::vector<FieldAutomorphism> out;
        FieldAutomorphism id;
        id.theta_image = {mpq_class(0), mpq_class(1)};
        id.is_identity = true;
        out.push_back(id);
        FieldAutomorphism s;
        s.theta_image = {mpq_class(-f.coeff(1)), mpq_class(-1)};
        out.push_back(s);
        return out;
    }
    mpz_class qmax = abs(poly_discriminant(f)) + 1000000;
    for (mpfr_prec_t prec = 320; prec <= 8192; prec *= 2) {
        auto emb = F->embeddings(prec);
        std::vector<int> conj_of = conj_pairing(emb);
        std::vector<FieldAutomorphism> out;
        auto maps = conj_compatible_maps(F, n);
        bool retry = false;
        for (auto& a : maps) {
            // complete the map with conjugate assignments
            std::vector<CBall> w;
            w.reserve(n);
            bool bad = false;
            for (int i = 0; i < n; ++i) {
                int t = a[i];
                if (t == -2) {
                    // conjugate of the partner's target
                    int partner = conj_of[i];
                    int tp = a[partner];
                    if (tp < 0) {
                        bad = true;
                        break;
                    }
                    int tconj = conj_of[tp];
                    w.push_back(emb[tconj]);
                } else {
                    w.push_back(emb[t]);
                }
            }
            if (bad) continue;
            std::vector<CBall> c;
            if (!solve_vandermonde(emb, w, c)) {
                retry = true;
                break;
            }
            // coefficients must be real and near-rational
            QVec g(n);
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                if (!c[j].im.contains_zero()) {
                    ok = false;
                    break;
                }
                mpq_class val;
                if (!reconstruct_ball(c[j].re, qmax, val)) {
                    ok = false;
                    break;
                }
                g[j] = val;
            }
            if (!ok) continue;
            // exact verification: f(g(x)) = 0 mod f(x) over Q
            // scale to integers: let D = lcm of denominators
            mpz_class D = 1;
            for (auto& q : g) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den().get_mpz_t());
            std::vector<mpz_class> gz(n);
            for (int j = 0; j < n; ++j) {
                mpq_class s = g[j] * mpq_class(D);
                gz[j] = s.get_num();
            }
            // f(g/D) * D^n = sum f_k g^k D^{n-k}: compute in Z[x] mod f
            IntPoly gpoly(gz);
            IntPoly acc;  // horner: acc = acc*g + f_k D^k ... careful with scaling
            // evaluate h(y) = D^n f(y/D) at y = gpoly: h monic-scaled integer poly
            std::vector<mpz_class> h(n + 1);
            mpz_class Dk = 1;
            for (int k = n; k >= 0; --k) {
                h[k] = f.coeff(k) * Dk;
                Dk *= D;
            }
            IntPoly hpoly(h);
            IntPoly composed = IntPoly::compose_mod(hpoly, gpoly, f);
            if (!composed.is_zero()) continue;
            FieldAutomorphism au;
            au.theta_image = g;
            au.is_identity = (g[1] == 1 && g[0] == 0 && (n < 3 || (g[2] == 0 && g[3] == 0)));
            // dedupe
            bool dup = false;
            for (auto& ex : out)
                if (ex.theta_image == g) dup = true;
            if (!dup) out.push_back(au);
        }
        if (retry) continue;
        if (static_cast<int>(out.size()) == want) {
            std::sort(out.begin(), out.end(), [](const FieldAutomorphism& x,
                                                 const FieldAutomorphism& y) {
                if (x.is_identity != y.is_identity) return x.is_identity > y.is_identity;
                for (size_t i = 0; i < x.theta_image.size(); ++i)
                    if (x.theta_image[i] != y.theta_image[i])
                        return x.theta_image[i] < y.theta_image[i];
                return false;
            });
            return out;
        }
        // found fewer (or more) than the exact count: raise precision
    }
    throw internal_error("field_automorphisms: numeric search disagrees with exact count");
}

QVec apply_automorphism(const FieldPtr& F, const FieldAutomorphism& s, const QVec& elem) {
    if (s.is_identity) return elem;
    int n = F->degree();
    const IntPoly& f = F->min_poly();
    // Horner: evaluate elem as a polynomial at theta_image, mod f
    QVec acc(n, mpq_class(0));
    for (int k = n - 1; k >= 0; --k) {
        QVec prod(2 * n - 1, mpq_class(0));
        for (int i = 0; i < n; ++i) {
            if (acc[i] == 0) continue;
            for (int j = 0; j < n; ++j) prod[i + j] += acc[i] * s.theta_image[j];
        }
        for (int kk = 2 * n - 2; kk >= n; --kk) {
            if (prod[kk] == 0) continue;
            mpq_class c = prod[kk];
            prod[kk] = 0;
            for (int j = 0; j < n; ++j) prod[kk - n + j] -= c * mpq_class(f.coeff(j));
        }
        for (int i = 0; i < n; ++i) acc[i] = prod[i];
        acc[0] += elem[k];
    }
    return acc;
}

std::vector<mpz_class> quadratic_subfields(const FieldPtr& F) {
    if (F->degree() != 4) throw invalid_argument_error("quadratic_subfields: degree must be 4");
    const IntPoly& f = F->min_poly();
    mpz_class c3 = f.coeff(3), c2 = f.coeff(2), c1 = f.coeff(1), c0 = f.coeff(0);

    // route 1: resolvent cubic rational roots
    std::vector<mpz_class> route1;
    {
        IntPoly r3({-(c3 * c3 * c0 - 4 * c2 * c0 + c1 * c1), c3 * c1 - 4 * c0, -c2, 1});
        std::vector<mpz_class> roots = integer_roots(r3);
        for (auto& y0 : roots) {
            mpz_class dd1 = y0 * y0 - 4 * c0;             // (r1 r2 - r3 r4)^2
            mpz_class dd2 = c3 * c3 - 4 * c2 + 4 * y0;    // (r1 + r2 - r3 - r4)^2
            for (const mpz_class& d : {dd1, dd2}) {
                if (d == 0 || is_square(d)) continue;
                route1.push_back(squarefree_part(d));
            }
        }
        std::sort(route1.begin(), route1.end());
        route1.erase(std::unique(route1.begin(), route1.end()), route1.end());
    }

    // route 2: fixed fields of order-2 automorphisms
    std::vector<mpz_class> route2;
    {
        auto auts = field_automorphisms(F);
        for (auto& s : auts) {
            if (s.is_identity) continue;
            // sigma^2 = id?
            QVec x{mpq_class(0), mpq_class(1), mpq_class(0), mpq_class(0)};
            QVec sx = s.theta_image;
            QVec ssx = apply_automorphism(F, s, sx);
            if (!(ssx == x)) continue;  // order 4 element
            // fixed space of the 4x4 rational matrix of sigma
            QMat M(4, QVec(4, mpq_class(0)));
            // rows: images of power basis elements 1, t, t^2, t^3
            QVec cur{mpq_class(1), mpq_class(0), mpq_class(0), mpq_class(0)};
            for (int k = 0; k < 4; ++k) {
                QVec img(4, mpq_class(0));
                // image of t^k = (s theta)^k mod f: compute by repeated apply
                // use poly powers of theta_image
                if (k == 0)
                    img[0] = 1;
                else {
                    QVec e(4, mpq_class(0));
                    e[k] = 1;
                    img = apply_automorphism(F, s, e);
                }
                M[k] = img;
            }
            // kernel of (M - I): find a non-rational fixed vector
            QMat K = M;
            for (int i = 0; i < 4; ++i) K[i][i] -= 1;
            // row-reduce K^T x = 0 i.e. x (as power coords) with x M = x:
            // treat fixed vectors v with v = coords of element beta: beta
            // image coords = v applied: beta = sum v_k t^k: sigma(beta) coords
            // = sum v_k M[k]: fixed iff sum v_k (M[k] - e_k) = 0: v K = 0
            // left kernel of K:
            QMat kt(4, QVec(4));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) kt[i][j] = K[j][i];
            // gaussian elimination for kernel of kt x = 0 (columns x)
            std::vector<QVec> kerbasis;
            {
                QMat mtx = kt;
                std::vector<int> pivot_of_col(4, -1);
                int rr = 0;
                for (int c = 0; c < 4 && rr < 4; ++c) {
                    int piv = -1;
                    for (int r2 = rr; r2 < 4; ++r2)
                        if (mtx[r2][c] != 0) {
                            piv = r2;
                            break;
                        }
                    if (piv < 0) continue;
                    std::swap(mtx[piv], mtx[rr]);
                    mpq_class inv = 1 / mtx[rr][c];
                    for (int j = 0; j < 4; ++j) mtx[rr][j] *= inv;
                    for (int r2 = 0; r2 < 4; ++r2) {
                        if (r2 == rr || mtx[r2][c] == 0) continue;
                        mpq_class fct = mtx[r2][c];
                        for (int j = 0; j < 4; ++j) mtx[r2][j] -= fct * mtx[rr][j];
                    }
                    pivot_of_col[c] = rr;
                    ++rr;
                }
                for (int c = 0; c < 4; ++c) {
                    if (pivot_of_col[c] >= 0) continue;
                    QVec v(4, mpq_class(0));
                    v[c] = 1;
                    for (int c2 = 0; c2 < 4; ++c2)
                        if (pivot_of_col[c2] >= 0) v[c2] = -mtx[pivot_of_col[c2]][c];
                    kerbasis.push_back(v);
                }
            }
            // pick a non-rational fixed element
            for (auto& v : kerbasis) {
                if (v[1] == 0 && v[2] == 0 && v[3] == 0) continue;
                // min poly z^2 - t z + m of beta: t = beta + sigma(beta) =
                // 2 beta projected... compute exactly: beta^2 in power basis,
                // then solve beta^2 = t beta - m with rational t, m
                // beta^2:
                QVec b2(7, mpq_class(0));
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) b2[i + j] += v[i] * v[j];
                for (int kk = 6; kk >= 4; --kk) {
                    if (b2[kk] == 0) continue;
                    mpq_class c = b2[kk];
                    b2[kk] = 0;
                    for (int j = 0; j < 4; ++j) b2[kk - 4 + j] -= c * mpq_class(f.coeff(j));
                }
                b2.resize(4);
                // solve b2 = t v - m e0 in the 2-dim space spanned by v, e0
                // coordinates: find t from a nonzero coefficient of v
                int idx = -1;
                for (int i = 1; i < 4; ++i)
                    if (v[i] != 0) idx = i;
                if (idx < 0) continue;
                mpq_class t = b2[idx] / v[idx];
                mpq_class m = t * v[0] - b2[0];
                // verify b2 == t v - m e0
                bool okq = true;
                for (int i = 0; i < 4; ++i) {
                    mpq_class want = t * v[i] - (i == 0 ? m : mpq_class(0));
                    if (b2[i] != want) okq = false;
                }
                if (!okq) continue;  // beta has degree > 2 (kernel dim 2 includes it)
                mpq_class discq = t * t - 4 * m;
                if (discq == 0) continue;
                // d = squarefree part of disc numerator * denominator
                mpz_class num = discq.get_num() * discq.get_den();
                if (is_square(num)) continue;
                route2.push_back(squarefree_part(num));
            }
        }
        std::sort(route2.begin(), route2.end());
        route2.erase(std::unique(route2.begin(), route2.end()), route2.end());
    }

    if (route1 != route2)
        throw internal_error("quadratic_subfields: resolvent and automorphism routes disagree");
    return route1;
}

std::vector<QVec> roots_in_field(const IntPoly& g, const FieldPtr& F) {
    int n = F->degree();
    IntPoly gc = g.canonical();
    if (gc.degree() < 1) return {};
    mpz_class qmax = abs(poly_discriminant(F->min_poly())) * 1000 + 1000000;
    for (mpfr_prec_t prec = 320; prec <= 8192; prec *= 2) {
        auto emb = F->embeddings(prec);
        std::vector<CBall> groots;
        try {
            double target = std::max(std::ldexp(1.0, -static_cast<int>(prec) / 2), 1e-280);
            groots = complex_roots(gc, target);
        } catch (const precision_exhausted_error&) {
            continue;
        }
        int m = static_cast<int>(groots.size());
        std::vector<int> emb_conj = conj_pairing(emb);
        std::vector<int> g_conj = conj_pairing(groots);
        auto maps = conj_compatible_maps(F, m);
        std::vector<QVec> found;
        bool retry = false;
        for (auto& a : maps) {
            std::vector<CBall> w;
            bool bad = false;
            for (int i = 0; i < n; ++i) {
                int t = a[i];
                if (t == -2) {
                    int partner = emb_conj[i];
                    int tp = a[partner];
                    if (tp < 0) {
                        bad = true;
                        break;
                    }
                    w.push_back(groots[g_conj[tp]]);
                } else {
                    w.push_back(groots[t]);
                }
            }
            if (bad) continue;
            std::vector<CBall> c;
            if (!solve_vandermonde(emb, w, c)) {
                retry = true;
                break;
            }
            QVec beta(n);
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                if (!c[j].im.contains_zero()) {
                    ok = false;
                    break;
                }
                mpq_class val;
                if (!reconstruct_ball(c[j].re, qmax, val)) {
                    ok = false;
                    break;
                }
                beta[j] = val;
            }
            if (!ok) continue;
            // exact verification: g(beta) = 0 in F
            mpz_class D = 1;
            for (auto& q : beta) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den().get_mpz_t());
            std::vector<mpz_class> bz(n);
            for (int j = 0; j < n; ++j) bz[j] = mpq_class(beta[j] * mpq_class(D)).get_num();
            IntPoly bpoly(bz);
            int dg = gc.degree();
            std::vector<mpz_class> h(dg + 1);
            mpz_class Dk = 1;
            for (int k = dg; k >= 0; --k) {
                h[k] = gc.coeff(k) * Dk;
                Dk *= D;
            }
            IntPoly comp = IntPoly::compose_mod(IntPoly(h), bpoly, F->min_poly());
            if (!comp.is_zero()) continue;
            bool dup = false;
            for (auto& ex : found)
                if (ex == beta) dup = true;
            if (!dup) found.push_back(beta);
        }
        if (!retry) return found;
    }
    throw precision_exhausted_error("roots_in_field: precision ladder exhausted");
}

bool fields_isomorphic(const FieldPtr& A, const FieldPtr& B) {
    if (A->degree() != B->degree()) return false;
    if (A->min_poly() == B->min_poly()) return true;
    return !roots_in_field(B->min_poly(), A).empty();
}

}  // namespace qc
