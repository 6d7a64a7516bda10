#include "qcensus/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qcensus/num_util.hpp"
#include "qcensus/zmod_poly.hpp"
#include "qcensus/quadratic.hpp"
#include "qcensus/relations.hpp"
#include "qcensus/subfields.hpp"

namespace qc {

namespace {

/* Proven regulator floor: a non-torsion unit of a totally complex quartic
 * order has |log|tau(u)|| > 0.05 (integer-coefficient pinching on the
 * minimal polynomial; see the unit tests for the numeric verification), and
 * a real quadratic unit > 1 is at least the golden ratio. */
constexpr double kRhoFloor = 0.05;

bool is_torsion_elem(const Order& o, const ZVec& x, unsigned long* ord_out = nullptr) {
    // torsion orders in degree <= 4 divide 12 or equal 5/10
    ZVec acc = x;
    ZVec one = o.one();
    for (unsigned long k = 1; k <= 12; ++k) {
        if (acc == one) {
            if (ord_out) *ord_out = k;
            return true;
        }
        acc = o.mul(acc, x);
    }
    // order 5 and 10 pass 12 only if already caught (10 | lcm scan up to 12
    // misses nothing since acc cycles); handle explicitly anyway:
    acc = o.pow(x, 5);
    if (acc == one) {
        if (ord_out) *ord_out = 5;
        return true;
    }
    acc = o.pow(x, 10);
    if (acc == one) {
        if (ord_out) *ord_out = 10;
        return true;
    }
    return false;
}

CBall embed_power(const FieldPtr& field, const QVec& v, int k, mpfr_prec_t prec) {
    auto roots = field->embeddings(prec);
    int n = field->degree();
    CBall acc(RBall::exact(0L, prec), RBall::exact(0L, prec));
    for (int i = n - 1; i >= 0; --i) {
        acc = acc * roots[k];
        acc.re = acc.re + RBall::exact(v[i], prec);
    }
    return acc;
}

// |log |sigma_0(u)|| as a certified ball
RBall rho_of(const FieldPtr& field, const QVec& u, mpfr_prec_t prec) {
    CBall v = embed_power(field, u, 0, prec);
    RBall a = v.abs();
    return a.log().abs();
}

// principal argument of a ball, robust against the branch cut
RBall safe_arg(const CBall& z) {
    try {
        return z.arg();
    } catch (const precision_exhausted_error&) {
        // rotate by i: arg z = arg(i z) - pi/2
        CBall iz(-z.im, z.re);
        RBall a = iz.arg();
        RBall halfpi = RBall::pi(z.prec());
        mpfr_div_ui(halfpi.mid_mut(), halfpi.mid(), 2, MPFR_RNDN);
        halfpi.bump_ulp();
        return a - halfpi;
    }
}

struct EngineResult {
    std::vector<QVec> units;  // power-basis, non-torsion, in O_max
};

// collect candidate units of the maximal order
EngineResult collect_units(const OrderHandle& omax, const UnitSearchBudget& budget) {
    EngineResult out;
    double dd = std::abs(omax->disc().get_d());
    auto consider = [&](const QVec& u) {
        ZVec coords;
        if (!omax->from_power_basis(u, coords)) return;
        mpz_class nrm = omax->norm(coords);
        if (nrm != 1 && nrm != -1) return;
        if (is_torsion_elem(*omax, coords)) return;
        for (auto& ex : out.units)
            if (ex == u) return;
        out.units.push_back(u);
    };
    for (unsigned long fb = 60; fb <= budget.max_fb; fb *= 4) {
        RelationEngine engine(omax, fb);
        double c0 = std::max(48.0, 8.0 * std::sqrt(std::sqrt(dd)) + 16.0);
        for (double c = c0; c <= budget.max_t2; c *= 3) {
            engine.harvest(c, budget.max_relations);
            for (auto& u : engine.bucket_units()) consider(u);
            if (!out.units.empty()) return out;
            for (auto& u : engine.kernel_units()) consider(u);
            if (!out.units.empty()) return out;
        }
    }
    return out;
}

// exact q-th root extraction: find v in omax, torsion zeta with v^q = zeta*u;
// returns true and replaces u by v
bool extract_prime_root(const OrderHandle& omax, unsigned long mu, const ZVec& torsion_gen,
                        QVec& u, unsigned long q) {
    const FieldPtr& field = omax->field();
    int n = field->degree();
    mpz_class qmax = abs(poly_discriminant(field->min_poly())) * 1000 + 1000000;
    for (mpfr_prec_t prec = 384; prec <= 4096; prec *= 2) {
        auto emb = field->embeddings(prec);
        auto conj = conj_pairing(emb);
        // embeddings of u
        std::vector<CBall> uv;
        for (int i = 0; i < n; ++i) uv.push_back(embed_power(field, u, i, prec));
        // representatives of conjugate pairs
        std::vector<int> reps;
        for (int i = 0; i < n; ++i)
            if (conj[i] >= i) reps.push_back(i);
        RBall two_pi = RBall::pi(prec) + RBall::pi(prec);
        for (unsigned long j = 0; j < mu; ++j) {
            // zeta^j * u
            QVec zu = u;
            if (j > 0) {
                ZVec zj = omax->pow(torsion_gen, j);
                zu = field_mul(field, omax->to_power_basis(zj), u);
            }
            std::vector<CBall> zv;
            for (int i = 0; i < n; ++i) zv.push_back(embed_power(field, zu, i, prec));
            // phases per representative pair
            std::vector<unsigned long> phase(reps.size(), 0);
            while (true) {
                // build target embeddings of v
                std::vector<CBall> target(n, CBall(prec));
                bool bad = false;
                for (size_t rI = 0; rI < reps.size() && !bad; ++rI) {
                    int i = reps[rI];
                    RBall mag = zv[i].abs();
                    if (!mag.is_positive()) {
                        bad = true;
                        break;
                    }
                    RBall logm = mag.log();
                    RBall root_mag_log(prec);
                    mpfr_div_ui(root_mag_log.mid_mut(), logm.mid(), q, MPFR_RNDN);
                    mpfr_div_ui(root_mag_log.rad_mut(), logm.rad(), q, MPFR_RNDU);
                    root_mag_log.bump_ulp();
                    RBall rmag = root_mag_log.exp();
                    RBall ang = safe_arg(zv[i]);
                    // (ang + 2 pi m) / q
                    RBall shifted = ang;
                    for (unsigned long t = 0; t < phase[rI]; ++t) shifted = shifted + two_pi;
                    RBall va(prec);
                    mpfr_div_ui(va.mid_mut(), shifted.mid(), q, MPFR_RNDN);
                    mpfr_div_ui(va.rad_mut(), shifted.rad(), q, MPFR_RNDU);
                    va.bump_ulp();
                    CBall tv(rmag * va.cos(), rmag * va.sin());
                    target[i] = tv;
                    if (conj[i] != i) target[conj[i]] = tv.conj();
                }
                if (!bad) {
                    std::vector<CBall> c;
                    // Vandermonde solve for power-basis coords of v
                    bool solved = true;
                    {
                        int m = n;
                        std::vector<std::vector<CBall>> vm;
                        std::vector<CBall> rhs = target;
                        for (int i = 0; i < m; ++i) {
                            std::vector<CBall> row;
                            CBall pw(RBall::exact(1L, prec), RBall::exact(0L, prec));
                            for (int jj = 0; jj < m; ++jj) {
                                row.push_back(pw);
                                pw = pw * emb[i];
                            }
                            vm.push_back(std::move(row));
                        }
                        for (int col = 0; col < m && solved; ++col) {
                            int best = -1;
                            double bm = 0;
                            for (int r = col; r < m; ++r) {
                                double mg = vm[r][col].abs().lower_double();
                                if (mg > bm) {
                                    bm = mg;
                                    best = r;
                                }
                            }
                            if (best < 0) {
                                solved = false;
                                break;
                            }
                            std::swap(vm[best], vm[col]);
                            std::swap(rhs[best], rhs[col]);
                            for (int r = 0; r < m; ++r) {
                                if (r == col) continue;
                                CBall f = vm[r][col] / vm[col][col];
                                for (int jj = col; jj < m; ++jj)
                                    vm[r][jj] = vm[r][jj] - f * vm[col][jj];
                                rhs[r] = rhs[r] - f * rhs[col];
                            }
                        }
                        if (solved)
                            for (int i = 0; i < m; ++i) {
                                if (vm[i][i].contains_zero()) {
                                    solved = false;
                                    break;
                                }
                                c.push_back(rhs[i] / vm[i][i]);
                            }
                    }
                    if (solved) {
                        QVec vq(n);
                        bool ok = true;
                        for (int i = 0; i < n && ok; ++i) {
                            if (!c[i].im.contains_zero()) ok = false;
                            mpq_class val;
                            if (ok && !reconstruct_ball(c[i].re, qmax, val)) ok = false;
                            if (ok) vq[i] = val;
                        }
                        if (ok) {
                            // exact verification: v in O_max and v^q = zeta^j u
                            ZVec vcoords;
                            if (omax->from_power_basis(vq, vcoords)) {
                                QVec vpow = field_pow(field, vq, static_cast<long>(q));
                                if (vpow == zu) {
                                    u = vq;
                                    return true;
                                }
                            }
                        }
                    }
                }
                // next phase combination
                size_t k = 0;
                while (k < phase.size()) {
                    if (++phase[k] < q) break;
                    phase[k] = 0;
                    ++k;
                }
                if (k == phase.size()) break;
            }
        }
        // phases exhausted at this precision: no root (the search is complete
        // at any precision where reconstruction of a true root succeeds;
        // retry once at higher precision for safety only when q is small)
        if (prec >= 768) return false;
    }
    return false;
}

// fold two units into one whose rho is gcd-level
QVec combine_units(const OrderHandle& omax, const QVec& a, const QVec& b) {
    const FieldPtr& field = omax->field();
    for (mpfr_prec_t prec = 256; prec <= 2048; prec *= 2) {
        RBall ra = rho_of(field, a, prec);
        RBall rb = rho_of(field, b, prec);
        // ratio = ra/rb = p/q with p, q <= rho/floor
        RBall ratio = ra / rb;
        double rmax = std::max(ra.upper_double(), rb.upper_double());
        long qb = static_cast<long>(rmax / kRhoFloor) + 2;
        mpq_class ratq;
        mpq_class x = ratio.mid_rational();
        mpq_class err(ratio.rad_double() * 4 + 1e-30);
        if (!rational_reconstruct(x, mpz_class(qb), err, ratq)) continue;
        long p = static_cast<long>(ratq.get_num().get_si());
        long q = static_cast<long>(ratq.get_den().get_si());
        if (p <= 0 || q <= 0 || p > 2 * qb || q > 2 * qb) continue;
        // verify a^q b^{-p} is torsion, exactly
        QVec t = field_mul(field, field_pow(field, a, q), field_pow(field, b, -p));
        ZVec tc;
        if (!omax->from_power_basis(t, tc)) continue;
        if (!is_torsion_elem(*omax, tc)) continue;
        // extended euclid: x p + y q = 1 -> w = a^x b^y has rho = rho_a / p
        long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = p, r1 = q;
        while (r1) {
            long qq = r0 / r1;
            long r2 = r0 - qq * r1, x2 = x0 - qq * x1, y2 = y0 - qq * y1;
            r0 = r1;
            r1 = r2;
            x0 = x1;
            x1 = x2;
            y0 = y1;
            y1 = y2;
        }
        if (r0 != 1) continue;  // p/q not reduced?! (cannot happen)
        QVec w = field_mul(field, field_pow(field, a, x0), field_pow(field, b, y0));
        ZVec wc;
        if (!omax->from_power_basis(w, wc)) continue;
        if (is_torsion_elem(*omax, wc)) continue;
        return w;
    }
    // fall back to the smaller of the two
    RBall ra = rho_of(field, a, 256);
    RBall rb = rho_of(field, b, 256);
    return (ra.mid_double() <= rb.mid_double()) ? a : b;
}

}  // namespace

std::pair<unsigned long, ZVec> torsion_units(const OrderHandle& order) {
    const FieldPtr& field = order->field();
    int n = field->degree();
    ZVec minus_one;
    {
        QVec m1(n, mpq_class(0));
        m1[0] = -1;
        if (!order->from_power_basis(m1, minus_one))
            throw internal_error("torsion_units: -1 not in order");
    }
    if (n == 2 && order->disc() > 0) return {2, minus_one};
    // candidate torsion orders with phi(k) <= degree
    std::vector<int> prim = (n == 2) ? std::vector<int>{3, 4, 6} : std::vector<int>{3, 4, 5, 8, 12};
    std::map<int, ZVec> found;  // primitive k-th roots of unity in the order
    for (int k : prim) {
        IntPoly phi_k;
        switch (k) {
            case 3: phi_k = IntPoly({1, 1, 1}); break;
            case 4: phi_k = IntPoly({1, 0, 1}); break;
            case 5: phi_k = IntPoly({1, 1, 1, 1, 1}); break;
            case 6: phi_k = IntPoly({1, -1, 1}); break;
            case 8: phi_k = IntPoly({1, 0, 0, 0, 1}); break;
            case 12: phi_k = IntPoly({1, 0, -1, 0, 1}); break;
            default: continue;
        }
        if (phi_k.degree() > n) continue;
        for (auto& root : roots_in_field(phi_k, field)) {
            ZVec coords;
            if (order->from_power_basis(root, coords)) {
                unsigned long ord = 0;
                if (!is_torsion_elem(*order, coords, &ord) || ord != static_cast<unsigned long>(k))
                    throw internal_error("torsion_units: root of Phi_k has wrong order");
                found.emplace(k, coords);
                break;
            }
        }
    }
    unsigned long mu = 2;
    for (auto& [k, g] : found) mu = std::lcm(mu, static_cast<unsigned long>(k));
    // assemble a generator of the cyclic group of order mu
    ZVec gen = minus_one;
    if (mu % 4 == 0 || mu % 8 == 0) {
        // 2-part comes from the largest 2-power torsion present
        if (mu % 8 == 0)
            gen = found.at(8);
        else
            gen = found.at(4);
    }
    if (mu % 3 == 0) gen = order->mul(gen, found.at(3));
    if (mu % 5 == 0) gen = order->mul(gen, found.at(5));
    // 12 present as a primitive element?
    if (found.count(12) && mu % 12 == 0 && !found.count(4)) gen = found.at(12);
    unsigned long check = 0;
    if (!is_torsion_elem(*order, gen, &check) || check != mu) {
        // combining parts failed (e.g. mu = 12 via zeta12 directly): retry
        if (found.count(12) && mu == 12) {
            gen = found.at(12);
            if (is_torsion_elem(*order, gen, &check) && check == 12) return {mu, gen};
        }
        throw internal_error("torsion_units: generator has order " + std::to_string(check) +
                             " but mu = " + std::to_string(mu));
    }
    return {mu, gen};
}

UnitData fundamental_unit(const OrderHandle& order, const UnitSearchBudget& budget) {
    const FieldPtr& field = order->field();
    int n = field->degree();
    UnitData out;
    out.order = order;
    mpfr_prec_t prec = 256;

    if (n == 2) {
        if (order->disc() <= 0)
            throw invalid_argument_error("fundamental_unit: rank 0 (imaginary quadratic)");
        if (!order->disc().fits_slong_p())
            throw invalid_argument_error("fundamental_unit: discriminant too large");
        long D = order->disc().get_si();
        QuadUnit qu = quadratic_fundamental_unit(D);
        // express (x + y sqrt(D))/2 in the power basis: sqrt(D) is the
        // rational multiple r (2 theta + c1) with r^2 = D / disc(f)
        const IntPoly& f = field->min_poly();
        mpz_class c1 = f.coeff(1);
        mpq_class ratio(order->disc(), poly_discriminant(f));
        ratio.canonicalize();
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), ratio.get_num().get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), ratio.get_den().get_mpz_t());
        if (rn * rn != ratio.get_num() || rd * rd != ratio.get_den())
            throw internal_error("fundamental_unit: disc ratio not a rational square");
        mpq_class r(rn, rd);
        r.canonicalize();
        QVec pw(2);
        pw[0] = (mpq_class(qu.x) + mpq_class(qu.y) * r * mpq_class(c1)) / 2;
        pw[1] = mpq_class(qu.y) * r;
        ZVec coords;
        if (!order->from_power_basis(pw, coords)) {
            // the conjugate choice of sqrt
            pw[0] = (mpq_class(qu.x) - mpq_class(qu.y) * r * mpq_class(c1)) / 2;
            pw[1] = -mpq_class(qu.y) * r;
            if (!order->from_power_basis(pw, coords))
                throw internal_error("fundamental_unit: Pell unit not in order");
        }
        // power of the maximal order's fundamental unit
        {
            Order om = order_maximal_at(field, {}, true);
            double rmax = quadratic_regulator(om.disc().get_si());
            double rsub = qu.log_value;
            long m = std::lround(rsub / rmax);
            if (m < 1 || std::abs(m * rmax - rsub) > 1e-6 * (1 + rsub))
                throw internal_error("fundamental_unit: bad unit index in maximal order");
            out.index_in_maximal = static_cast<unsigned long>(m);
        }
        out.fund_unit = coords;
        auto [mu, gen] = torsion_units(order);
        out.mu = mu;
        out.torsion_gen = gen;
        // rho = log((x + y sqrt D)/2), exact data
        RBall xq = RBall::exact(qu.x, prec);
        RBall yq = RBall::exact(qu.y, prec);
        RBall sq = RBall::exact(mpz_class(D), prec).sqrt();
        RBall val = (xq + yq * sq) * RBall::exact(mpq_class(1, 2), prec);
        out.rho = val.abs().log().abs();
        out.regulator = out.rho;
        return out;
    }

    if (!field->totally_complex())
        throw invalid_argument_error("fundamental_unit: quartic order must be totally complex");

    // maximal order and its torsion
    OrderHandle omax = make_order_handle(order_maximal_at(field, {}, true));
    auto [mu_max, gen_max] = torsion_units(omax);

    // find some units of omax
    EngineResult pool = collect_units(omax, budget);
    if (pool.units.empty())
        throw search_budget_exhausted_error("fundamental_unit: no unit found within budget",
                                            kRhoFloor);

    // fold to the gcd level
    QVec cand = pool.units[0];
    for (size_t i = 1; i < pool.units.size(); ++i) cand = combine_units(omax, cand, pool.units[i]);

    // prime-root refinement with certificate
    while (true) {
        RBall rho = rho_of(field, cand, 320);
        double rup = rho.upper_double();
        unsigned long qlim = static_cast<unsigned long>(rup / kRhoFloor) + 1;
        bool reduced = false;
        for (unsigned long q = 2; q <= qlim; ++q) {
            if (!is_prime_u64(q)) continue;
            if (extract_prime_root(omax, mu_max, gen_max, cand, q)) {
                reduced = true;
                break;
            }
        }
        if (!reduced) break;
    }

    // descend into the requested order
    QVec eps_pw = cand;
    if (order->disc() != omax->disc()) {
        mpz_class ratio;
        mpz_divexact(ratio.get_mpz_t(), order->disc().get_mpz_t(), omax->disc().get_mpz_t());
        mpz_class idx;
        mpz_sqrt(idx.get_mpz_t(), ratio.get_mpz_t());
        mpz_class cap = idx * idx * idx * idx * 2 + 64;
        bool found_k = false;
        for (mpz_class k = 1; k <= cap && !found_k; ++k) {
            out.index_in_maximal = k.get_ui();
            QVec ek = field_pow(field, cand, k.get_si());
            QVec zj(n, mpq_class(0));
            zj[0] = 1;
            for (unsigned long j = 0; j < mu_max; ++j) {
                if (j > 0) zj = field_mul(field, zj, omax->to_power_basis(gen_max));
                QVec u = (j == 0) ? ek : field_mul(field, zj, ek);
                ZVec coords;
                if (order->from_power_basis(u, coords)) {
                    eps_pw = u;
                    found_k = true;
                    break;
                }
            }
        }
        if (!found_k) throw internal_error("fundamental_unit: unit power descent failed");
    }
    ZVec eps;
    if (!order->from_power_basis(eps_pw, eps))
        throw internal_error("fundamental_unit: descent inconsistency");

    auto [mu_o, gen_o] = torsion_units(order);
    out.mu = mu_o;
    out.torsion_gen = gen_o;

    // orientation: want |sigma_0-pair| < 1
    IntPoly mp = order->min_poly_of(eps);
    if (mp.degree() == 2) {
        // epsilon generates the real quadratic subfield (C^r order)
        out.angles_exact_degenerate = true;
        // embeddings are real: {b, b, 1/b, 1/b}
        CBall v0 = order->embed(eps, 0, prec);
        RBall a0 = v0.abs();
        if (!(a0 - RBall::exact(1L, prec)).is_negative()) {
            // invert so a < 1
            QVec inv = field_inverse(field, eps_pw);
            if (!order->from_power_basis(inv, eps))
                throw internal_error("fundamental_unit: inverse not in order");
            eps_pw = inv;
            v0 = order->embed(eps, 0, prec);
        }
        // theta = 0 if the small pair is positive real, pi if negative
        bool neg = v0.re.is_negative();
        out.theta = neg ? RBall::pi(prec) : RBall::exact(0L, prec);
        CBall vbig = CBall(RBall::exact(1L, prec), RBall::exact(0L, prec)) / v0;
        bool neg2 = vbig.re.is_negative();
        out.phi = neg2 ? RBall::pi(prec) : RBall::exact(0L, prec);
        out.rho = v0.abs().log().abs();
    } else {
        for (mpfr_prec_t pr = prec;; pr *= 2) {
            if (pr > 8192) throw precision_exhausted_error("fundamental_unit: angle extraction");
            auto emb = field->embeddings(pr);
            auto conj = conj_pairing(emb);
            std::vector<CBall> vals;
            QVec pw = order->to_power_basis(eps);
            for (int i = 0; i < n; ++i) vals.push_back(embed_power(field, pw, i, pr));
            // pick representative of each pair
            std::vector<int> reps;
            for (int i = 0; i < n; ++i)
                if (conj[i] > i) reps.push_back(i);
            if (reps.size() != 2) throw internal_error("fundamental_unit: expected 2 pairs");
            RBall a0 = vals[reps[0]].abs();
            RBall one = RBall::exact(1L, pr);
            bool small0 = (a0 - one).is_negative();
            bool big0 = (one - a0).is_negative();
            if (!small0 && !big0) continue;  // straddles 1: more precision
            int small_rep = small0 ? reps[0] : reps[1];
            int big_rep = small0 ? reps[1] : reps[0];
            if (!small0) {
                // confirm the other pair is small
                RBall a1 = vals[reps[1]].abs();
                if (!(a1 - one).is_negative()) continue;
            }
            // normalise eps so the small pair exists (always does: a != 1)
            // theta from the small pair (im > 0 member), phi from the big one
            int th_idx = small_rep;
            if (!vals[th_idx].im.is_positive()) th_idx = conj[th_idx];
            int ph_idx = big_rep;
            if (!vals[ph_idx].im.is_positive()) ph_idx = conj[ph_idx];
            if (!vals[th_idx].im.is_positive() || !vals[ph_idx].im.is_positive()) continue;
            out.theta = safe_arg(vals[th_idx]);
            out.phi = safe_arg(vals[ph_idx]);
            out.rho = vals[small_rep].abs().log().abs();
            break;
        }
    }
    RBall two = RBall::exact(2L, out.rho.prec());
    out.regulator = two * out.rho;
    out.fund_unit = eps;
    // sanity: unit of norm one
    if (order->norm(eps) != 1)
        throw correspondence_violation_error("fundamental_unit: N(eps) != +1");
    return out;
}

int kappa(const OrderHandle& order, const UnitData& u) {
    const FieldPtr& field = order->field();
    if (field->degree() != 4 || !field->totally_complex())
        throw invalid_argument_error("kappa: totally complex quartic orders only");
    auto auts = field_automorphisms(field);
    QVec eps = order->to_power_basis(u.fund_unit);
    int count = 0;
    for (auto& s : auts) {
        QVec img = apply_automorphism(field, s, eps);
        ZVec coords;
        if (order->from_power_basis(img, coords)) ++count;
    }
    if (count != 1 && count != 2 && count != 4)
        throw correspondence_violation_error("kappa: count " + std::to_string(count) +
                                             " outside {1,2,4}");
    return count;
}

std::vector<QVec> all_fundamental_units(const OrderHandle& order, const UnitData& u) {
    const FieldPtr& field = order->field();
    QVec eps = order->to_power_basis(u.fund_unit);
    QVec eps_inv = field_inverse(field, eps);
    QVec zeta = order->to_power_basis(u.torsion_gen);
    std::vector<QVec> out;
    QVec zj(field->degree(), mpq_class(0));
    zj[0] = 1;
    for (unsigned long j = 0; j < u.mu; ++j) {
        if (j > 0) zj = field_mul(field, zj, zeta);
        out.push_back(field_mul(field, zj, eps));
        out.push_back(field_mul(field, zj, eps_inv));
    }
    // the 2 mu representatives must be pairwise distinct
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            if (out[i] == out[j])
                throw correspondence_violation_error(
                    "all_fundamental_units: representatives not distinct");
    return out;
}

RBall nu_invariant(const OrderHandle& order, const UnitData& u) {
    const FieldPtr& field = order->field();
    if (field->degree() != 4 || !field->totally_complex())
        throw invalid_argument_error("nu: totally complex quartic orders only");
    auto reps = all_fundamental_units(order, u);
    int n = 4;
    for (mpfr_prec_t prec = 320; prec <= 8192; prec *= 2) {
        RBall sum = RBall::exact(0L, prec);
        bool ok = true;
        for (auto& w : reps) {
            // degenerate (real-embedded) units contribute exactly 0
            ZVec coords;
            if (!order->from_power_basis(w, coords))
                throw internal_error("nu: representative not in order");
            IntPoly mp = order->min_poly_of(coords);
            if (mp.degree() <= 2) continue;
            std::vector<CBall> vals;
            for (int i = 0; i < n; ++i) vals.push_back(embed_power(field, w, i, prec));
            auto conj = conj_pairing(field->embeddings(prec));
            // normal form: small pair (|v| < 1), big pair
            int rep0 = -1, rep1 = -1;
            for (int i = 0; i < n; ++i)
                if (conj[i] > i) (rep0 < 0 ? rep0 : rep1) = i;
            RBall one = RBall::exact(1L, prec);
            RBall a0 = vals[rep0].abs();
            bool small0 = (a0 - one).is_negative();
            bool big0 = (one - a0).is_negative();
            if (!small0 && !big0) {
                ok = false;
                break;
            }
            int sm = small0 ? rep0 : rep1;
            int bg = small0 ? rep1 : rep0;
            int ti = vals[sm].im.is_positive() ? sm : conj[sm];
            int pi_ = vals[bg].im.is_positive() ? bg : conj[bg];
            if (!vals[ti].im.is_positive() || !vals[pi_].im.is_positive()) {
                ok = false;
                break;
            }
            RBall th = safe_arg(vals[ti]);
            RBall ph = safe_arg(vals[pi_]);
            RBall twoth = th + th, twoph = ph + ph;
            RBall t_closed = (one - twoth.cos()) * (one - twoph.cos()) * RBall::exact(4L, prec);
            // product route: prod over embeddings (1 - v^2/|v|^2)
            CBall prod(RBall::exact(1L, prec), RBall::exact(0L, prec));
            for (int i = 0; i < n; ++i) {
                CBall v2 = vals[i] * vals[i];
                RBall n2 = vals[i].abs_sq();
                CBall s(v2.re / n2, v2.im / n2);
                CBall term(one - s.re, -s.im);
                prod = prod * term;
            }
            if (!prod.im.contains_zero()) {
                ok = false;
                break;
            }
            RBall diff = (t_closed - prod.re).abs();
            if (!(diff.upper_double() <= 1e-9)) {
                ok = false;
                break;
            }
            sum = sum + t_closed;
        }
        if (!ok) continue;
        RBall nu = sum / RBall::exact(mpz_class(2 * u.mu), prec);
        double lo = nu.lower_double(), hi = nu.upper_double();
        if (lo < -1e-9 || hi > 16.0 + 1e-9)
            throw correspondence_violation_error("nu: value outside [0, 16]");
        return nu;
    }
    throw numeric_inconsistency_error("nu: dual routes disagree beyond 1e-9 at max precision");
}

bool weakly_neat(const OrderHandle& order, const UnitData& u) {
    const FieldPtr& field = order->field();
    QVec eps = order->to_power_basis(u.fund_unit);
    QVec zeta = order->to_power_basis(u.torsion_gen);
    QVec ek(field->degree(), mpq_class(0));
    ek[0] = 1;
    for (int k = 1; k <= 24; ++k) {
        ek = field_mul(field, ek, eps);
        QVec zj(field->degree(), mpq_class(0));
        zj[0] = 1;
        for (unsigned long j = 0; j < u.mu; ++j) {
            if (j > 0) zj = field_mul(field, zj, zeta);
            QVec w = (j == 0) ? ek : field_mul(field, zj, ek);
            ZVec coords;
            if (!order->from_power_basis(w, coords)) continue;
            IntPoly mp = order->min_poly_of(coords);
            if (mp.degree() <= 2 && poly_discriminant(mp) > 0) return false;
        }
    }
    return true;
}

}  // namespace qc
