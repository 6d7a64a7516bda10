#include "qcensus/class_group.hpp"

#include <algorithm>
#include <cmath>

#include "qcensus/num_util.hpp"
#include "qcensus/relations.hpp"
#include "qcensus/zmod_poly.hpp"

namespace qc {

double minkowski_bound(const FieldPtr& field, const mpz_class& order_disc) {
    if (order_disc == 0) throw invalid_argument_error("minkowski_bound: disc must be nonzero");
    int n = field->degree();
    int s = field->complex_pairs();
    double nf = 1;
    for (int i = 2; i <= n; ++i) nf *= i;
    double nn = std::pow(static_cast<double>(n), n);
    double c = std::pow(4.0 / 3.14159265358979323846, s) * nf / nn;
    return c * std::sqrt(std::abs(order_disc.get_d()));
}

std::optional<ZVec> is_principal(const OrderHandle& order, const OrderIdeal& I,
                                 const UnitData* unit_data, const ClassGroupBudget& budget) {
    int n = order->degree();
    if (I.norm == 1) {
        ZVec one = order->one();
        return one;
    }
    double rho = 0;
    if (unit_data) rho = unit_data->rho.upper_double();
    else if (!(order->degree() == 2 && order->disc() < 0))
        throw invalid_argument_error("is_principal: unit data required for rank-1 orders");
    double nrm = I.norm.get_d();
    double bound;
    if (n == 4) {
        bound = 2.0 * std::sqrt(nrm) * (std::exp(rho) + std::exp(-rho));
    } else if (order->disc() > 0) {
        // values sqrt(N) e^{+-s} with s unit-reduced into [-rho/2, rho/2]
        bound = nrm * (std::exp(rho) + std::exp(-rho));
    } else {
        bound = 2.0 * nrm;  // imaginary quadratic: T2 = 2 |x|^2 = 2 N(x)
    }
    bound *= budget.principal_t2_slack;
    // Gram of the ideal basis
    auto g_order = order->t2_gram_upper(192);
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s += I.hnf[i][a].get_d() * g_order[a][b] * I.hnf[j][b].get_d();
            g[i][j] = s;
        }
    auto vecs = enumerate_t2_ball(g, bound);
    for (auto& v : vecs) {
        // candidate element in order coordinates
        ZVec x(n, mpz_class(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x[j] += v[i] * I.hnf[i][j];
        mpz_class nx = order->norm(x);
        if (nx < 0) nx = -nx;
        if (nx == I.norm) return x;  // x in I with matching norm: (x) = I
    }
    return std::nullopt;
}

namespace {

struct QuotientGroup {
    std::vector<mpz_class> divisors;   // cyclic factors of Z^k / Lambda
    ZMat basis;                        // rows: lattice basis (HNF)
    mpz_class size = 1;
};

QuotientGroup quotient_of(const ZMat& relations, int k) {
    QuotientGroup q;
    ZMat h = hnf_rows(relations);
    if (static_cast<int>(h.size()) < k) {
        q.size = 0;  // not finite yet
        return q;
    }
    q.basis = h;
    mpz_class det = 1;
    // HNF is upper echelon with k rows: det = product of pivots
    for (int i = 0; i < k; ++i) {
        int pc = -1;
        for (int j = 0; j < k; ++j)
            if (h[i][j] != 0) {
                pc = j;
                break;
            }
        det *= h[i][pc];
    }
    q.size = det;
    ZMat copy = h;
    for (auto& d : smith_diagonal(std::move(copy)))
        if (d != 1) q.divisors.push_back(d);
    return q;
}

// enumerate representatives of Z^k modulo the (full-rank, HNF) lattice
std::vector<std::vector<long>> all_residues(const ZMat& hnf, int k, unsigned long cap) {
    // HNF upper echelon: residues parametrised by ranges [0, pivot_i)
    std::vector<long> pivots(k, 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (hnf[i][j] != 0) {
                pivots[j] = static_cast<long>(hnf[i][j].get_si());
                break;
            }
    }
    unsigned long total = 1;
    for (int j = 0; j < k; ++j) total *= static_cast<unsigned long>(pivots[j]);
    if (total > cap) return {};
    std::vector<std::vector<long>> out;
    std::vector<long> cur(k, 0);
    while (true) {
        out.push_back(cur);
        int i = 0;
        while (i < k) {
            if (++cur[i] < pivots[i]) break;
            cur[i] = 0;
            ++i;
        }
        if (i == k) break;
    }
    return out;
}

// reduce an exponent vector modulo the relation lattice to keep the
// representative ideal's norm small (greedy)
std::vector<long> reduce_vector(std::vector<long> v, const ZMat& basis,
                                const std::vector<double>& lognorm) {
    bool improved = true;
    auto cost = [&](const std::vector<long>& x) {
        double c = 0;
        for (size_t i = 0; i < x.size(); ++i) c += std::abs(static_cast<double>(x[i])) * lognorm[i];
        return c;
    };
    int guard = 0;
    while (improved && ++guard < 200) {
        improved = false;
        for (auto& row : basis) {
            for (int sgn : {1, -1}) {
                std::vector<long> cand = v;
                for (size_t i = 0; i < v.size(); ++i)
                    cand[i] += sgn * static_cast<long>(row[i].get_si());
                if (cost(cand) < cost(v) - 1e-12) {
                    v = cand;
                    improved = true;
                }
            }
        }
    }
    return v;
}

ClassGroupResult class_number_maximal(const OrderHandle& omax, const UnitData& u,
                                      const ClassGroupBudget& budget) {
    double mb = minkowski_bound(omax->field(), omax->disc());
    if (mb > budget.ceiling)
        throw invalid_argument_error("class_number: Minkowski bound exceeds the ceiling");
    unsigned long fbmax = static_cast<unsigned long>(std::floor(mb));
    ClassGroupResult out;
    if (fbmax < 2) {
        out.h = 1;
        return out;
    }
    RelationEngine engine(omax, fbmax);
    int k = static_cast<int>(engine.factor_base().size());
    if (k == 0) {
        out.h = 1;
        return out;
    }
    std::vector<double> lognorm;
    for (auto& pf : engine.factor_base()) lognorm.push_back(std::log(pf.ideal.norm.get_d()));

    // shift a vector to nonnegative entries modulo the (echelon) lattice
    auto make_nonneg = [&](std::vector<long> nn, const ZMat& basis) {
        for (int guard = 0; guard < 400; ++guard) {
            bool neg = false;
            for (long v : nn)
                if (v < 0) neg = true;
            if (!neg) return nn;
            for (auto& row : basis) {
                int pc = -1;
                for (int j = 0; j < k; ++j)
                    if (row[j] != 0) {
                        pc = j;
                        break;
                    }
                if (pc >= 0 && nn[pc] < 0 && row[pc] > 0) {
                    long piv = static_cast<long>(row[pc].get_si());
                    long mult = (-nn[pc] + piv - 1) / piv;
                    for (int j = 0; j < k; ++j) nn[j] += mult * static_cast<long>(row[j].get_si());
                }
            }
        }
        throw internal_error("class_number: representative shift failed");
    };

    std::vector<ZVec> extra_rows;  // principality witnesses found along the way
    double c = std::max(32.0, 6.0 * std::sqrt(std::sqrt(std::abs(omax->disc().get_d()))) + 8.0);
    for (int round = 0; round < 40; ++round) {
        ZMat rel;
        for (auto& r : engine.relations()) {
            ZVec row(k);
            for (int i = 0; i < k; ++i) row[i] = r.exponents[i];
            rel.push_back(row);
        }
        for (auto& row : extra_rows) rel.push_back(row);
        QuotientGroup q = quotient_of(rel, k);
        bool need_more = !(q.size > 0) || !q.size.fits_ulong_p() ||
                         q.size.get_ui() > budget.max_quotient;
        if (!need_more) {
            // certify every nontrivial class non-principal, or collapse
            bool collapsed = true;
            while (collapsed) {
                collapsed = false;
                auto residues = all_residues(q.basis, k, budget.max_quotient);
                for (auto& r : residues) {
                    bool zero = true;
                    for (long v : r)
                        if (v) zero = false;
                    if (zero) continue;
                    auto nn = make_nonneg(reduce_vector(r, q.basis, lognorm), q.basis);
                    OrderIdeal I = ideal_whole(omax);
                    for (int i = 0; i < k; ++i)
                        if (nn[i] > 0)
                            I = ideal_mul(I, ideal_pow(engine.factor_base()[i].ideal,
                                                       static_cast<int>(nn[i])));
                    auto gen = is_principal(omax, I, &u, budget);
                    if (gen) {
                        ZVec row(k);
                        for (int i = 0; i < k; ++i) row[i] = nn[i];
                        extra_rows.push_back(row);
                        rel.push_back(row);
                        q = quotient_of(rel, k);
                        collapsed = true;
                        break;
                    }
                }
            }
            out.h = q.size.get_ui();
            for (auto& d : q.divisors) out.elementary_divisors.push_back(d.get_ui());
            unsigned long prod = 1;
            for (auto d : out.elementary_divisors) prod *= d;
            if (std::max(prod, 1ul) != out.h)
                throw internal_error("class_number: divisor product mismatch");
            return out;
        }
        engine.harvest(c, budget.max_relations);
        c *= 2.5;
    }
    throw inconclusive_error("class_number: relation search budget exhausted", 1);
}

// unit group index [O_max^x : O^x] via torsion counts and the descent power
unsigned long unit_index(const UnitData& u_max, const UnitData& u_sub) {
    return (u_max.mu / u_sub.mu) * u_sub.index_in_maximal;
}

// conductor of O inside O_max as a sublattice of O_max (rows, O_max coords)
ZMat conductor_lattice(const Order& omax, const Order& o) {
    int n = omax.degree();
    // x in O_max with x * b_j(O_max) in O for all j
    // condition: coords_O(x * b_j) integral; set up over Q and solve lattice
    // via scaling: let M_j = multiplication-by-b_j matrix on O_max coords,
    // T = O_max->O change of basis (rational).  x row vector: x M_j T must be
    // integral for all j.
    QMat to_o = qmat_mul(omax.basis(), o.basis_inv());  // O_max coords -> O coords
    std::vector<QMat> conds;
    for (int j = 0; j < n; ++j) {
        ZVec e(n, mpz_class(0));
        e[j] = 1;
        ZMat mj = omax.mul_matrix(e);  // row i: coords of b_i * b_j in O_max
        QMat mq(n, QVec(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) mq[a][b] = mpq_class(mj[a][b]);
        conds.push_back(qmat_mul(mq, to_o));
    }
    // common denominator
    mpz_class den = 1;
    for (auto& m : conds)
        for (auto& row : m)
            for (auto& v : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                                        v.get_den().get_mpz_t());
    // lattice { x in Z^n : x C_j = 0 mod den for all j }
    // solve via HNF of the stacked system [ den I ; C ] trick:
    // x row: x * Cint = den * y for integer y; equivalently (x, y) in kernel
    int m = n * static_cast<int>(conds.size());
    ZMat cint(n, ZVec(m));
    for (size_t jc = 0; jc < conds.size(); ++jc)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                mpq_class scaled = conds[jc][a][b] * mpq_class(den);
                cint[a][jc * n + b] = scaled.get_num();
            }
    // lattice of x with x cint = 0 mod den: rows of den*I are in it; compute
    // via kernel of [cint | -den I_m] style: x cint + t (den I) = 0
    ZMat big;
    for (int i = 0; i < n; ++i) {
        ZVec row(m + n, mpz_class(0));
        for (int j = 0; j < m; ++j) row[j] = cint[i][j];
        row[m + i] = 1;  // track x
        big.push_back(row);
    }
    for (int i = 0; i < m; ++i) {
        ZVec row(m + n, mpz_class(0));
        row[i] = den;
        big.push_back(row);
    }
    ZMat h = hnf_rows(std::move(big));
    ZMat lattice;
    for (auto& row : h) {
        bool zerofront = true;
        for (int j = 0; j < m; ++j)
            if (row[j] != 0) zerofront = false;
        if (zerofront) {
            ZVec x(row.begin() + m, row.end());
            bool nonzero = false;
            for (auto& v : x)
                if (v != 0) nonzero = true;
            if (nonzero) lattice.push_back(x);
        }
    }
    return hnf_full_rank(std::move(lattice), n);
}

}  // namespace

ClassGroupResult class_number(const OrderHandle& order, const ClassGroupBudget& budget) {
    const FieldPtr& field = order->field();
    int n = field->degree();
    bool imaginary = (n == 2 && order->disc() < 0);
    OrderHandle omax = make_order_handle(order_maximal_at(field, {}, true));
    UnitData u_max;
    if (imaginary) {
        u_max.order = omax;
        auto [mu, gen] = torsion_units(omax);
        u_max.mu = mu;
        u_max.torsion_gen = gen;
        u_max.rho = RBall::exact(0L, 64);
    } else {
        u_max = fundamental_unit(omax);
    }
    ClassGroupResult hmax = class_number_maximal(omax, u_max, budget);
    if (order->disc() == omax->disc()) return hmax;

    // conductor exact sequence for the non-maximal order
    UnitData u_sub;
    if (imaginary) {
        u_sub.order = order;
        auto [mu, gen] = torsion_units(order);
        u_sub.mu = mu;
        u_sub.torsion_gen = gen;
        u_sub.index_in_maximal = 1;
    } else {
        u_sub = fundamental_unit(order);
    }
    ZMat cond = conductor_lattice(*omax, *order);
    mpz_class nf = zmat_det(cond);
    if (nf < 0) nf = -nf;
    if (!nf.fits_ulong_p() || nf.get_ui() > 2000000ul)
        throw inconclusive_error("class_number: conductor too large to enumerate", hmax.h);
    // |(O_max/f)^x|: multiplicative over the prime factorisation of f
    // computed by brute enumeration of the finite ring O_max/f
    auto count_units_mod = [n](const Order& o, const ZMat& lat) -> unsigned long {
        // residues: HNF diagonal ranges
        std::vector<long> piv(n, 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (lat[i][j] != 0) {
                    piv[j] = static_cast<long>(lat[i][j].get_si());
                    break;
                }
        unsigned long count = 0;
        std::vector<long> cur(n, 0);
        while (true) {
            // x invertible mod lat  <=>  x O + lat = O  <=>  HNF of rows
            // {mul_matrix(x) rows, lat rows} is the identity lattice
            ZVec x(n);
            for (int i = 0; i < n; ++i) x[i] = cur[i];
            ZMat rows = o.mul_matrix(x);
            for (auto& r : lat) rows.push_back(r);
            ZMat h = hnf_rows(std::move(rows));
            mpz_class det = 1;
            if (static_cast<int>(h.size()) == n) {
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j)
                        if (h[i][j] != 0) {
                            det *= h[i][j];
                            break;
                        }
                }
                if (det == 1) ++count;
            }
            int i = 0;
            while (i < n) {
                if (++cur[i] < piv[i]) break;
                cur[i] = 0;
                ++i;
            }
            if (i == n) break;
        }
        return count;
    };
    unsigned long units_max = count_units_mod(*omax, cond);
    // conductor as a sublattice of O: convert basis
    ZMat cond_in_o;
    for (auto& row : cond) {
        // row is O_max coords; express in O coords
        QVec pw(n, mpq_class(0));
        ZVec r(n);
        for (int i = 0; i < n; ++i) r[i] = row[i];
        pw = qmat_vec_mul(
            [&] {
                QVec q(n);
                for (int i = 0; i < n; ++i) q[i] = mpq_class(row[i]);
                return q;
            }(),
            omax->basis());
        ZVec oc;
        if (!order->from_power_basis(pw, oc))
            throw internal_error("class_number: conductor not inside the suborder");
        cond_in_o.push_back(oc);
    }
    cond_in_o = hnf_full_rank(std::move(cond_in_o), n);
    unsigned long units_sub = count_units_mod(*order, cond_in_o);
    unsigned long uidx = unit_index(u_max, u_sub);
    unsigned long num = hmax.h * units_max;
    unsigned long den = units_sub * uidx;
    if (den == 0 || num % den != 0)
        throw internal_error("class_number: conductor formula not integral");
    ClassGroupResult out;
    out.h = num / den;
    if (out.h == 1) return out;
    // divisors via conductor-coprime relations (grow until the order matches)
    {
        mpz_class idx2;
        mpz_divexact(idx2.get_mpz_t(), order->disc().get_mpz_t(), omax->disc().get_mpz_t());
        mpz_class idx;
        mpz_sqrt(idx.get_mpz_t(), idx2.get_mpz_t());
        double mb = minkowski_bound(field, order->disc());
        unsigned long fbmax = static_cast<unsigned long>(std::floor(std::max(mb, 16.0)));
        for (int grow = 0; grow < 4; ++grow) {
            // factor base: primes of O above p not dividing the index
            std::vector<OrderIdeal> fb;
            std::vector<double> lognorm;
            OrderHandle oh = order;
            for (unsigned long p = 2; p <= fbmax; ++p) {
                if (!is_prime_u64(p)) continue;
                if (idx % mpz_class(p) == 0) continue;
                if (!oh->maximal_at().count(p)) {
                    Order cert = p_maximal_order(*oh, p);
                    if (cert.disc() != oh->disc()) continue;  // not maximal at p: skip
                    oh = make_order_handle(std::move(cert));
                }
                for (auto& pf : prime_ideals_above(oh, p)) {
                    fb.push_back(pf.ideal);
                    lognorm.push_back(std::log(pf.ideal.norm.get_d()));
                }
            }
            // relations among fb from smooth elements of O
            int k = static_cast<int>(fb.size());
            if (k == 0) {
                fbmax *= 2;
                continue;
            }
            ZMat rel;
            // trivial relations (p)
            // plus element relations harvested from a T2 ball
            auto gram = oh->t2_gram_upper(192);
            double dd2 = std::abs(order->disc().get_d());
            double cc = std::max(48.0, 8.0 * std::sqrt(std::sqrt(dd2)) + 16.0);
            for (int round = 0; round < 12; ++round) {
                auto vecs = enumerate_t2_ball(gram, cc);
                for (auto& v : vecs) {
                    mpz_class nrm = oh->norm(v);
                    if (nrm == 0) continue;
                    if (nrm < 0) nrm = -nrm;
                    mpz_class rest = nrm;
                    for (auto& P : fb) {
                        // divide by N(P)-powers via valuations later;
                        // quick smoothness: strip rational primes of fb
                        (void)P;
                    }
                    // smoothness over the underlying rational primes of fb
                    std::vector<unsigned long> ps;
                    for (auto& P : fb) {
                        mpz_class np = P.norm;
                        // underlying prime
                        for (auto& [q, e] : factor_mpz(np)) {
                            ps.push_back(q.get_ui());
                            break;
                        }
                    }
                    std::sort(ps.begin(), ps.end());
                    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
                    for (unsigned long q : ps) {
                        mpz_class qz(q);
                        while (rest % qz == 0) rest /= qz;
                    }
                    if (rest != 1) continue;
                    OrderIdeal I = ideal_principal(oh, v);
                    ZVec row(k, mpz_class(0));
                    mpz_class checknorm = 1;
                    for (int i = 0; i < k; ++i) {
                        int val = ideal_valuation(I, fb[i], 64);
                        row[i] = val;
                        for (int t = 0; t < val; ++t) checknorm *= fb[i].norm;
                    }
                    if (checknorm != nrm) continue;  // norm divisible by an
                                                     // index prime: not coprime
                    rel.push_back(row);
                }
                QuotientGroup q = quotient_of(rel, k);
                if (q.size > 0 && q.size.fits_ulong_p() && q.size.get_ui() == out.h) {
                    for (auto& d : q.divisors) out.elementary_divisors.push_back(d.get_ui());
                    return out;
                }
                cc *= 2.2;
            }
            fbmax *= 2;
        }
    }
    throw inconclusive_error("class_number: could not certify divisor structure", out.h);
}

}  // namespace qc
