#include "qcensus/relations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qcensus/num_util.hpp"
#include "qcensus/zmod_poly.hpp"

namespace qc {

QVec field_mul(const FieldPtr& field, const QVec& a, const QVec& b) {
    int n = field->degree();
    const IntPoly& f = field->min_poly();
    QVec prod(2 * n - 1, mpq_class(0));
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    }
    for (int k = 2 * n - 2; k >= n; --k) {
        if (prod[k] == 0) continue;
        mpq_class c = prod[k];
        prod[k] = 0;
        for (int j = 0; j < n; ++j) prod[k - n + j] -= c * mpq_class(f.coeff(j));
    }
    prod.resize(n);
    return prod;
}

QVec field_inverse(const FieldPtr& field, const QVec& alpha) {
    int n = field->degree();
    // solve x * M_alpha = e0 where M_alpha is multiplication in power basis
    QMat m(n, QVec(n, mpq_class(0)));
    for (int i = 0; i < n; ++i) {
        QVec e(n, mpq_class(0));
        e[i] = 1;
        QVec row = field_mul(field, e, alpha);
        m[i] = row;
    }
    QVec e0(n, mpq_class(0));
    e0[0] = 1;
    return qmat_solve_left(m, e0);
}

QVec field_pow(const FieldPtr& field, const QVec& a, long e) {
    int n = field->degree();
    QVec acc(n, mpq_class(0));
    acc[0] = 1;
    QVec base = a;
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = field_mul(field, acc, base);
        base = field_mul(field, base, base);
        k >>= 1;
    }
    if (inv) return field_inverse(field, acc);
    return acc;
}

std::vector<ZVec> enumerate_t2_ball(const std::vector<std::vector<double>>& gram, double bound,
                                    size_t max_points) {
    int n = static_cast<int>(gram.size());
    // Cholesky with a tiny inflation so rounding cannot lose lattice points
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> g = gram;
    double scale = 1.0 + 1e-9;
    for (int i = 0; i < n; ++i) g[i][i] *= scale;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = g[i][j];
            for (int k = 0; k < i; ++k) s -= q[k][i] * q[k][j] * q[k][k];
            if (i == j) {
                if (s <= 0) throw internal_error("enumerate_t2_ball: Gram not positive definite");
                q[i][i] = s;
            } else {
                q[i][j] = s / q[i][i];
            }
        }
    }
    // enumerate x_n, ..., x_1 with sum_i q_ii (x_i + sum_j>i q_ij x_j)^2 <= B
    std::vector<ZVec> out;
    std::vector<long> x(n, 0);
    double B = bound * (1.0 + 1e-9);
    // recursive walk
    std::vector<double> center(n, 0.0), partial(n + 1, 0.0);
    bool overflow = false;
    std::function<void(int)> walk = [&](int i) {
        if (overflow) return;
        if (i < 0) {
            bool all_zero = true;
            for (long v : x)
                if (v) all_zero = false;
            if (all_zero) return;
            // keep one of each +/- pair: first nonzero from the back positive
            for (int k = n - 1; k >= 0; --k) {
                if (x[k] > 0) break;
                if (x[k] < 0) return;
            }
            ZVec v(n);
            for (int k = 0; k < n; ++k) v[k] = x[k];
            out.push_back(v);
            if (out.size() > max_points) overflow = true;
            return;
        }
        double c = 0;
        for (int j = i + 1; j < n; ++j) c += q[i][j] * x[j];
        double room = B - partial[i + 1];
        if (room < 0) return;
        double halfw = std::sqrt(room / q[i][i]);
        long lo = static_cast<long>(std::ceil(-c - halfw - 1e-12));
        long hi = static_cast<long>(std::floor(-c + halfw + 1e-12));
        for (long v = lo; v <= hi; ++v) {
            x[i] = v;
            double term = (v + c) * (v + c) * q[i][i];
            partial[i] = partial[i + 1] + term;
            if (partial[i] <= B) walk(i - 1);
        }
        x[i] = 0;
    };
    walk(n - 1);
    // deterministic order: by rounded T2 then lexicographic
    std::sort(out.begin(), out.end(), [&](const ZVec& a, const ZVec& b) {
        auto t2 = [&](const ZVec& v) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += gram[i][j] * v[i].get_d() * v[j].get_d();
            return s;
        };
        double ta = t2(a), tb = t2(b);
        if (std::abs(ta - tb) > 1e-9 * (1 + ta + tb)) return ta < tb;
        return a < b;
    });
    return out;
}

RelationEngine::RelationEngine(OrderHandle order, unsigned long fb_norm_bound)
    : order_(std::move(order)) {
    // factor base: primes of norm <= bound over rational primes p <= bound
    OrderHandle h = order_;
    for (unsigned long p = 2; p <= fb_norm_bound; ++p) {
        if (!is_prime_u64(p)) continue;
        if (!h->maximal_at().count(p)) {
            Order cert = p_maximal_order(*h, p);
            if (cert.disc() != h->disc())
                throw internal_error("RelationEngine: order not maximal at " + std::to_string(p));
            h = make_order_handle(std::move(cert));
        }
    }
    order_ = h;
    for (unsigned long p = 2; p <= fb_norm_bound; ++p) {
        if (!is_prime_u64(p)) continue;
        for (auto& pf : prime_ideals_above(order_, p)) {
            mpz_class nrm = pf.ideal.norm;
            if (nrm <= mpz_class(static_cast<unsigned long>(fb_norm_bound))) {
                fb_.push_back(pf);
                fb_primes_.push_back(p);
                fb_powers_.push_back({ideal_whole(order_), pf.ideal});
            } else {
                // still needed to factor norms divisible by p
                fb_.push_back(pf);
                fb_primes_.push_back(p);
                fb_powers_.push_back({ideal_whole(order_), pf.ideal});
            }
        }
    }
    // trivial relations (p) = prod P_i^{e_i}
    for (unsigned long p = 2; p <= fb_norm_bound; ++p) {
        if (!is_prime_u64(p)) continue;
        Relation r;
        int n = order_->degree();
        QVec pe(n, mpq_class(0));
        pe[0] = p;
        r.element = pe;
        r.exponents.assign(fb_.size(), 0);
        for (size_t i = 0; i < fb_.size(); ++i)
            if (fb_primes_[i] == p) r.exponents[i] = fb_[i].e;
        rels_.push_back(std::move(r));
    }
}

int RelationEngine::valuation(const OrderIdeal& I, size_t fb_index, int cap) {
    auto& pows = fb_powers_[fb_index];
    int v = 0;
    while (v < cap) {
        if (static_cast<size_t>(v + 1) >= pows.size())
            pows.push_back(ideal_mul(pows.back(), fb_[fb_index].ideal));
        if (!ideal_subset(I, pows[v + 1])) return v;
        ++v;
    }
    return v;
}

std::optional<std::vector<int>> RelationEngine::factor_element(const ZVec& alpha) {
    mpz_class nrm = order_->norm(alpha);
    if (nrm == 0) return std::nullopt;
    if (nrm < 0) nrm = -nrm;
    // factor-base smooth?
    mpz_class rest = nrm;
    std::vector<unsigned long> present;
    for (size_t i = 0; i < fb_primes_.size(); ++i) {
        if (i > 0 && fb_primes_[i] == fb_primes_[i - 1]) continue;
        mpz_class pz(fb_primes_[i]);
        while (rest % pz == 0) {
            rest /= pz;
            if (present.empty() || present.back() != fb_primes_[i])
                present.push_back(fb_primes_[i]);
        }
    }
    if (rest != 1) return std::nullopt;
    OrderIdeal I = ideal_principal(order_, alpha);
    std::vector<int> exps(fb_.size(), 0);
    mpz_class check = 1;
    for (size_t i = 0; i < fb_.size(); ++i) {
        bool relevant = false;
        for (unsigned long p : present)
            if (fb_primes_[i] == p) relevant = true;
        if (!relevant) continue;
        int v = valuation(I, i);
        exps[i] = v;
        for (int k = 0; k < v; ++k) check *= fb_[i].ideal.norm;
    }
    if (check != nrm) throw internal_error("factor_element: valuation bookkeeping mismatch");
    return exps;
}

int RelationEngine::harvest(double t2_bound, size_t max_relations) {
    auto gram = order_->t2_gram_upper(192);
    auto vecs = enumerate_t2_ball(gram, t2_bound);
    int found = 0;
    for (auto& v : vecs) {
        if (rels_.size() >= max_relations) break;
        // skip rational multiples of 1
        bool rational = true;
        ZVec one = order_->one();
        // v is a multiple of one iff v = c * one for some integer c
        {
            mpz_class c = 0;
            for (int i = 0; i < order_->degree(); ++i) {
                if (one[i] != 0) {
                    c = v[i] / one[i];
                    break;
                }
            }
            for (int i = 0; i < order_->degree(); ++i)
                if (v[i] != c * one[i]) rational = false;
        }
        if (rational) continue;
        auto exps = factor_element(v);
        if (!exps) continue;
        // bucket by ideal for direct unit pairs
        OrderIdeal I = ideal_principal(order_, v);
        std::string key = ideal_key(I);
        auto it = ideal_bucket_.find(key);
        if (it != ideal_bucket_.end()) {
            // unit = v / previous
            QVec num = order_->to_power_basis(v);
            QVec den = order_->to_power_basis(it->second);
            QVec u = field_mul(order_->field(), num, field_inverse(order_->field(), den));
            bucket_units_.push_back(u);
        } else {
            ideal_bucket_.emplace(key, v);
        }
        Relation r;
        r.element = order_->to_power_basis(v);
        r.exponents = *exps;
        rels_.push_back(std::move(r));
        ++found;
    }
    harvested_up_to_ = t2_bound;
    return found;
}

std::vector<QVec> RelationEngine::kernel_units(size_t max_units) {
    // kernel of the exponent matrix over Z
    ZMat m;
    for (auto& r : rels_) {
        ZVec row(r.exponents.size());
        for (size_t i = 0; i < r.exponents.size(); ++i) row[i] = r.exponents[i];
        m.push_back(row);
    }
    ZMat ker = z_left_kernel(m);
    std::vector<QVec> units;
    for (auto& c : ker) {
        if (units.size() >= max_units) break;
        // skip huge exponent combinations
        mpz_class big = 0;
        for (auto& e : c) big += abs(e);
        if (big > 400) continue;
        QVec u(order_->degree(), mpq_class(0));
        u[0] = 1;
        for (size_t r = 0; r < c.size(); ++r) {
            if (c[r] == 0) continue;
            long e = static_cast<long>(c[r].get_si());
            u = field_mul(order_->field(), u, field_pow(order_->field(), rels_[r].element, e));
        }
        units.push_back(u);
    }
    return units;
}

}  // namespace qc
