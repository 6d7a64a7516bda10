#include "qcensus/order.hpp"

#include <algorithm>
#include <sstream>

#include "qcensus/num_util.hpp"
#include "qcensus/zmod_poly.hpp"

namespace qc {

namespace {

// product of two power-basis elements, reduced mod the field polynomial
QVec power_mul(const QVec& a, const QVec& b, const IntPoly& f) {
    int n = f.degree();
    std::vector<mpq_class> prod(2 * n - 1, mpq_class(0));
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    }
    // reduce x^k for k >= n using x^n = -(f_0 + f_1 x + ... + f_{n-1} x^{n-1})
    for (int k = 2 * n - 2; k >= n; --k) {
        if (prod[k] == 0) continue;
        mpq_class c = prod[k];
        prod[k] = 0;
        for (int j = 0; j < n; ++j) prod[k - n + j] -= c * mpq_class(f.coeff(j));
    }
    prod.resize(n);
    return prod;
}

}  // namespace

Order::Order(FieldPtr field, QMat basis, std::set<unsigned long> maximal_at)
    : field_(std::move(field)), basis_(std::move(basis)), maximal_at_(std::move(maximal_at)) {
    int n = field_->degree();
    if (static_cast<int>(basis_.size()) != n)
        throw internal_error("Order: basis has wrong number of rows");
    det_ = qmat_det(basis_);
    if (det_ == 0) throw internal_error("Order: basis not invertible");
    basis_inv_ = qmat_inverse(basis_);

    // 1 must lie in the lattice
    QVec one_pw(n, mpq_class(0));
    one_pw[0] = 1;
    ZVec tmp;
    if (!from_power_basis(one_pw, tmp)) throw internal_error("Order: 1 not in lattice");

    // multiplication table; closure under multiplication is what makes this
    // lattice an order, so a non-integral product is a hard failure
    const IntPoly& f = field_->min_poly();
    mul_.assign(n, std::vector<ZVec>(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            QVec prod = power_mul(basis_[i], basis_[j], f);
            ZVec coords;
            if (!from_power_basis(prod, coords))
                throw internal_error("Order: lattice not closed under multiplication");
            mul_[i][j] = coords;
            mul_[j][i] = coords;
        }

    // disc = disc(f) * det(basis)^2
    mpq_class d = mpq_class(poly_discriminant(f)) * det_ * det_;
    if (d.get_den() != 1) throw internal_error("Order: non-integral discriminant");
    disc_ = d.get_num();
}

ZVec Order::one() const {
    int n = degree();
    QVec one_pw(n, mpq_class(0));
    one_pw[0] = 1;
    ZVec out;
    from_power_basis(one_pw, out);
    return out;
}

ZVec Order::mul(const ZVec& a, const ZVec& b) const {
    int n = degree();
    ZVec out(n, mpz_class(0));
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            mpz_class c = a[i] * b[j];
            const ZVec& t = mul_[i][j];
            for (int k = 0; k < n; ++k) out[k] += c * t[k];
        }
    }
    return out;
}

ZVec Order::pow(ZVec a, unsigned long e) const {
    ZVec acc = one();
    while (e) {
        if (e & 1) acc = mul(acc, a);
        a = mul(a, a);
        e >>= 1;
    }
    return acc;
}

ZMat Order::mul_matrix(const ZVec& a) const {
    int n = degree();
    ZMat m(n, ZVec(n, mpz_class(0)));
    for (int j = 0; j < n; ++j) {
        // row j: coords of b_j * a
        for (int i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            const ZVec& t = mul_[j][i];
            for (int k = 0; k < n; ++k) m[j][k] += a[i] * t[k];
        }
    }
    return m;
}

mpz_class Order::norm(const ZVec& a) const { return zmat_det(mul_matrix(a)); }

mpz_class Order::trace(const ZVec& a) const {
    ZMat m = mul_matrix(a);
    mpz_class t = 0;
    for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

IntPoly Order::min_poly_of(const ZVec& a) const {
    int n = degree();
    // find the first power of a that is a rational combination of lower ones
    std::vector<QVec> pows;
    ZVec cur = one();
    for (int d = 0; d <= n; ++d) {
        QVec v(n);
        for (int i = 0; i < n; ++i) v[i] = mpq_class(cur[i]);
        // try to solve sum c_k pows[k] = v
        // gaussian elimination on the fly
        QMat m;
        for (auto& row : pows) m.push_back(row);
        // solve m^T c = v  (c row solves c * m = v)
        if (!pows.empty()) {
            // build augmented system and row-reduce
            int rows = static_cast<int>(pows.size());
            QMat aug(rows, QVec(n + rows, mpq_class(0)));
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < n; ++c) aug[r][c] = pows[r][c];
                aug[r][n + r] = 1;
            }
            // eliminate
            QVec target(v);
            std::vector<int> pivcol(rows, -1);
            int rr = 0;
            for (int c = 0; c < n && rr < rows; ++c) {
                int piv = -1;
                for (int r2 = rr; r2 < rows; ++r2)
                    if (aug[r2][c] != 0) {
                        piv = r2;
                        break;
                    }
                if (piv < 0) continue;
                std::swap(aug[piv], aug[rr]);
                mpq_class inv = 1 / aug[rr][c];
                for (int j = 0; j < n + rows; ++j) aug[rr][j] *= inv;
                for (int r2 = 0; r2 < rows; ++r2) {
                    if (r2 == rr || aug[r2][c] == 0) continue;
                    mpq_class fct = aug[r2][c];
                    for (int j = 0; j < n + rows; ++j) aug[r2][j] -= fct * aug[rr][j];
                }
                pivcol[rr] = c;
                ++rr;
            }
            // express target in terms of the reduced rows
            QVec coef(rows, mpq_class(0));
            QVec resid = target;
            for (int r2 = 0; r2 < rr; ++r2) {
                int c = pivcol[r2];
                if (resid[c] == 0) continue;
                mpq_class fct = resid[c];
                for (int j = 0; j < n; ++j) resid[j] -= fct * aug[r2][j];
                for (int j = 0; j < rows; ++j) coef[j] += fct * aug[r2][n + j];
            }
            bool in_span = true;
            for (int j = 0; j < n; ++j)
                if (resid[j] != 0) {
                    in_span = false;
                    break;
                }
            if (in_span) {
                // a^d = sum coef_k a^k  ->  min poly x^d - sum coef_k x^k
                std::vector<mpz_class> mp(d + 1);
                mp[d] = 1;
                for (int k = 0; k < d; ++k) {
                    if (coef[k].get_den() != 1)
                        throw internal_error("min_poly_of: non-integral coefficient");
                    mp[k] = -coef[k].get_num();
                }
                return IntPoly(mp);
            }
        }
        QVec stored(n);
        for (int i = 0; i < n; ++i) stored[i] = mpq_class(cur[i]);
        pows.push_back(stored);
        if (d < n) cur = mul(cur, a);
    }
    throw internal_error("min_poly_of: no dependency up to degree n");
}

QVec Order::to_power_basis(const ZVec& a) const {
    int n = degree();
    QVec v(n, mpq_class(0));
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) v[j] += mpq_class(a[i]) * basis_[i][j];
    }
    return v;
}

bool Order::from_power_basis(const QVec& v, ZVec& out) const {
    QVec c = qmat_vec_mul(v, basis_inv_);
    int n = degree();
    out.assign(n, mpz_class(0));
    for (int i = 0; i < n; ++i) {
        if (c[i].get_den() != 1) return false;
        out[i] = c[i].get_num();
    }
    return true;
}

bool Order::contains(const QVec& power_coords) const {
    ZVec tmp;
    return from_power_basis(power_coords, tmp);
}

CBall Order::embed(const ZVec& a, int k, mpfr_prec_t prec) const {
    auto roots = field_->embeddings(prec);
    QVec pw = to_power_basis(a);
    int n = degree();
    CBall acc(RBall::exact(0L, prec), RBall::exact(0L, prec));
    const CBall& r = roots[k];
    for (int i = n - 1; i >= 0; --i) {
        acc = acc * r;
        acc.re = acc.re + RBall::exact(pw[i], prec);
    }
    return acc;
}

std::vector<std::vector<double>> Order::t2_gram_upper(mpfr_prec_t prec) const {
    int n = degree();
    auto roots = field_->embeddings(prec);
    // sigma_k(b_i) balls
    std::vector<std::vector<CBall>> sb(n);
    for (int i = 0; i < n; ++i) {
        ZVec e(n, mpz_class(0));
        e[i] = 1;
        for (int k = 0; k < n; ++k) sb[i].push_back(embed(e, k, prec));
    }
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RBall s(prec);
            s = RBall::exact(0L, prec);
            for (int k = 0; k < n; ++k) {
                CBall t = sb[i][k] * sb[j][k].conj();
                s = s + t.re;
            }
            g[i][j] = s.upper_double();
        }
    return g;
}

std::string Order::describe() const {
    std::ostringstream os;
    os << "order in Q[x]/(" << field_->min_poly().to_string() << "), disc " << disc_.get_str();
    return os.str();
}

Order equation_order(const FieldPtr& field) {
    int n = field->degree();
    QMat b(n, QVec(n, mpq_class(0)));
    for (int i = 0; i < n; ++i) b[i][i] = 1;
    return Order(field, b);
}

bool dedekind_is_p_maximal(const IntPoly& f, unsigned long p) {
    auto fac = factor_mod_p(f, p);
    ZpPoly gstar(p, {1});
    ZpPoly hstar(p, {1});
    for (auto& [gi, ei] : fac) {
        ZpPoly gp = ZpPoly::from_int_poly(gi, p);
        gstar = gstar * gp;
        for (int e = 1; e < ei; ++e) hstar = hstar * gp;
    }
    // lift g*, h* monic to Z, T = (g h - f)/p
    IntPoly gl = gstar.lift();
    IntPoly hl = hstar.lift();
    IntPoly gh = gl * hl;
    IntPoly diff = gh - f;
    std::vector<mpz_class> tc(diff.degree() + 1);
    for (int i = 0; i <= diff.degree(); ++i) {
        mpz_class q, r;
        mpz_class pz(p);
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), diff.coeff(i).get_mpz_t(), pz.get_mpz_t());
        if (r != 0) throw internal_error("dedekind: (gh - f) not divisible by p");
        tc[i] = q;
    }
    ZpPoly T = ZpPoly::from_int_poly(IntPoly(tc), p);
    ZpPoly u = gcd(T, gcd(gstar, hstar));
    return u.degree() == 0;
}

namespace {

// one radical-idealizer enlargement; returns true if the order grew
bool round2_step(Order& o, unsigned long p) {
    int n = o.degree();
    // multiplication table mod p of O/pO
    // Frobenius matrix: rows = coords of b_i^(p^k) mod p with p^k >= n
    int k = 1;
    {
        unsigned long pk = p;
        while (pk < static_cast<unsigned long>(n)) {
            pk *= p;
            ++k;
        }
    }
    PMat frob{p, std::vector<std::vector<std::uint64_t>>(n)};
    mpz_class pz(p);
    for (int i = 0; i < n; ++i) {
        ZVec e(n, mpz_class(0));
        e[i] = 1;
        ZVec ep = o.pow(e, p);
        frob.m[i].resize(n);
        for (int j = 0; j < n; ++j) {
            mpz_class r = ep[j] % pz;
            if (r < 0) r += pz;
            frob.m[i][j] = r.get_ui();
        }
    }
    PMat frob_k = pmat_pow(frob, k);
    auto ker = pmat_left_kernel(frob_k);

    // radical lattice I_p: rows p*Id plus kernel lifts
    ZMat gens;
    for (int i = 0; i < n; ++i) {
        ZVec row(n, mpz_class(0));
        row[i] = pz;
        gens.push_back(row);
    }
    for (auto& v : ker) {
        ZVec row(n);
        for (int j = 0; j < n; ++j) row[j] = mpz_class(static_cast<unsigned long>(v[j]));
        gens.push_back(row);
    }
    ZMat U = hnf_full_rank(std::move(gens), n);

    // idealizer: z in O with z * u_i in p * I_p for all i  <=>
    // rows of W_i = T_i * U^{-1} taken mod p kill z
    QMat Uq(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Uq[i][j] = mpq_class(U[i][j]);
    QMat Uinv = qmat_inverse(Uq);

    // build the stacked condition matrix over F_p: columns blocks W_i
    PMat cond{p, std::vector<std::vector<std::uint64_t>>(n, std::vector<std::uint64_t>())};
    for (int i = 0; i < n; ++i) cond.m[i].reserve(n * n);
    for (int gi = 0; gi < n; ++gi) {
        // T: row j = coords of b_j * u_gi
        ZVec u(n);
        for (int j = 0; j < n; ++j) u[j] = U[gi][j];
        ZMat T = o.mul_matrix(u);
        // W = T * U^{-1} must be integral (b_j u in I_p); reduce mod p
        for (int rj = 0; rj < n; ++rj) {
            QVec row(n);
            for (int c = 0; c < n; ++c) row[c] = mpq_class(T[rj][c]);
            QVec w = qmat_vec_mul(row, Uinv);
            for (int c = 0; c < n; ++c) {
                if (w[c].get_den() != 1) throw internal_error("round2: W not integral");
                mpz_class r = w[c].get_num() % pz;
                if (r < 0) r += pz;
                cond.m[rj].push_back(r.get_ui());
            }
        }
    }
    auto zker = pmat_left_kernel(cond);
    if (zker.empty()) return false;

    // enlarged order basis (in O-coordinates): rows p*Id and kernel lifts, /p
    ZMat rows;
    for (int i = 0; i < n; ++i) {
        ZVec row(n, mpz_class(0));
        row[i] = pz;
        rows.push_back(row);
    }
    for (auto& v : zker) {
        ZVec row(n);
        for (int j = 0; j < n; ++j) row[j] = mpz_class(static_cast<unsigned long>(v[j]));
        rows.push_back(row);
    }
    ZMat H = hnf_full_rank(std::move(rows), n);
    // did we actually grow? H == p*Id means no
    bool grew = false;
    for (int i = 0; i < n && !grew; ++i)
        for (int j = 0; j < n && !grew; ++j) {
            mpz_class want = (i == j) ? pz : mpz_class(0);
            if (H[i][j] != want) grew = true;
        }
    if (!grew) return false;

    // new basis in power coordinates: (H/p) * B
    QMat nb(n, QVec(n, mpq_class(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mpq_class s(H[i][j], pz);
            s.canonicalize();
            for (int c = 0; c < n; ++c) nb[i][c] += s * o.basis()[j][c];
        }
    o = Order(o.field(), nb, o.maximal_at());
    return true;
}

}  // namespace

Order p_maximal_order(const Order& order, unsigned long p) {
    if (!is_prime_u64(p)) throw invalid_argument_error("p_maximal_order: p not prime");
    if (order.maximal_at().count(p)) return order;
    Order o = order;
    // cheap certificates first
    mpz_class pz(p);
    mpz_class d = o.disc();
    mpz_class p2 = pz * pz;
    bool p2_divides = (d % p2 == 0);
    bool is_equation_order = (o.basis_det() == 1 || o.basis_det() == -1);
    if (!p2_divides || (is_equation_order && dedekind_is_p_maximal(o.field()->min_poly(), p))) {
        auto s = o.maximal_at();
        s.insert(p);
        return Order(o.field(), o.basis(), s);
    }
    int guard = 0;
    while (round2_step(o, p)) {
        if (++guard > 64) throw internal_error("p_maximal_order: round-2 did not stabilise");
    }
    auto s = o.maximal_at();
    s.insert(p);
    return Order(o.field(), o.basis(), s);
}

Order order_maximal_at(const FieldPtr& field, const std::set<unsigned long>& S, bool global) {
    Order o = equation_order(field);
    std::set<unsigned long> ps = S;
    if (global) {
        for (auto& [q, e] : factor_mpz(o.disc())) {
            if (e >= 2) {
                if (!q.fits_ulong_p())
                    throw internal_error("order_maximal_at: index prime too large");
                ps.insert(q.get_ui());
            }
        }
    }
    for (unsigned long p : ps) o = p_maximal_order(o, p);
    if (global) field->set_field_disc(o.disc());
    return o;
}

}  // namespace qc
