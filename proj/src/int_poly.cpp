#include "qcensus/int_poly.hpp"

#include <algorithm>
#include <sstream>

namespace qc {

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::monomial(int k, const mpz_class& a) {
    std::vector<mpz_class> v(k + 1, mpz_class(0));
    v[k] = a;
    return IntPoly(v);
}

const mpz_class& IntPoly::coeff(int i) const {
    static const mpz_class zero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[i];
}

const mpz_class& IntPoly::lc() const {
    if (c_.empty()) throw internal_error("lc of zero polynomial");
    return c_.back();
}

IntPoly IntPoly::operator-() const {
    IntPoly r(*this);
    for (auto& a : r.c_) a = -a;
    return r;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    std::vector<mpz_class> v(std::max(c_.size(), o.c_.size()), mpz_class(0));
    for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return IntPoly(v);
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + (-o); }

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return IntPoly();
    std::vector<mpz_class> v(c_.size() + o.c_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return IntPoly(v);
}

IntPoly IntPoly::operator*(const mpz_class& k) const {
    IntPoly r(*this);
    for (auto& a : r.c_) a *= k;
    r.trim();
    return r;
}

IntPoly IntPoly::derivative() const {
    if (degree() < 1) return IntPoly();
    std::vector<mpz_class> v(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * mpz_class(static_cast<long>(i));
    return IntPoly(v);
}

IntPoly IntPoly::divexact(const IntPoly& d) const {
    IntPoly q, r;
    pseudo_divrem(d, q, r);
    if (!r.is_zero()) throw internal_error("divexact: nonzero remainder");
    // pseudo quotient satisfies lc(d)^k f = q d; rescale exactly
    int k = degree() - d.degree() + 1;
    mpz_class scale = 1;
    for (int i = 0; i < k; ++i) scale *= d.lc();
    std::vector<mpz_class> v = q.c_;
    for (auto& a : v) {
        mpz_class t;
        mpz_divexact(t.get_mpz_t(), a.get_mpz_t(), scale.get_mpz_t());
        a = t;
    }
    return IntPoly(v);
}

void IntPoly::pseudo_divrem(const IntPoly& d, IntPoly& q, IntPoly& r) const {
    if (d.is_zero()) throw invalid_argument_error("pseudo_divrem by zero");
    r = *this;
    q = IntPoly();
    int dd = d.degree();
    if (degree() < dd) {
        // scale so the identity lc(d)^(deg-dd+1) f = q d + r still holds with k=0 terms
        return;
    }
    int k = degree() - dd + 1;
    const mpz_class& dl = d.lc();
    std::vector<mpz_class> qc(k, mpz_class(0));
    for (int i = 0; i < k; ++i) {
        int dr = r.degree();
        if (dr < dd) {
            // multiply remaining steps into r and q
            for (auto& a : qc) a *= dl;
            for (auto& a : r.c_) a *= dl;
            continue;
        }
        mpz_class t = r.lc();
        // r <- lc(d) r - t x^(dr-dd) d ; q <- lc(d) q + t x^(dr-dd)
        for (auto& a : qc) a *= dl;
        qc[dr - dd] += t;
        std::vector<mpz_class> rc(r.c_.size(), mpz_class(0));
        for (size_t j = 0; j < r.c_.size(); ++j) rc[j] = r.c_[j] * dl;
        for (int j = 0; j <= dd; ++j) rc[dr - dd + j] -= t * d.c_[j];
        r = IntPoly(rc);
    }
    q = IntPoly(qc);
}

void IntPoly::divrem_monic(const IntPoly& d, IntPoly& q, IntPoly& r) const {
    if (!d.is_monic()) throw internal_error("divrem_monic: divisor not monic");
    r = *this;
    q = IntPoly();
    int dd = d.degree();
    if (degree() < dd) return;
    std::vector<mpz_class> qc(degree() - dd + 1, mpz_class(0));
    while (r.degree() >= dd) {
        int dr = r.degree();
        mpz_class t = r.lc();
        qc[dr - dd] += t;
        std::vector<mpz_class> rc = r.c_;
        for (int j = 0; j <= dd; ++j) rc[dr - dd + j] -= t * d.c_[j];
        r = IntPoly(rc);
    }
    q = IntPoly(qc);
}

mpz_class IntPoly::content() const {
    mpz_class g = 0;
    for (const auto& a : c_) {
        mpz_class t;
        mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        g = t;
        if (g == 1) break;
    }
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return IntPoly();
    mpz_class g = content();
    std::vector<mpz_class> v = c_;
    for (auto& a : v) {
        mpz_class t;
        mpz_divexact(t.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
        a = t;
    }
    return IntPoly(v);
}

IntPoly IntPoly::canonical() const {
    if (is_zero()) return IntPoly();
    IntPoly p = primitive_part();
    if (p.lc() < 0) p = -p;
    return p;
}

mpz_class IntPoly::eval(const mpz_class& x) const {
    mpz_class r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

mpq_class IntPoly::eval(const mpq_class& x) const {
    mpq_class r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + mpq_class(*it);
    return r;
}

IntPoly IntPoly::compose_mod(const IntPoly& f, const IntPoly& g, const IntPoly& m) {
    IntPoly acc, q, r;
    for (int i = f.degree(); i >= 0; --i) {
        acc = acc * g + IntPoly({f.coeff(i)});
        acc.divrem_monic(m, q, r);
        acc = r;
    }
    return acc;
}

IntPoly IntPoly::reverse() const {
    std::vector<mpz_class> v(c_.rbegin(), c_.rend());
    return IntPoly(v);
}

bool IntPoly::is_squarefree() const {
    if (degree() <= 1) return degree() >= 0;
    return gcd(*this, derivative()).degree() == 0;
}

std::string IntPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const mpz_class& a = coeff(i);
        if (a == 0) continue;
        mpz_class abs_a = abs(a);
        if (first) {
            if (a < 0) os << "-";
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (i == 0 || abs_a != 1) os << abs_a.get_str();
        if (i >= 1) {
            if (abs_a != 1) os << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string IntPoly::key() const {
    std::ostringstream os;
    for (int i = 0; i <= degree(); ++i) {
        if (i) os << ":";
        os << coeff(i).get_str();
    }
    return os.str();
}

IntPoly IntPoly::from_key(const std::string& key) {
    std::vector<mpz_class> v;
    std::string tok;
    std::istringstream is(key);
    while (std::getline(is, tok, ':')) {
        if (tok.empty()) throw parse_error("empty coefficient in polynomial key", 0);
        try {
            v.emplace_back(tok);
        } catch (const std::invalid_argument&) {
            throw parse_error("bad coefficient '" + tok + "' in polynomial key", 0);
        }
    }
    if (v.empty()) throw parse_error("empty polynomial key", 0);
    return IntPoly(v);
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero()) return b.canonical();
    if (b.is_zero()) return a.canonical();
    IntPoly f = a.primitive_part(), g = b.primitive_part();
    if (f.degree() < g.degree()) std::swap(f, g);
    while (!g.is_zero()) {
        IntPoly q, r;
        f.pseudo_divrem(g, q, r);
        f = g;
        g = r.is_zero() ? IntPoly() : r.primitive_part();
    }
    return f.canonical();
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
    // Degrees stay tiny here, so the fraction-free Sylvester determinant is
    // both exact and fast enough.
    return resultant_sylvester(f, g);
}

mpz_class resultant_sylvester(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    int m = f.degree(), n = g.degree();
    if (m == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), f.lc().get_mpz_t(), n);
        return r;
    }
    if (n == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), g.lc().get_mpz_t(), m);
        return r;
    }
    int N = m + n;
    std::vector<std::vector<mpz_class>> A(N, std::vector<mpz_class>(N, mpz_class(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) A[i][i + j] = f.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) A[n + i][i + j] = g.coeff(n - j);
    // Bareiss fraction-free elimination
    mpz_class prev = 1;
    mpz_class sign = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (A[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (A[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(A[k], A[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) {
                mpz_class t = A[i][j] * A[k][k] - A[i][k] * A[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                A[i][j] = t;
            }
            A[i][k] = 0;
        }
        prev = A[k][k];
    }
    return sign * A[N - 1][N - 1];
}

mpz_class poly_discriminant(const IntPoly& f) {
    if (f.degree() < 1) throw invalid_argument_error("discriminant needs deg >= 1");
    int n = f.degree();
    mpz_class r = resultant(f, f.derivative());
    mpz_class d;
    mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.lc().get_mpz_t());
    if (((static_cast<long>(n) * (n - 1)) / 2) % 2 == 1) d = -d;
    return d;
}

namespace {

std::vector<IntPoly> sturm_chain(const IntPoly& f) {
    std::vector<IntPoly> chain;
    chain.push_back(f.primitive_part());
    chain.push_back(f.derivative().primitive_part());
    while (!chain.back().is_zero()) {
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        IntPoly q, r;
        a.pseudo_divrem(b, q, r);
        if (r.is_zero()) break;
        // pseudo-division multiplies by lc(b)^k which may flip signs; fix parity
        int k = a.degree() - b.degree() + 1;
        if (b.lc() < 0 && (k & 1)) {
            // scale factor negative: r has the sign of lc(b)^k * a - qb; flip to match
            // the classical chain (sign of remainder matters, magnitude does not)
            r = -r;
        }
        chain.push_back((-r).primitive_part());
    }
    if (chain.back().is_zero()) chain.pop_back();
    return chain;
}

int sign_at_inf(const IntPoly& p, bool plus) {
    if (p.is_zero()) return 0;
    int s = sgn(p.lc());
    if (!plus && (p.degree() & 1)) s = -s;
    return s;
}

int variations(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

}  // namespace

int count_real_roots(const IntPoly& f) {
    if (f.degree() < 1) return 0;
    if (!f.is_squarefree()) throw invalid_argument_error("count_real_roots: input not squarefree");
    auto chain = sturm_chain(f);
    std::vector<int> lo, hi;
    for (const auto& p : chain) {
        lo.push_back(sign_at_inf(p, false));
        hi.push_back(sign_at_inf(p, true));
    }
    return variations(lo) - variations(hi);
}

int count_real_roots_between(const IntPoly& f, const mpq_class& a, const mpq_class& b) {
    if (f.degree() < 1) return 0;
    if (!f.is_squarefree()) throw invalid_argument_error("count_real_roots: input not squarefree");
    auto chain = sturm_chain(f);
    std::vector<int> lo, hi;
    for (const auto& p : chain) {
        lo.push_back(sgn(p.eval(a)));
        hi.push_back(sgn(p.eval(b)));
    }
    return variations(lo) - variations(hi);
}

}  // namespace qc
