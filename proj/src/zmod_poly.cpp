#include "qcensus/zmod_poly.hpp"

#include <algorithm>

namespace qc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

u64 powmod_u64(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod_u64(a % p, p - 2, p); }

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    // deterministic Miller-Rabin bases for 64-bit integers
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

void ZpPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

ZpPoly ZpPoly::from_int_poly(const IntPoly& f, u64 p) {
    std::vector<u64> v;
    v.reserve(f.degree() + 1);
    mpz_class pz(static_cast<unsigned long>(p));
    for (int i = 0; i <= f.degree(); ++i) {
        mpz_class r = f.coeff(i) % pz;
        if (r < 0) r += pz;
        v.push_back(r.get_ui());
    }
    return ZpPoly(p, v);
}

ZpPoly ZpPoly::operator+(const ZpPoly& o) const {
    std::vector<u64> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] = (v[i] + o.c_[i]) % p_;
    return ZpPoly(p_, v);
}

ZpPoly ZpPoly::operator-(const ZpPoly& o) const {
    std::vector<u64> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] = (v[i] + p_ - o.c_[i]) % p_;
    return ZpPoly(p_, v);
}

ZpPoly ZpPoly::operator*(const ZpPoly& o) const {
    if (is_zero() || o.is_zero()) return ZpPoly(p_);
    std::vector<u64> v(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i]) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            v[i + j] = (v[i + j] + (u128)c_[i] * o.c_[j]) % p_;
    }
    return ZpPoly(p_, v);
}

ZpPoly ZpPoly::monic() const {
    if (is_zero()) return *this;
    u64 inv = invmod(c_.back(), p_);
    std::vector<u64> v = c_;
    for (auto& a : v) a = mulmod(a, inv, p_);
    return ZpPoly(p_, v);
}

void ZpPoly::divrem(const ZpPoly& d, ZpPoly& q, ZpPoly& r) const {
    if (d.is_zero()) throw invalid_argument_error("ZpPoly divrem by zero");
    std::vector<u64> rc = c_;
    int dd = d.degree();
    u64 inv = invmod(d.c_.back(), p_);
    std::vector<u64> qc(degree() >= dd ? degree() - dd + 1 : 0, 0);
    for (int i = static_cast<int>(rc.size()) - 1; i >= dd; --i) {
        if (!rc[i]) continue;
        u64 t = mulmod(rc[i], inv, p_);
        qc[i - dd] = t;
        for (int j = 0; j <= dd; ++j)
            rc[i - dd + j] = (rc[i - dd + j] + p_ - mulmod(t, d.c_[j], p_)) % p_;
    }
    q = ZpPoly(p_, qc);
    r = ZpPoly(p_, rc);
}

ZpPoly ZpPoly::mod(const ZpPoly& d) const {
    ZpPoly q, r;
    divrem(d, q, r);
    return r;
}

u64 ZpPoly::eval(u64 x) const {
    u64 r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = (mulmod(r, x, p_) + *it) % p_;
    return r;
}

ZpPoly ZpPoly::derivative() const {
    if (degree() < 1) return ZpPoly(p_);
    std::vector<u64> v(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = mulmod(c_[i], i % p_, p_);
    return ZpPoly(p_, v);
}

ZpPoly ZpPoly::powmod(const mpz_class& e, const ZpPoly& m) const {
    ZpPoly base = mod(m);
    ZpPoly r(p_, {1});
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = (r * base).mod(m);
        base = (base * base).mod(m);
        k >>= 1;
    }
    return r;
}

IntPoly ZpPoly::lift() const {
    std::vector<mpz_class> v;
    v.reserve(c_.size());
    for (u64 a : c_) v.emplace_back(static_cast<unsigned long>(a));
    return IntPoly(v);
}

ZpPoly gcd(const ZpPoly& a, const ZpPoly& b) {
    ZpPoly f = a, g = b;
    while (!g.is_zero()) {
        ZpPoly r = f.mod(g);
        f = g;
        g = r;
    }
    return f.monic();
}

ZpPoly xgcd(const ZpPoly& a, const ZpPoly& b, ZpPoly& u, ZpPoly& v) {
    u64 p = a.modulus();
    ZpPoly r0 = a, r1 = b;
    ZpPoly u0(p, {1}), u1(p);
    ZpPoly v0(p), v1(p, {1});
    while (!r1.is_zero()) {
        ZpPoly q, r;
        r0.divrem(r1, q, r);
        ZpPoly u2 = u0 - q * u1;
        ZpPoly v2 = v0 - q * v1;
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    // normalise to monic gcd
    if (!r0.is_zero()) {
        u64 lead = r0.coeffs().back();
        // multiply u0, v0, r0 by lead^{-1}
        ZpPoly inv(p, {1});
        // compute inverse of lead
        u64 li = 1;
        {
            u64 e = p - 2, base = lead, acc = 1;
            while (e) {
                if (e & 1) acc = static_cast<u64>((unsigned __int128)acc * base % p);
                base = static_cast<u64>((unsigned __int128)base * base % p);
                e >>= 1;
            }
            li = acc;
        }
        ZpPoly scale(p, {li});
        r0 = r0 * scale;
        u0 = u0 * scale;
        v0 = v0 * scale;
    }
    u = u0;
    v = v0;
    return r0;
}

namespace {

// h(x) -> h(x^(1/p)); valid when h = sum a_i x^(p i)
ZpPoly pth_root_decimate(const ZpPoly& h) {
    u64 p = h.modulus();
    std::vector<u64> v;
    for (int i = 0; i <= h.degree(); i += static_cast<int>(p)) v.push_back(h.coeff(i));
    return ZpPoly(p, v);
}

// squarefree decomposition: list of (g, multiplicity) with f = prod g^m, g squarefree
void squarefree_decompose(const ZpPoly& f, int outer_mult,
                          std::vector<std::pair<ZpPoly, int>>& out) {
    u64 p = f.modulus();
    ZpPoly d = f.derivative();
    if (d.is_zero()) {
        // f = g(x^p) = g(x)^p over F_p
        squarefree_decompose(pth_root_decimate(f), outer_mult * static_cast<int>(p), out);
        return;
    }
    ZpPoly a = gcd(f, d);
    ZpPoly w = f.monic();
    {
        ZpPoly q, r;
        w.divrem(a, q, r);
        w = q;
    }
    // w = product of squarefree part factors with multiplicity not divisible by p
    int i = 1;
    while (w.degree() > 0) {
        ZpPoly y = gcd(w, a);
        ZpPoly fac, r;
        w.divrem(y, fac, r);
        if (fac.degree() > 0) out.emplace_back(fac.monic(), i * outer_mult);
        ZpPoly q2;
        a.divrem(y, q2, r);
        a = q2;
        w = y;
        ++i;
    }
    if (a.degree() > 0) {
        // remaining part has all multiplicities divisible by p
        squarefree_decompose(pth_root_decimate(a), outer_mult * static_cast<int>(p), out);
    }
}

// deterministic sequence of test polynomials for equal-degree splitting
ZpPoly edf_test_element(u64 p, int k, int deg_mod) {
    // cycles through x+c, x^2+c, x^3+c, ...
    int power = 1 + k / static_cast<int>(std::min<u64>(p, 64));
    u64 shift = static_cast<u64>(k) % std::min<u64>(p, 64);
    power = 1 + (power - 1) % std::max(1, deg_mod - 1);
    std::vector<u64> v(power + 1, 0);
    v[0] = shift;
    v[power] = 1;
    return ZpPoly(p, v);
}

// split the product of distinct irreducible factors of degree d
void equal_degree_split(const ZpPoly& h, int d, std::vector<ZpPoly>& out) {
    u64 p = h.modulus();
    if (h.degree() == d) {
        out.push_back(h.monic());
        return;
    }
    if (d == 1 && p <= 4096) {
        // small p: read the roots off directly
        ZpPoly rest = h.monic();
        for (u64 c = 0; c < p && rest.degree() > 0; ++c) {
            if (rest.eval(c) == 0) {
                ZpPoly lin(p, {p - c, 1});
                ZpPoly q, r;
                rest.divrem(lin, q, r);
                rest = q;
                out.push_back(lin);
            }
        }
        return;
    }
    mpz_class pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(p), d);
    for (int k = 0;; ++k) {
        if (k > 4096) throw internal_error("equal_degree_split: no separating element found");
        ZpPoly s = edf_test_element(p, k, h.degree());
        ZpPoly g;
        if (p == 2) {
            // trace map over F_{2^d}
            ZpPoly t = s.mod(h), acc = t;
            for (int i = 1; i < d; ++i) {
                t = (t * t).mod(h);
                acc = acc + t;
            }
            g = gcd(acc, h);
        } else {
            mpz_class e = (pd - 1) / 2;
            ZpPoly t = s.powmod(e, h);
            g = gcd(t - ZpPoly(p, {1}), h);
        }
        if (g.degree() > 0 && g.degree() < h.degree()) {
            ZpPoly q, r;
            h.divrem(g, q, r);
            equal_degree_split(g, d, out);
            equal_degree_split(q, d, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<IntPoly, int>> factor_mod_p(const IntPoly& f, u64 p) {
    if (!is_prime_u64(p)) throw invalid_argument_error("factor_mod_p: p is not prime");
    ZpPoly fp = ZpPoly::from_int_poly(f, p);
    if (fp.is_zero()) throw invalid_argument_error("factor_mod_p: f vanishes mod p");

    std::vector<std::pair<ZpPoly, int>> sqf;
    if (fp.degree() > 0) squarefree_decompose(fp, 1, sqf);

    std::vector<std::pair<IntPoly, int>> result;
    for (auto& [g, mult] : sqf) {
        // distinct-degree on the squarefree piece
        ZpPoly rest = g.monic();
        ZpPoly xp(p, {0, 1});
        ZpPoly frob = xp;  // x^(p^d) mod rest, recomputed per degree step
        for (int d = 1; rest.degree() >= 1; ++d) {
            if (2 * d > rest.degree()) {
                // remainder is irreducible
                result.emplace_back(rest.lift(), mult);
                break;
            }
            frob = frob.powmod(mpz_class(static_cast<unsigned long>(p)), rest);
            ZpPoly hd = gcd(frob - xp.mod(rest), rest);
            if (hd.degree() > 0) {
                std::vector<ZpPoly> pieces;
                equal_degree_split(hd, d, pieces);
                for (auto& piece : pieces) result.emplace_back(piece.lift(), mult);
                ZpPoly q, r;
                rest.divrem(hd, q, r);
                rest = q;
                frob = frob.mod(rest);
            }
        }
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        for (int i = a.first.degree(); i >= 0; --i)
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        return a.second < b.second;
    });
    // aggregate equal factors
    std::vector<std::pair<IntPoly, int>> agg;
    for (auto& fm : result) {
        if (!agg.empty() && agg.back().first == fm.first)
            agg.back().second += fm.second;
        else
            agg.push_back(fm);
    }
    return agg;
}

}  // namespace qc
