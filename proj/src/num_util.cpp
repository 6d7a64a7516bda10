#include "qcensus/num_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qcensus/zmod_poly.hpp"

namespace qc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (mulmod(x, x, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) {
                d = n;  // cycle; retry with another c
                break;
            }
            d = std::gcd(diff, n);
        }
        if (d != n && d != 1) return d;
        if (c > 64) throw internal_error("pollard_rho failed");
    }
}

void factor_u64(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[n] += 1;
        return;
    }
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        while (n % p == 0) {
            out[p] += 1;
            n /= p;
        }
    }
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[n] += 1;
        return;
    }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

}  // namespace

std::vector<std::pair<mpz_class, int>> factor_mpz(mpz_class n) {
    std::vector<std::pair<mpz_class, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    // strip small primes so the residual fits in 64 bits for everything we meet
    for (unsigned long p = 2; p < 100000ul && n > 1; p = (p == 2 ? 3 : p + 2)) {
        mpz_class pz(p);
        if (n % pz == 0) {
            int e = 0;
            while (n % pz == 0) {
                n /= pz;
                ++e;
            }
            out.emplace_back(pz, e);
        }
        if (pz * pz > n) break;
    }
    if (n > 1) {
        if (n.fits_ulong_p()) {
            std::map<u64, int> m;
            factor_u64(n.get_ui(), m);
            for (auto& [p, e] : m) out.emplace_back(mpz_class(static_cast<unsigned long>(p)), e);
        } else if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
            out.emplace_back(n, 1);
        } else {
            // square? (common for discriminant quotients)
            mpz_class r;
            if (mpz_perfect_square_p(n.get_mpz_t())) {
                mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
                auto f = factor_mpz(r);
                for (auto& [p, e] : f) out.emplace_back(p, 2 * e);
            } else {
                throw internal_error("factor_mpz: composite too large: " + n.get_str());
            }
        }
    }
    std::sort(out.begin(), out.end());
    // merge duplicates (possible when the square branch fires)
    std::vector<std::pair<mpz_class, int>> merged;
    for (auto& pe : out) {
        if (!merged.empty() && merged.back().first == pe.first)
            merged.back().second += pe.second;
        else
            merged.push_back(pe);
    }
    return merged;
}

mpz_class squarefree_part(const mpz_class& n) {
    if (n == 0) return 0;
    mpz_class a = n < 0 ? mpz_class(-n) : n;
    mpz_class out = n < 0 ? -1 : 1;
    for (auto& [p, e] : factor_mpz(a))
        if (e & 1) out *= p;
    return out;
}

bool is_square(const mpz_class& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool rational_reconstruct(const mpq_class& x, const mpz_class& qmax, const mpq_class& err,
                          mpq_class& out) {
    // continued-fraction convergents of x
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpq_class rem = x;
    for (int it = 0; it < 20000; ++it) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rem.get_num().get_mpz_t(), rem.get_den().get_mpz_t());
        mpz_class p2 = a * p1 + p0;
        mpz_class q2 = a * q1 + q0;
        if (q2 > qmax) break;
        mpq_class cand(p2, q2);
        cand.canonicalize();
        mpq_class diff = x - cand;
        if (abs(diff) <= err) {
            out = cand;
            return true;
        }
        mpq_class frac = rem - mpq_class(a);
        if (frac == 0) break;
        rem = 1 / frac;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return false;
}

bool reconstruct_ball(const RBall& b, const mpz_class& qmax, mpq_class& out) {
    mpq_class x = b.mid_rational();
    // tolerance: ball radius plus a safety floor tied to the working precision
    mpq_class tol;
    double rd = b.rad_double();
    mpq_class radq(std::max(rd, 0.0) * 4 + std::ldexp(1.0, -static_cast<int>(b.prec()) + 16));
    tol = radq;
    return rational_reconstruct(x, qmax, tol, out);
}

}  // namespace qc
