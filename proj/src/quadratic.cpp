#include "qcensus/quadratic.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "qcensus/errors.hpp"

namespace qc {

namespace {

bool is_square_long(long n) {
    if (n < 0) return false;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    for (long t = std::max(0L, r - 2); t <= r + 2; ++t)
        if (t * t == n) return true;
    return false;
}

// floor((P + sqrt(D)) / Q) for Q > 0, exact despite double sqrt
long cf_digit(long P, long Q, long D, double sq) {
    long a = static_cast<long>((P + sq) / Q);
    // a is correct iff aQ - P <= sqrt(D) < (a+1)Q - P
    auto le_sqrt = [D](long m) { return m <= 0 || static_cast<double>(m) * m <= D; };
    while (le_sqrt((a + 1) * Q - P)) ++a;
    while (!le_sqrt(a * Q - P)) --a;
    return a;
}

std::uint64_t pq_key(long P, long Q) {
    return (static_cast<std::uint64_t>(static_cast<std::int64_t>(P) + (1ll << 30)) << 32) ^
           static_cast<std::uint64_t>(Q);
}

struct PqaCycle {
    long start_index = -1;
    std::vector<std::pair<long, long>> states;  // (P, Q) from index 0
};

/* Continued fraction of (P0 + sqrt(D))/Q0 with P0 = D mod 2, Q0 = 2 until
 * the (P, Q) state repeats.  The repeated segment is the fundamental cycle
 * of O_D; the complete quotients are reduced from index 1 on, so the cycle
 * starts at index 0 or 1. */
PqaCycle pqa_cycle(long D) {
    PqaCycle cyc;
    double sq = std::sqrt(static_cast<double>(D));
    long P = ((D % 2) + 2) % 2;
    long Q = 2;
    std::unordered_map<std::uint64_t, long> seen;
    for (long i = 0;; ++i) {
        auto it = seen.find(pq_key(P, Q));
        if (it != seen.end()) {
            cyc.start_index = it->second;
            return cyc;
        }
        seen.emplace(pq_key(P, Q), i);
        cyc.states.emplace_back(P, Q);
        long a = cf_digit(P, Q, D, sq);
        long Pn = a * Q - P;
        long Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
}

}  // namespace

bool is_quadratic_discriminant(long D) {
    if (D == 0) return false;
    long m = ((D % 4) + 4) % 4;
    if (m != 0 && m != 1) return false;
    if (D > 0 && is_square_long(D)) return false;
    return true;
}

double quadratic_regulator(long D) {
    if (!is_quadratic_discriminant(D) || D <= 0)
        throw invalid_argument_error("quadratic_regulator: bad discriminant");
    PqaCycle cyc = pqa_cycle(D);
    double sq = std::sqrt(static_cast<double>(D));
    double sum = 0, comp = 0;
    for (size_t i = cyc.start_index; i < cyc.states.size(); ++i) {
        auto [P, Q] = cyc.states[i];
        double term = std::log((P + sq) / Q);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::optional<double> quadratic_regulator_leq(long D, double limit) {
    double sq = std::sqrt(static_cast<double>(D));
    long P = ((D % 2) + 2) % 2;
    long Q = 2;
    std::unordered_map<std::uint64_t, long> seen;
    std::vector<double> terms;
    double tail_sum = 0;  // sum of terms from index 1 on: a lower bound on R
    for (long i = 0;; ++i) {
        auto it = seen.find(pq_key(P, Q));
        if (it != seen.end()) {
            double sum = 0;
            for (size_t j = it->second; j < terms.size(); ++j) sum += terms[j];
            if (sum <= limit) return sum;
            return std::nullopt;
        }
        seen.emplace(pq_key(P, Q), i);
        double term = std::log((P + sq) / Q);
        terms.push_back(term);
        if (i >= 1) {
            tail_sum += term;
            // the cycle starts at index 0 or 1, so R >= tail_sum - term(1)...
            // safe form: R >= tail_sum (cycle includes [1, now))
            if (tail_sum > limit + 1e-9) return std::nullopt;
        }
        long a = cf_digit(P, Q, D, sq);
        long Pn = a * Q - P;
        long Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
}

QuadUnit quadratic_fundamental_unit(long D) {
    if (!is_quadratic_discriminant(D) || D <= 0)
        throw invalid_argument_error("quadratic_fundamental_unit: bad discriminant");
    PqaCycle cyc = pqa_cycle(D);
    // eps = prod over the cycle of (P_i + sqrt D)/Q_i as (u + v sqrt D)/w
    mpz_class u = 1, v = 0, w = 1;
    mpz_class Dz(D);
    for (size_t i = cyc.start_index; i < cyc.states.size(); ++i) {
        auto [P, Q] = cyc.states[i];
        mpz_class Pz(P), Qz(Q);
        mpz_class nu = u * Pz + v * Dz;
        mpz_class nv = u + v * Pz;
        u = nu;
        v = nv;
        w *= Qz;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.get_mpz_t());
        if (g > 1) {
            mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), g.get_mpz_t());
        }
    }
    QuadUnit out;
    mpz_class two_u = 2 * u, two_v = 2 * v;
    if (two_u % w != 0 || two_v % w != 0)
        throw internal_error("quadratic_fundamental_unit: denominator not 1 or 2");
    out.x = two_u / w;
    out.y = two_v / w;
    mpz_class nrm = out.x * out.x - Dz * out.y * out.y;
    if (nrm == 4)
        out.norm = 1;
    else if (nrm == -4)
        out.norm = -1;
    else
        throw internal_error("quadratic_fundamental_unit: x^2 - D y^2 != +/-4");
    long len = static_cast<long>(cyc.states.size()) - cyc.start_index;
    if (out.norm != ((len % 2 == 0) ? 1 : -1))
        throw internal_error("quadratic_fundamental_unit: norm/period parity mismatch");
    out.log_value = quadratic_regulator(D);
    return out;
}

int quadratic_unit_norm(long D) {
    if (!is_quadratic_discriminant(D) || D <= 0)
        throw invalid_argument_error("quadratic_unit_norm: bad discriminant");
    PqaCycle cyc = pqa_cycle(D);
    long len = static_cast<long>(cyc.states.size()) - cyc.start_index;
    return (len % 2 == 0) ? 1 : -1;
}

SpfTable::SpfTable(std::uint32_t limit) : spf_(limit + 1, 0) {
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            for (std::uint64_t j = i; j <= limit; j += i)
                if (spf_[j] == 0) spf_[j] = i;
        }
    }
}

void SpfTable::divisors(std::uint32_t n, std::vector<std::uint32_t>& out) const {
    out.clear();
    out.push_back(1);
    while (n > 1) {
        std::uint32_t p = spf_[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        size_t sz = out.size();
        std::uint64_t pk = 1;
        for (std::uint32_t i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) out.push_back(static_cast<std::uint32_t>(out[j] * pk));
        }
    }
}

namespace {

// one rho-reduction step on a reduced indefinite form (a, b, c)
void rho_step(long D, long& a, long& b, long& c, double sq) {
    long c2 = 2 * std::labs(c);
    long r = ((-b) % c2 + c2) % c2;
    while (static_cast<double>(r) > sq) r -= c2;
    while (static_cast<double>(r) + c2 < sq) r += c2;
    // window is (sq - 2|c|, sq): after the loops r <= sq < r + c2; if r
    // landed exactly at the low end, one more step up
    if (static_cast<double>(r) + c2 == sq) r += c2;
    long na = c;
    long nc = (r * r - D) / (4 * c);
    a = na;
    b = r;
    c = nc;
}

unsigned long form_cycles(long D, const SpfTable& spf) {
    double sq = std::sqrt(static_cast<double>(D));
    long sqfloor = static_cast<long>(sq);
    while ((sqfloor + 1) * (sqfloor + 1) <= D) ++sqfloor;
    while (sqfloor * sqfloor > D) --sqfloor;
    std::unordered_map<std::uint64_t, char> visited;
    std::vector<std::uint32_t> divs;
    auto form_key = [](long a, long b) {
        return (static_cast<std::uint64_t>(static_cast<std::int64_t>(a) + (1ll << 31)) << 32) ^
               static_cast<std::uint64_t>(static_cast<std::int64_t>(b) + (1ll << 31));
    };
    unsigned long cycles = 0;
    long bstart = (D % 2 == 0) ? 2 : 1;
    for (long b = bstart; b <= sqfloor; b += 2) {
        long t = (D - b * b) / 4;
        if (t <= 0) continue;
        spf.divisors(static_cast<std::uint32_t>(t), divs);
        for (std::uint32_t d : divs) {
            long a = static_cast<long>(d);
            long m1 = 2 * a - b, m2 = 2 * a + b;
            if (!(m1 * m1 < D && m2 * m2 > D)) continue;  // not reduced
            long c = -(t / a);
            if (std::gcd(std::gcd(a, b), std::labs(c)) != 1) continue;  // imprimitive
            for (int sign = 0; sign < 2; ++sign) {
                long aa = sign ? -a : a;
                long cc = sign ? -c : c;
                if (visited.count(form_key(aa, b))) continue;
                ++cycles;
                long x = aa, y = b, z = cc;
                while (true) {
                    visited[form_key(x, y)] = 1;
                    rho_step(D, x, y, z, sq);
                    if (x == aa && y == b) break;
                }
            }
        }
    }
    return cycles;
}

}  // namespace

unsigned long quadratic_form_class_number_fast(long D, const SpfTable& spf) {
    return form_cycles(D, spf);
}

unsigned long quadratic_form_class_number(long D) {
    if (!is_quadratic_discriminant(D) || D <= 0)
        throw invalid_argument_error("quadratic_form_class_number: bad discriminant");
    SpfTable spf(static_cast<std::uint32_t>(D / 4 + 2));
    return form_cycles(D, spf);
}

unsigned long quadratic_class_number_fast(long D, const SpfTable& spf, int unit_norm) {
    unsigned long narrow = form_cycles(D, spf);
    if (unit_norm == -1) return narrow;
    if (narrow % 2 != 0)
        throw internal_error("quadratic_class_number: narrow count odd with norm +1");
    return narrow / 2;
}

unsigned long quadratic_class_number(long D) {
    if (!is_quadratic_discriminant(D)) throw invalid_argument_error("bad discriminant");
    if (D < 0) {
        long absD = -D;
        unsigned long h = 0;
        for (long a = 1; 3 * a * a <= absD; ++a) {
            long bs = (absD % 2 == 0) ? 0 : 1;
            for (long b = bs; b <= a; b += 2) {
                long num = b * b + absD;
                if (num % (4 * a) != 0) continue;
                long c = num / (4 * a);
                if (c < a) continue;
                if (std::gcd(std::gcd(a, b), c) != 1) continue;  // imprimitive
                if (b == 0 || a == b || a == c)
                    h += 1;
                else
                    h += 2;
            }
        }
        return h;
    }
    QuadUnit u = quadratic_fundamental_unit(D);
    SpfTable spf(static_cast<std::uint32_t>(D / 4 + 2));
    return quadratic_class_number_fast(D, spf, u.norm);
}

}  // namespace qc
