#include "qcensus/number_field.hpp"

#include <cmath>

#include "qcensus/num_util.hpp"
#include "qcensus/roots.hpp"

namespace qc {

bool is_irreducible_monic(const IntPoly& f) {
    int n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    if (f.coeff(0) == 0) return false;  // x divides
    // integer roots divide the constant term
    {
        auto fac = factor_mpz(f.coeff(0));
        std::vector<mpz_class> divs{1};
        for (auto& [p, e] : fac) {
            std::vector<mpz_class> next;
            mpz_class pk = 1;
            for (int i = 0; i <= e; ++i) {
                for (auto& d : divs) next.push_back(d * pk);
                pk *= p;
            }
            divs = next;
        }
        for (auto& d : divs) {
            if (f.eval(d) == 0 || f.eval(mpz_class(-d)) == 0) return false;
        }
    }
    if (n == 2 || n == 3) return true;  // no rational root suffices
    // degree 4: rule out quadratic * quadratic over Z
    // (x^2 + a x + b)(x^2 + c x + d) with b d = c0, integer a, c
    auto fac0 = factor_mpz(f.coeff(0));
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : fac0) {
        std::vector<mpz_class> next;
        mpz_class pk = 1;
        for (int i = 0; i <= e; ++i) {
            for (auto& d : divs) next.push_back(d * pk);
            pk *= p;
        }
        divs = next;
    }
    const mpz_class c3 = f.coeff(3), c2 = f.coeff(2), c1 = f.coeff(1), c0 = f.coeff(0);
    for (auto& b0 : divs) {
        for (int sgn_b = 0; sgn_b < 2; ++sgn_b) {
            mpz_class b = sgn_b ? mpz_class(-b0) : b0;
            if (b == 0) continue;
            mpz_class d;
            mpz_class r;
            mpz_tdiv_qr(d.get_mpz_t(), r.get_mpz_t(), c0.get_mpz_t(), b.get_mpz_t());
            if (r != 0) continue;
            // a + c = c3; b + d + a c = c2; a d + b c = c1
            // eliminate: c = c3 - a; a(c3 - a) = c2 - b - d -> quadratic in a
            // a^2 - c3 a + (c2 - b - d) = 0
            mpz_class disc = c3 * c3 - 4 * (c2 - b - d);
            if (disc < 0 || !is_square(disc)) continue;
            mpz_class sq;
            mpz_sqrt(sq.get_mpz_t(), disc.get_mpz_t());
            for (int pm = 0; pm < 2; ++pm) {
                mpz_class num = c3 + (pm ? sq : mpz_class(-sq));
                if (num % 2 != 0) continue;
                mpz_class a = num / 2;
                mpz_class c = c3 - a;
                if (a * d + b * c == c1) return false;
            }
        }
    }
    return true;
}

FieldPtr make_field(const IntPoly& coeffs) {
    IntPoly f = coeffs.canonical();
    if (f.degree() != 2 && f.degree() != 4)
        throw unsupported_degree_error("make_field: degree must be 2 or 4, got " +
                                       std::to_string(f.degree()));
    if (!f.is_monic())
        throw invalid_argument_error("make_field: polynomial not monic after canonicalization");
    if (!f.is_squarefree()) throw not_a_field_error("make_field: polynomial has repeated roots");
    if (!is_irreducible_monic(f)) throw not_a_field_error("make_field: polynomial is reducible");
    auto nf = std::make_shared<NumberField>();
    nf->f_ = f;
    int nr = count_real_roots(f);
    nf->r_ = nr;
    nf->s_ = (f.degree() - nr) / 2;
    return nf;
}

std::vector<CBall> NumberField::embeddings(mpfr_prec_t prec) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (emb_prec_ >= prec && !emb_.empty()) return emb_;
    double target = std::max(std::ldexp(1.0, -static_cast<int>(prec) / 2), 1e-280);
    emb_ = complex_roots(f_, target);
    emb_prec_ = prec;
    return emb_;
}

mpz_class NumberField::field_disc() const {
    std::lock_guard<std::mutex> lk(mu_);
    return disc_;
}

void NumberField::set_field_disc(const mpz_class& d) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (disc_ == 0) disc_ = d;
}

}  // namespace qc
