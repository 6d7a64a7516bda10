#ifndef QCENSUS_INT_POLY_HPP
#define QCENSUS_INT_POLY_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "qcensus/errors.hpp"

namespace qc {

/* Dense univariate polynomial over Z, constant term first.  The canonical
 * form never stores trailing zero coefficients, so degree() is just the
 * index of the last entry. */
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(const std::vector<mpz_class>& coeffs) : c_(coeffs) { trim(); }
    IntPoly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly zero() { return IntPoly(); }
    static IntPoly one() { return IntPoly({1}); }
    static IntPoly x() { return IntPoly({0, 1}); }
    // x^k
    static IntPoly monomial(int k, const mpz_class& a = 1);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const mpz_class& coeff(int i) const;
    const mpz_class& lc() const;
    const std::vector<mpz_class>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && lc() == 1; }

    IntPoly operator-() const;
    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const mpz_class& k) const;
    bool operator==(const IntPoly& o) const { return c_ == o.c_; }

    IntPoly derivative() const;

    // Exact division; throws internal_error if the remainder is nonzero.
    IntPoly divexact(const IntPoly& d) const;
    // Pseudo-division: lc(d)^(deg f - deg d + 1) f = q d + r with deg r < deg d.
    void pseudo_divrem(const IntPoly& d, IntPoly& q, IntPoly& r) const;
    // Division in Q[x] assuming d monic (quotient and remainder stay in Z[x]).
    void divrem_monic(const IntPoly& d, IntPoly& q, IntPoly& r) const;

    mpz_class content() const;  // gcd of coefficients, >= 0
    IntPoly primitive_part() const;
    // Content-free with positive leading coefficient (deduplication form).
    IntPoly canonical() const;

    mpz_class eval(const mpz_class& x) const;
    mpq_class eval(const mpq_class& x) const;
    // f(g) mod m; m monic.
    static IntPoly compose_mod(const IntPoly& f, const IntPoly& g, const IntPoly& m);

    IntPoly reverse() const;  // x^deg f(1/x)

    bool is_squarefree() const;

    std::string to_string() const;      // human form, e.g. "x^4 - x^2 + 1"
    std::string key() const;            // "c0:c1:...:cn"
    static IntPoly from_key(const std::string& key);

  private:
    void trim();
    std::vector<mpz_class> c_;
};

IntPoly gcd(const IntPoly& a, const IntPoly& b);  // primitive, positive lc
mpz_class resultant(const IntPoly& f, const IntPoly& g);
// Oracle-grade resultant: Bareiss determinant of the Sylvester matrix.
mpz_class resultant_sylvester(const IntPoly& f, const IntPoly& g);
// (-1)^{n(n-1)/2} Res(f, f') / lc(f)
mpz_class poly_discriminant(const IntPoly& f);

// Exact count of real roots of a squarefree polynomial (Sturm chain).
int count_real_roots(const IntPoly& f);
// Real roots inside (lo, hi].
int count_real_roots_between(const IntPoly& f, const mpq_class& lo, const mpq_class& hi);

}  // namespace qc

#endif
