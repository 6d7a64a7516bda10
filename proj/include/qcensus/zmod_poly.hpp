#ifndef QCENSUS_ZMOD_POLY_HPP
#define QCENSUS_ZMOD_POLY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "qcensus/int_poly.hpp"

namespace qc {

bool is_prime_u64(std::uint64_t n);

/* Dense polynomial over F_p for word-sized p.  Only what the factoring and
 * order machinery needs. */
class ZpPoly {
  public:
    ZpPoly() : p_(2) {}
    explicit ZpPoly(std::uint64_t p) : p_(p) {}
    ZpPoly(std::uint64_t p, std::vector<std::uint64_t> c) : p_(p), c_(std::move(c)) { trim(); }
    static ZpPoly from_int_poly(const IntPoly& f, std::uint64_t p);

    std::uint64_t modulus() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::uint64_t coeff(int i) const {
        return (i < 0 || i >= static_cast<int>(c_.size())) ? 0 : c_[i];
    }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    ZpPoly operator+(const ZpPoly& o) const;
    ZpPoly operator-(const ZpPoly& o) const;
    ZpPoly operator*(const ZpPoly& o) const;
    bool operator==(const ZpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }

    ZpPoly monic() const;
    void divrem(const ZpPoly& d, ZpPoly& q, ZpPoly& r) const;
    ZpPoly mod(const ZpPoly& d) const;
    std::uint64_t eval(std::uint64_t x) const;
    ZpPoly derivative() const;

    // this^e mod m
    ZpPoly powmod(const mpz_class& e, const ZpPoly& m) const;

    IntPoly lift() const;  // coefficients in [0, p)

  private:
    void trim();
    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

ZpPoly gcd(const ZpPoly& a, const ZpPoly& b);  // monic
// g = gcd(a,b) together with u a + v b = g
ZpPoly xgcd(const ZpPoly& a, const ZpPoly& b, ZpPoly& u, ZpPoly& v);

/* Full factorization over F_p.  Deterministic: squarefree decomposition,
 * then distinct-degree, then an equal-degree split driven by a fixed
 * sequence of test elements.  Result sorted by (degree, lex on lifted
 * coefficients), multiplicities aggregated.
 * Throws invalid_argument_error if p is not prime or f vanishes mod p. */
std::vector<std::pair<IntPoly, int>> factor_mod_p(const IntPoly& f, std::uint64_t p);

}  // namespace qc

#endif
