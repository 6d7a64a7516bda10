#ifndef QCENSUS_QUADRATIC_HPP
#define QCENSUS_QUADRATIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace qc {

/* Fundamental unit (x + y sqrt(D))/2 of the quadratic order of discriminant
 * D > 0, solving x^2 - D y^2 = +/-4; norm is that sign. */
struct QuadUnit {
    mpz_class x, y;
    int norm;      // +1 or -1
    double log_value;  // log of the unit = regulator of O_D
};

bool is_quadratic_discriminant(long D);  // D = 0,1 mod 4, not a square, D != 0

/* Regulator of O_D via the PQa continued-fraction cycle (double precision,
 * Kahan-summed).  D > 0 a discriminant. */
double quadratic_regulator(long D);

/* Early-abort regulator: returns the regulator if it is <= limit, otherwise
 * nullopt (having stopped as soon as the partial sum exceeded limit). */
std::optional<double> quadratic_regulator_leq(long D, double limit);

/* Exact fundamental unit by multiplying the cycle of complete quotients. */
QuadUnit quadratic_fundamental_unit(long D);

/* Norm of the fundamental unit (+1/-1) from the parity of the PQa cycle,
 * without computing the unit itself. */
int quadratic_unit_norm(long D);

/* Class number of the quadratic order of discriminant D (any non-square
 * D = 0,1 mod 4; negative D counts reduced definite forms, positive D counts
 * cycles of reduced indefinite forms, corrected to the wide class number by
 * the norm of the fundamental unit). */
unsigned long quadratic_class_number(long D);

/* Narrow (form) class number for D > 0: number of cycles of reduced forms. */
unsigned long quadratic_form_class_number(long D);

/* Smallest-prime-factor table shared by the census loops. */
class SpfTable {
  public:
    explicit SpfTable(std::uint32_t limit);
    std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size()) - 1; }
    // all positive divisors of n (n <= limit), unsorted
    void divisors(std::uint32_t n, std::vector<std::uint32_t>& out) const;

  private:
    std::vector<std::uint32_t> spf_;
};

/* Form class number using a shared SPF table (fast path for census loops). */
unsigned long quadratic_form_class_number_fast(long D, const SpfTable& spf);
unsigned long quadratic_class_number_fast(long D, const SpfTable& spf, int unit_norm);

}  // namespace qc

#endif
