#ifndef QCENSUS_NUM_UTIL_HPP
#define QCENSUS_NUM_UTIL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "qcensus/ball.hpp"

namespace qc {

/* Factorization of |n| into primes (Pollard rho + Miller-Rabin), sorted. */
std::vector<std::pair<mpz_class, int>> factor_mpz(mpz_class n);

/* Squarefree kernel of n, keeping the sign. */
mpz_class squarefree_part(const mpz_class& n);

bool is_square(const mpz_class& n);

/* Best rational approximation p/q to x with q <= qmax such that
 * |x - p/q| <= err; returns false if none of the convergents qualifies. */
bool rational_reconstruct(const mpq_class& x, const mpz_class& qmax, const mpq_class& err,
                          mpq_class& out);

/* Reconstruct the midpoint of a ball as a rational with denominator <= qmax,
 * requiring the candidate to sit within max(4 rad, 2^-min_slack * scale) of
 * the midpoint.  Returns false when no convergent qualifies. */
bool reconstruct_ball(const RBall& b, const mpz_class& qmax, mpq_class& out);

}  // namespace qc

#endif
