#ifndef QCENSUS_ROOTS_HPP
#define QCENSUS_ROOTS_HPP

#include <vector>

#include "qcensus/ball.hpp"
#include "qcensus/int_poly.hpp"

namespace qc {

/* Certified complex root isolation.  Returns deg f pairwise disjoint balls,
 * each containing exactly one root, radius <= target_radius.  Real roots
 * come back with exact zero imaginary part; complex roots as exact
 * conjugate pairs.  Ordered by (real part, imaginary part) of the centers.
 *
 * Precision ladder starts at 128 bits and doubles up to 8192, after which
 * precision_exhausted_error is thrown. */
std::vector<CBall> complex_roots(const IntPoly& f, double target_radius);

/* Isolating rational intervals (lo, hi] for the real roots of squarefree f,
 * refined until hi - lo <= width.  Sorted ascending. */
std::vector<std::pair<mpq_class, mpq_class>> real_root_intervals(const IntPoly& f, const mpq_class& width);

}  // namespace qc

#endif
