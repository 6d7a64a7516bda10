#ifndef QCENSUS_CLASS_GROUP_HPP
#define QCENSUS_CLASS_GROUP_HPP

#include <optional>

#include "qcensus/units.hpp"

namespace qc {

/* (4/pi)^s n!/n^n sqrt|disc|; every ideal class of an order with this
 * discriminant has a representative of norm at most this bound. */
double minkowski_bound(const FieldPtr& field, const mpz_class& order_disc);

struct ClassGroupResult {
    unsigned long h = 1;
    std::vector<unsigned long> elementary_divisors;  // product = h
};

struct ClassGroupBudget {
    double ceiling = 60.0;          // Minkowski-bound ceiling (precondition)
    double principal_t2_slack = 1.001;
    size_t max_relations = 2048;
    unsigned long max_quotient = 4096;  // enumerate classes up to this size
};

/* Class number and elementary divisors of Pic(O).
 *
 * Maximal orders: factor-base relations over all primes of norm up to the
 * Minkowski bound; the group is certified by exhibiting a certified
 * non-principality witness for every nontrivial residual class (the
 * generator search ball is complete after reduction by the fundamental
 * unit).  Non-maximal orders: the conductor exact sequence
 *   h(O) = h(O_max) |(O_max/f)^x| / ( |(O/f)^x| [O_max^x : O^x] )
 * with the divisor structure recovered from conductor-coprime relations.
 * Throws inconclusive_error carrying the best divisor found when a budget
 * runs out. */
ClassGroupResult class_number(const OrderHandle& order, const ClassGroupBudget& budget = {});

/* Generator of I when principal; certified absence (nullopt) otherwise.
 * The search region T2 <= 2 sqrt(N) (e^rho + e^-rho) (quartic; the
 * analogous bound for quadratic) is complete after unit reduction. */
std::optional<ZVec> is_principal(const OrderHandle& order, const OrderIdeal& I,
                                 const UnitData* unit_data,
                                 const ClassGroupBudget& budget = {});

}  // namespace qc

#endif
