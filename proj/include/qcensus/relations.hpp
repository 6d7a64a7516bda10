#ifndef QCENSUS_RELATIONS_HPP
#define QCENSUS_RELATIONS_HPP

#include <map>
#include <optional>

#include "qcensus/splitting.hpp"

namespace qc {

/* Factor-base relation machinery over a fixed order (normally the maximal
 * order).  Enumerates short elements, keeps those with factor-base-smooth
 * norm, and records the exponent vectors of their principal ideals.  Units
 * fall out of the kernel of the relation matrix; the class group is the
 * cokernel.  Deterministic throughout. */
class RelationEngine {
  public:
    struct Relation {
        QVec element;       // power-basis coordinates (exact)
        std::vector<int> exponents;  // over the factor base, fixed order
    };

    RelationEngine(OrderHandle order, unsigned long fb_norm_bound);

    const OrderHandle& order() const { return order_; }
    const std::vector<PrimeFactor>& factor_base() const { return fb_; }
    const std::vector<Relation>& relations() const { return rels_; }

    /* Enumerate elements with T2 <= t2_bound and harvest smooth relations.
     * Returns the number of new relations found. */
    int harvest(double t2_bound, size_t max_relations);

    /* Exponent vector of the principal ideal (alpha) over the factor base,
     * or nullopt when the norm is not factor-base smooth. */
    std::optional<std::vector<int>> factor_element(const ZVec& alpha);

    /* Multiplicative combinations of relation elements along the kernel of
     * the exponent matrix: each is a unit of the order.  Deduplicated,
     * deterministic order. */
    std::vector<QVec> kernel_units(size_t max_units = 64);

    /* Units from pairs of enumerated elements generating the same ideal. */
    const std::vector<QVec>& bucket_units() const { return bucket_units_; }

    int valuation(const OrderIdeal& I, size_t fb_index, int cap = 64);

  private:
    OrderHandle order_;
    std::vector<PrimeFactor> fb_;
    std::vector<unsigned long> fb_primes_;  // rational primes underlying fb_
    std::vector<std::vector<OrderIdeal>> fb_powers_;  // cached P^k
    std::vector<Relation> rels_;
    std::vector<QVec> bucket_units_;
    std::map<std::string, ZVec> ideal_bucket_;
    double harvested_up_to_ = 0;
};

/* All integer vectors x with x^T G x <= bound for a positive definite Gram
 * matrix (upper bounds), via Fincke-Pohst; zero excluded, one of each +/-
 * pair kept, deterministic order. */
std::vector<ZVec> enumerate_t2_ball(const std::vector<std::vector<double>>& gram, double bound,
                                    size_t max_points = 4000000);

/* Exact element inverse in the field: power-basis coords of 1/alpha. */
QVec field_inverse(const FieldPtr& field, const QVec& alpha);
QVec field_mul(const FieldPtr& field, const QVec& a, const QVec& b);
QVec field_pow(const FieldPtr& field, const QVec& a, long e);

}  // namespace qc

#endif
