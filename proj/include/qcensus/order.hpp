#ifndef QCENSUS_ORDER_HPP
#define QCENSUS_ORDER_HPP

#include <set>

#include "qcensus/linalg.hpp"
#include "qcensus/number_field.hpp"

namespace qc {

/* An order in a degree-n field: a full-rank multiplicatively closed lattice
 * containing 1, given by basis rows over the power basis of min_poly's root.
 * Immutable after construction; elements are integer coordinate vectors
 * w.r.t. the basis. */
class Order {
  public:
    Order(FieldPtr field, QMat basis, std::set<unsigned long> maximal_at = {});

    const FieldPtr& field() const { return field_; }
    int degree() const { return field_->degree(); }
    const QMat& basis() const { return basis_; }
    const QMat& basis_inv() const { return basis_inv_; }
    const mpz_class& disc() const { return disc_; }
    const std::set<unsigned long>& maximal_at() const { return maximal_at_; }
    // index of this order inside the lattice (1/denominator scale); for an
    // order containing Z[theta] this is [O : Z[theta]]^-1 bookkeeping:
    // det(basis) = +/- 1/[O : Z[theta]] when O contains the equation order
    mpq_class basis_det() const { return det_; }

    // element arithmetic in order coordinates
    ZVec mul(const ZVec& a, const ZVec& b) const;
    ZVec one() const;
    ZVec pow(ZVec a, unsigned long e) const;
    mpz_class norm(const ZVec& a) const;
    mpz_class trace(const ZVec& a) const;
    ZMat mul_matrix(const ZVec& a) const;  // multiplication-by-a on the basis
    // minimal polynomial of the element (degree <= n), monic, exact
    IntPoly min_poly_of(const ZVec& a) const;

    // power-basis rational coordinates <-> order coordinates
    QVec to_power_basis(const ZVec& a) const;
    bool from_power_basis(const QVec& v, ZVec& out) const;  // false if not in O
    bool contains(const QVec& power_coords) const;

    // embedding of an element under the k-th field embedding
    CBall embed(const ZVec& a, int k, mpfr_prec_t prec) const;
    // T2 Gram matrix (sum over embeddings of |sigma(b_i)| |sigma(b_j)| parts)
    std::vector<std::vector<double>> t2_gram_upper(mpfr_prec_t prec) const;

    std::string describe() const;

  private:
    FieldPtr field_;
    QMat basis_;       // rows: basis elements in power basis
    QMat basis_inv_;   // power -> order coordinates
    mpq_class det_;
    mpz_class disc_;
    std::set<unsigned long> maximal_at_;
    std::vector<std::vector<ZVec>> mul_;  // mul_[i][j] = coords of b_i * b_j
    friend Order with_maximal_at(Order o, std::set<unsigned long> s);
};

using OrderPtr = std::shared_ptr<const Order>;

/* Z[theta]: power basis, disc = disc(min_poly), nothing certified. */
Order equation_order(const FieldPtr& field);

/* Grows the order at p by the Dedekind test and then radical-idealizer
 * (round 2) steps to a fixpoint; idempotent, certifies p-maximality. */
Order p_maximal_order(const Order& order, unsigned long p);

/* Maximal at every p in S; with global=true also at every prime whose
 * square divides the equation-order discriminant, which yields the maximal
 * order of the field (and records field_disc on the NumberField). */
Order order_maximal_at(const FieldPtr& field, const std::set<unsigned long>& S,
                       bool global = false);

/* Dedekind criterion at p for the equation order of f: true means Z[theta]
 * is already p-maximal. */
bool dedekind_is_p_maximal(const IntPoly& f, unsigned long p);

}  // namespace qc

#endif
