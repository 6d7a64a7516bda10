#ifndef QCENSUS_IDEALS_HPP
#define QCENSUS_IDEALS_HPP

#include "qcensus/order.hpp"

namespace qc {

using OrderHandle = std::shared_ptr<const Order>;

inline OrderHandle make_order_handle(Order o) {
    return std::make_shared<const Order>(std::move(o));
}

/* Integral ideal of an order: full-rank sublattice in HNF (rows are a
 * Z-basis in order coordinates), closed under multiplication by the order.
 * norm = det(hnf) = index in the order. */
struct OrderIdeal {
    OrderHandle order;
    ZMat hnf;
    mpz_class norm;
};

// builds, reduces to HNF, computes the norm and verifies O-module closure
OrderIdeal ideal_from_generators(const OrderHandle& o, const ZMat& gens);
OrderIdeal ideal_whole(const OrderHandle& o);
OrderIdeal ideal_principal(const OrderHandle& o, const ZVec& gen);
OrderIdeal ideal_mul(const OrderIdeal& a, const OrderIdeal& b);
OrderIdeal ideal_pow(const OrderIdeal& a, int e);

bool ideal_contains(const OrderIdeal& I, const ZVec& x);
bool ideal_subset(const OrderIdeal& I, const OrderIdeal& J);  // I inside J
bool ideal_equal(const OrderIdeal& I, const OrderIdeal& J);

/* Largest k <= maxk with I inside P^k (P-adic valuation for prime P). */
int ideal_valuation(const OrderIdeal& I, const OrderIdeal& P, int maxk);

std::string ideal_key(const OrderIdeal& I);  // canonical string of the HNF

}  // namespace qc

#endif
