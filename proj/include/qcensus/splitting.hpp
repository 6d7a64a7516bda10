#ifndef QCENSUS_SPLITTING_HPP
#define QCENSUS_SPLITTING_HPP

#include <set>

#include "qcensus/ideals.hpp"

namespace qc {

/* Splitting data of a rational prime in the field of an order: the list of
 * (ramification index, inertia degree) pairs of the places above p, sorted.
 * sum e_i f_i always equals the field degree. */
struct SplittingType {
    std::vector<std::pair<int, int>> ef;
    int degree_sum() const {
        int s = 0;
        for (auto& [e, f] : ef) s += e * f;
        return s;
    }
};

struct PrimeFactor {
    OrderIdeal ideal;
    int e;
    int f;
};

/* Prime ideals of the order above p with their (e, f); requires the order
 * certified p-maximal. */
std::vector<PrimeFactor> prime_ideals_above(const OrderHandle& order, unsigned long p);

/* (e_i, f_i) at p.  Uses the factorization of min_poly mod p when p does not
 * divide the index of the equation order, otherwise the p-maximal basis. */
SplittingType splitting_type(const OrderHandle& order, unsigned long p);

bool is_non_decomposed(const OrderHandle& order, unsigned long p);

/* prod over p in S of the inertia degree of the unique place above p.
 * Throws invalid_argument_error when |S| is odd or empty and
 * field_not_in_cs_error when some p in S is decomposed. */
mpz_class lambda_S(const OrderHandle& order, const std::set<unsigned long>& S);

enum class FieldClass { Cc, Cr, NotInC };

/* NotInC unless the field is totally complex quartic with every p in S
 * non-decomposed; then Cr/Cc by presence of a real quadratic subfield. */
FieldClass classify_field(const FieldPtr& field, const std::set<unsigned long>& S);

const char* field_class_name(FieldClass c);

}  // namespace qc

#endif
