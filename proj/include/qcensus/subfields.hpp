#ifndef QCENSUS_SUBFIELDS_HPP
#define QCENSUS_SUBFIELDS_HPP

#include <vector>

#include "qcensus/number_field.hpp"
#include "qcensus/linalg.hpp"

namespace qc {

/* Automorphism of F presented by the power-basis image of the generator.
 * Apply by polynomial composition mod min_poly. */
struct FieldAutomorphism {
    QVec theta_image;
    bool is_identity = false;
};

/* All automorphisms of F over Q (identity included).  Count cross-checked
 * against the exact resolvent-cubic classification for quartics. */
std::vector<FieldAutomorphism> field_automorphisms(const FieldPtr& F);

/* |Aut(F/Q)| by exact integer tests only (degree 4: resolvent cubic plus
 * the Kappe-Warren C4 criterion; degree 2: always 2). */
int automorphism_count_exact(const FieldPtr& F);

QVec apply_automorphism(const FieldPtr& F, const FieldAutomorphism& s, const QVec& elem);

/* Squarefree d with Q(sqrt d) contained in F (degree 4 only).  Two
 * independent routes (resolvent cubic; fixed fields of order-2
 * automorphisms) must agree or internal_error is raised. */
std::vector<mpz_class> quadratic_subfields(const FieldPtr& F);

/* Power-basis coordinates of every root of g inside F. */
std::vector<QVec> roots_in_field(const IntPoly& g, const FieldPtr& F);

/* Index of the exact conjugate partner of each root in a complex_roots-style
 * list (real entries pair with themselves). */
std::vector<int> conj_pairing(const std::vector<CBall>& roots);

bool fields_isomorphic(const FieldPtr& A, const FieldPtr& B);

}  // namespace qc

#endif
