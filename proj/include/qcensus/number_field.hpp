#ifndef QCENSUS_NUMBER_FIELD_HPP
#define QCENSUS_NUMBER_FIELD_HPP

#include <memory>
#include <mutex>
#include <vector>

#include "qcensus/ball.hpp"
#include "qcensus/int_poly.hpp"

namespace qc {

/* A number field of degree 2 or 4, presented by a monic irreducible integer
 * polynomial.  Embeddings are certified root enclosures, cached per
 * precision and shared (the object is immutable apart from the cache). */
class NumberField {
  public:
    const IntPoly& min_poly() const { return f_; }
    int degree() const { return f_.degree(); }
    int real_embeddings() const { return r_; }
    int complex_pairs() const { return s_; }
    bool totally_complex() const { return r_ == 0 && degree() == 4; }

    /* Certified root balls of min_poly, conjugate pairs adjacent, each with
     * radius at most 2^-(prec/2).  The cache only ever tightens. */
    std::vector<CBall> embeddings(mpfr_prec_t prec) const;

    // set once the maximal order is known; 0 until then
    mpz_class field_disc() const;
    void set_field_disc(const mpz_class& d) const;

    std::string key() const { return f_.key(); }

  private:
    friend std::shared_ptr<const NumberField> make_field(const IntPoly& coeffs);
    IntPoly f_;
    int r_ = 0, s_ = 0;
    mutable std::mutex mu_;
    mutable std::vector<CBall> emb_;
    mutable mpfr_prec_t emb_prec_ = 0;
    mutable mpz_class disc_ = 0;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/* Builds the field, verifying monicity after canonicalization, the degree
 * restriction and irreducibility over Q.  Throws not_a_field_error /
 * unsupported_degree_error accordingly. */
FieldPtr make_field(const IntPoly& coeffs);

/* Irreducibility over Q for monic polynomials of degree <= 4. */
bool is_irreducible_monic(const IntPoly& f);

}  // namespace qc

#endif
