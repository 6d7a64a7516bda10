#ifndef QCENSUS_GEODESIC_HPP
#define QCENSUS_GEODESIC_HPP

#include "qcensus/units.hpp"

namespace qc {

/* Geodesic-side data realised from a fundamental unit of a rank-1 order in
 * a totally complex quartic field: eigenvalue normal form
 * { a e^{+-i theta}, a^-1 e^{+-i phi} } with a in (0,1), the length
 * l = 8 |log a|, N = e^l = e^{4R}, the adjoint trace
 * 4 (1 - cos 2 theta)(1 - cos 2 phi), and the class multiplicity carried as
 * the rational weight 4 h lambda mu / kappa with chi_1 = 1/mu. */
struct GeodesicClass {
    RBall a{64};
    RBall theta{64};
    RBall phi{64};
    RBall length{64};
    RBall n_gamma{64};
    RBall trace_sigma_tilde{64};
    mpq_class chi1;
    mpq_class weight;
};

/* Matrix of multiplication by the unit on the integral basis; checks
 * det = +1 and, when the unit generates the field, that the characteristic
 * polynomial is its minimal polynomial. */
ZMat unit_matrix(const OrderHandle& order, const ZVec& unit);

struct OrderCensusInvariants {
    unsigned long h = 1;
    mpz_class lambda_s = 1;
    int kappa_val = 1;
};

/* Realise the correspondence datum for the order; torsion input is rejected
 * (not_a_geodesic), degenerate real-pair eigenvalues are a shape violation
 * (they cannot occur for C^c input). */
GeodesicClass geodesic_data(const OrderHandle& order, const UnitData& u,
                            const OrderCensusInvariants& inv);

struct CorrespondenceReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool all_ok = true;
};

/* The five correspondence assertions: det = 1; N = e^{4R} to 1e-9;
 * tr sigma-tilde in (0, 16] for C^c; kappa > 1 implies theta +- phi lands in
 * (pi/2)Z union (pi/3)Z within 1e-8; weak neatness iff classification C^c.
 * Throws correspondence_violation_error naming the failed identity unless
 * throw_on_failure is false. */
CorrespondenceReport check_correspondence(const OrderHandle& order, const UnitData& u,
                                          const OrderCensusInvariants& inv, bool is_cc,
                                          bool throw_on_failure = true);

}  // namespace qc

#endif
