#ifndef QCENSUS_UNITS_HPP
#define QCENSUS_UNITS_HPP

#include "qcensus/ideals.hpp"

namespace qc {

/* Torsion part, fundamental unit and certified regulator of a rank-1 order.
 *
 * Conventions: rho = |log |tau(eps)|| is the primitive logarithmic size; the
 * exposed regulator is 2 rho for totally complex quartic orders and rho for
 * real quadratic ones.  For quartic orders the embedding values of eps are
 * { a e^{+-i theta}, a^-1 e^{+-i phi} } with a = e^{-rho} in (0,1); theta
 * and phi are certified and lie in [0, pi] (0 and pi occur exactly when eps
 * generates the real quadratic subfield of a C^r field). */
struct UnitData {
    OrderHandle order;
    unsigned long mu = 2;
    ZVec torsion_gen;
    ZVec fund_unit;
    RBall rho{64};
    RBall regulator{64};
    RBall theta{64};
    RBall phi{64};
    bool angles_exact_degenerate = false;  // eps real-quadratic: theta, phi in {0, pi}
    // eps = zeta^j eps_max^m for the maximal order's fundamental unit
    unsigned long index_in_maximal = 1;
};

/* Number of roots of unity in the order and a generator of that cyclic
 * group.  Quartic totally complex or quadratic orders. */
std::pair<unsigned long, ZVec> torsion_units(const OrderHandle& order);

struct UnitSearchBudget {
    double max_t2 = 2.5e7;          // enumeration ceiling
    unsigned long max_fb = 960;     // factor-base prime ceiling
    size_t max_relations = 512;
};

/* Fundamental unit with certified-minimal regulator.  The certificate is
 * the absence of torsion-twisted prime roots down to the proven regulator
 * floor for these signatures (0.05), plus exact verification of every
 * algebraic step.  Throws search_budget_exhausted_error with the best known
 * lower bound when the relation search gives up. */
UnitData fundamental_unit(const OrderHandle& order, const UnitSearchBudget& budget = {});

/* Number of roots of the minimal polynomial of eps that lie in F and are
 * fundamental units of the order (1, 2 or 4). */
int kappa(const OrderHandle& order, const UnitData& u);

/* nu(O) = (1/2 mu) sum over the 2 mu fundamental units zeta eps^{+-1} of
 * 4 (1 - cos 2 theta_u)(1 - cos 2 phi_u), each term cross-checked against
 * the product over embeddings of (1 - (alpha(u)/|alpha(u)|)^2) to 1e-9. */
RBall nu_invariant(const OrderHandle& order, const UnitData& u);

/* Weak neatness: no torsion multiple of eps^k (1 <= k <= 24) lies in a real
 * quadratic subfield.  Equivalent to the field having no real quadratic
 * subfield. */
bool weakly_neat(const OrderHandle& order, const UnitData& u);

/* The 2 mu fundamental-unit representatives zeta^j eps^{+-1} as power-basis
 * coordinate vectors. */
std::vector<QVec> all_fundamental_units(const OrderHandle& order, const UnitData& u);

}  // namespace qc

#endif
