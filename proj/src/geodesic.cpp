#include "qcensus/geodesic.hpp"

#include <cmath>

namespace qc {

namespace {

bool is_torsion(const Order& o, const ZVec& x) {
    ZVec acc = x;
    ZVec one = o.one();
    for (int k = 1; k <= 12; ++k) {
        if (acc == one) return true;
        acc = o.mul(acc, x);
    }
    return false;
}

// distance from the ball midpoint to the nearest multiple of pi/2 or pi/3
double angle_lattice_distance(double v) {
    double best = 1e9;
    for (double step : {3.14159265358979323846 / 2, 3.14159265358979323846 / 3}) {
        double k = std::round(v / step);
        best = std::min(best, std::abs(v - k * step));
    }
    return best;
}

}  // namespace

ZMat unit_matrix(const OrderHandle& order, const ZVec& unit) {
    mpz_class n = order->norm(unit);
    if (n != 1 && n != -1) throw invalid_argument_error("unit_matrix: element is not a unit");
    ZMat m = order->mul_matrix(unit);
    mpz_class det = zmat_det(m);
    if (det != 1)
        throw correspondence_violation_error("unit_matrix: det != +1 (N(u) = " + n.get_str() +
                                             ")");
    IntPoly mp = order->min_poly_of(unit);
    if (mp.degree() == order->degree()) {
        auto cp = zmat_charpoly(m);
        if (!(IntPoly(cp) == mp))
            throw internal_error("unit_matrix: characteristic polynomial != minimal polynomial");
    }
    return m;
}

GeodesicClass geodesic_data(const OrderHandle& order, const UnitData& u,
                            const OrderCensusInvariants& inv) {
    if (!order->field()->totally_complex())
        throw invalid_argument_error("geodesic_data: totally complex quartic orders only");
    if (is_torsion(*order, u.fund_unit))
        throw not_a_geodesic_error("geodesic_data: torsion unit has a = 1");
    if (u.angles_exact_degenerate)
        throw shape_violation_error(
            "geodesic_data: eigenvalues form real pairs (field not in C^c)");
    // det and charpoly sanity on the regular representation
    unit_matrix(order, u.fund_unit);

    GeodesicClass g;
    mpfr_prec_t prec = u.rho.prec();
    g.a = (-u.rho).exp();
    g.theta = u.theta;
    g.phi = u.phi;
    g.length = u.rho * RBall::exact(8L, prec);
    g.n_gamma = g.length.exp();
    // cross-route: e^{4 R} with the stored regulator
    RBall four_r = u.regulator * RBall::exact(4L, prec);
    RBall other = four_r.exp();
    RBall rel = (g.n_gamma - other).abs() / other;
    if (!(rel.upper_double() <= 1e-9))
        throw numeric_inconsistency_error("geodesic_data: N(gamma) != e^{4R} at 1e-9");
    RBall one = RBall::exact(1L, prec);
    RBall twoth = g.theta + g.theta;
    RBall twoph = g.phi + g.phi;
    g.trace_sigma_tilde = (one - twoth.cos()) * (one - twoph.cos()) * RBall::exact(4L, prec);
    g.chi1 = mpq_class(1, static_cast<unsigned long>(u.mu));
    g.weight = mpq_class(4) * mpq_class(inv.h) * mpq_class(inv.lambda_s) *
               mpq_class(static_cast<unsigned long>(u.mu)) / mpq_class(inv.kappa_val);
    g.weight.canonicalize();
    return g;
}

CorrespondenceReport check_correspondence(const OrderHandle& order, const UnitData& u,
                                          const OrderCensusInvariants& inv, bool is_cc,
                                          bool throw_on_failure) {
    CorrespondenceReport rep;
    auto record = [&](const std::string& name, bool ok) {
        rep.checks.emplace_back(name, ok);
        if (!ok) rep.all_ok = false;
    };

    // det = +1 on the regular representation
    bool det_ok = true;
    try {
        unit_matrix(order, u.fund_unit);
    } catch (const error&) {
        det_ok = false;
    }
    record("det(unit_matrix) = 1", det_ok);

    bool weak = weakly_neat(order, u);
    record("weakly neat iff C^c", weak == is_cc);

    if (is_cc && !u.angles_exact_degenerate) {
        GeodesicClass g;
        bool n_ok = true;
        try {
            g = geodesic_data(order, u, inv);
        } catch (const error&) {
            n_ok = false;
        }
        record("N(gamma) = e^{4 R} (rel 1e-9)", n_ok);
        if (n_ok) {
            bool tr_ok = g.trace_sigma_tilde.is_positive() &&
                         g.trace_sigma_tilde.upper_double() <= 16.0 + 1e-9;
            record("tr sigma-tilde in (0, 16]", tr_ok);
            bool angle_ok = true;
            if (inv.kappa_val > 1) {
                double sum = g.theta.mid_double() + g.phi.mid_double();
                double diff = g.theta.mid_double() - g.phi.mid_double();
                double d = std::min(angle_lattice_distance(sum), angle_lattice_distance(diff));
                double width = 2 * (g.theta.rad_double() + g.phi.rad_double());
                angle_ok = (d <= 1e-8 + width);
            }
            record("kappa > 1 implies angle condition", angle_ok);
        }
    } else {
        record("classification gate (C^r orders are excluded upstream)", !is_cc || det_ok);
    }

    if (!rep.all_ok && throw_on_failure) {
        std::string names;
        for (auto& [n, ok] : rep.checks)
            if (!ok) names += (names.empty() ? "" : "; ") + n;
        throw correspondence_violation_error("check_correspondence failed: " + names);
    }
    return rep;
}

}  // namespace qc
