#ifndef QCENSUS_ERRORS_HPP
#define QCENSUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qc {

// Base class for all failures raised by the library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violations: p not prime, |S| odd, non-squarefree input, ...
struct invalid_argument_error : error {
    using error::error;
};

// make_field on a reducible polynomial.
struct not_a_field_error : error {
    using error::error;
};

// make_field on degree outside {2,4}.
struct unsupported_degree_error : error {
    using error::error;
};

// Certified numerics ran out of precision (cap 8192 bits).
struct precision_exhausted_error : error {
    using error::error;
};

// lambda_S on a field where some p in S is decomposed.
struct field_not_in_cs_error : error {
    using error::error;
};

// Two independent evaluation routes disagreed beyond tolerance.
struct numeric_inconsistency_error : error {
    using error::error;
};

// Unit search gave up; carries the best regulator lower bound found.
struct search_budget_exhausted_error : error {
    double regulator_lower_bound;
    search_budget_exhausted_error(const std::string& what, double rlb)
        : error(what), regulator_lower_bound(rlb) {}
};

// Class-group relation search gave up; h_divisor divides the true h.
struct inconclusive_error : error {
    unsigned long h_divisor;
    inconclusive_error(const std::string& what, unsigned long hd)
        : error(what), h_divisor(hd) {}
};

// geodesic_data on a torsion unit (a = 1).
struct not_a_geodesic_error : error {
    using error::error;
};

// Eigenvalues of a unit matrix do not form two conjugate pairs.
struct shape_violation_error : error {
    using error::error;
};

// One of the named correspondence identities failed; what() names it.
struct correspondence_violation_error : error {
    using error::error;
};

// CSV/schema violations; carries the 1-based line number.
struct parse_error : error {
    long line;
    parse_error(const std::string& what, long line_no) : error(what), line(line_no) {}
};

// Ingested row disagrees with a computed row.
struct data_conflict_error : error {
    using error::error;
};

// A supposedly impossible state; signals a bug, not bad input.
struct internal_error : error {
    using error::error;
};

}  // namespace qc

#endif
