#ifndef QCENSUS_BALL_HPP
#define QCENSUS_BALL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "qcensus/errors.hpp"

namespace qc {

/* Real ball: mpfr midpoint at a given working precision plus a nonnegative
 * mpfr radius.  Every operation widens the radius so the enclosure of the
 * true value is preserved (radius math runs with upward rounding). */
class RBall {
  public:
    explicit RBall(mpfr_prec_t prec = 128);
    RBall(const RBall& o);
    RBall(RBall&& o) noexcept;
    RBall& operator=(const RBall& o);
    RBall& operator=(RBall&& o) noexcept;
    ~RBall();

    static RBall exact(long v, mpfr_prec_t prec);
    static RBall exact(const mpz_class& v, mpfr_prec_t prec);
    static RBall exact(const mpq_class& v, mpfr_prec_t prec);
    static RBall from_double(double v, mpfr_prec_t prec);
    static RBall pi(mpfr_prec_t prec);

    mpfr_prec_t prec() const { return prec_; }
    double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }
    double upper_double() const;
    double lower_double() const;
    mpq_class mid_rational() const;

    bool contains_zero() const;
    bool is_positive() const;  // certified: lower bound > 0
    bool is_negative() const;
    // |mid| - rad as a double (clamped at 0), a certified lower bound on |x|
    double abs_lower() const;

    RBall operator-() const;
    RBall operator+(const RBall& o) const;
    RBall operator-(const RBall& o) const;
    RBall operator*(const RBall& o) const;
    RBall operator/(const RBall& o) const;  // requires o certified nonzero
    RBall abs() const;
    RBall log() const;   // requires certified positive
    RBall exp() const;
    RBall cos() const;
    RBall sin() const;
    RBall sqrt() const;  // requires certified nonnegative-ish (lower >= 0)
    RBall pow_si(long e) const;

    // midpoint +/- radius as new exact balls of radius 0 (for splitting)
    std::string str(int digits = 20) const;

    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }
    mpfr_ptr mid_mut() { return mid_; }
    mpfr_ptr rad_mut() { return rad_; }
    void bump_ulp();  // add one ulp of the midpoint to the radius

  private:
    mpfr_prec_t prec_;
    mpfr_t mid_;
    mpfr_t rad_;
};

/* Complex ball as a rectangle: independent real and imaginary balls. */
class CBall {
  public:
    explicit CBall(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    CBall(RBall r, RBall i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return re.prec(); }

    CBall operator+(const CBall& o) const { return {re + o.re, im + o.im}; }
    CBall operator-(const CBall& o) const { return {re - o.re, im - o.im}; }
    CBall operator-() const { return {-re, -im}; }
    CBall operator*(const CBall& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CBall operator/(const CBall& o) const;
    CBall conj() const { return {re, -im}; }
    CBall pow_ui(unsigned long e) const;

    RBall abs() const;
    RBall abs_sq() const { return re * re + im * im; }
    /* Principal argument; requires a certified enclosure avoiding the branch
     * cut (ball must not straddle the negative real axis or contain 0). */
    RBall arg() const;

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    std::string str(int digits = 20) const;

    RBall re, im;
};

}  // namespace qc

#endif
