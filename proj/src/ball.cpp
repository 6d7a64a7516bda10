#include "qcensus/ball.hpp"

#include <sstream>

namespace qc {

namespace {
constexpr mpfr_prec_t kRadPrec = 64;

// one ulp of x at precision prec, as an upward-rounded double step on rad
void add_ulp(mpfr_t rad, mpfr_srcptr x, mpfr_prec_t prec) {
    if (mpfr_zero_p(x) || !mpfr_number_p(x)) {
        // 2^-prec absolute fallback
        mpfr_t u;
        mpfr_init2(u, kRadPrec);
        mpfr_set_ui_2exp(u, 1, -static_cast<mpfr_exp_t>(prec), MPFR_RNDU);
        mpfr_add(rad, rad, u, MPFR_RNDU);
        mpfr_clear(u);
        return;
    }
    mpfr_t u;
    mpfr_init2(u, kRadPrec);
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(x) - prec + 1, MPFR_RNDU);
    mpfr_add(rad, rad, u, MPFR_RNDU);
    mpfr_clear(u);
}
}  // namespace

RBall::RBall(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(mid_, prec);
    mpfr_set_zero(mid_, 1);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(rad_, 1);
}

RBall::RBall(const RBall& o) : prec_(o.prec_) {
    mpfr_init2(mid_, prec_);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

RBall::RBall(RBall&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(mid_, prec_);
    mpfr_swap(mid_, o.mid_);
    mpfr_init2(rad_, kRadPrec);
    mpfr_swap(rad_, o.rad_);
}

RBall& RBall::operator=(const RBall& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(mid_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
    return *this;
}

RBall& RBall::operator=(RBall&& o) noexcept {
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
    std::swap(prec_, o.prec_);
    return *this;
}

RBall::~RBall() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

void RBall::bump_ulp() { add_ulp(rad_, mid_, prec_); }

RBall RBall::exact(long v, mpfr_prec_t prec) {
    RBall r(prec);
    mpfr_set_si(r.mid_, v, MPFR_RNDN);
    return r;
}

RBall RBall::exact(const mpz_class& v, mpfr_prec_t prec) {
    RBall r(prec);
    if (mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN) != 0) r.bump_ulp();
    return r;
}

RBall RBall::exact(const mpq_class& v, mpfr_prec_t prec) {
    RBall r(prec);
    if (mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN) != 0) r.bump_ulp();
    return r;
}

RBall RBall::from_double(double v, mpfr_prec_t prec) {
    RBall r(prec);
    mpfr_set_d(r.mid_, v, MPFR_RNDN);
    return r;
}

RBall RBall::pi(mpfr_prec_t prec) {
    RBall r(prec);
    mpfr_const_pi(r.mid_, MPFR_RNDN);
    r.bump_ulp();
    return r;
}

double RBall::upper_double() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_add(t, mid_, rad_, MPFR_RNDU);
    double d = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return d;
}

double RBall::lower_double() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_sub(t, mid_, rad_, MPFR_RNDD);
    double d = mpfr_get_d(t, MPFR_RNDD);
    mpfr_clear(t);
    return d;
}

mpq_class RBall::mid_rational() const {
    if (!mpfr_number_p(mid_)) throw internal_error("mid_rational of non-finite ball");
    if (mpfr_zero_p(mid_)) return mpq_class(0);
    mpf_t f;
    mpf_init2(f, prec_);
    mpfr_get_f(f, mid_, MPFR_RNDN);
    mpq_class q;
    mpq_set_f(q.get_mpq_t(), f);
    mpf_clear(f);
    return q;
}

bool RBall::contains_zero() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, mid_, MPFR_RNDD);
    bool in = mpfr_cmp(a, rad_) <= 0;
    mpfr_clear(a);
    return in;
}

bool RBall::is_positive() const {
    if (mpfr_sgn(mid_) <= 0) return false;
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_set(a, mid_, MPFR_RNDD);
    bool pos = mpfr_cmp(a, rad_) > 0;
    mpfr_clear(a);
    return pos;
}

bool RBall::is_negative() const { return (-*this).is_positive(); }

double RBall::abs_lower() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, mid_, MPFR_RNDD);
    mpfr_sub(a, a, rad_, MPFR_RNDD);
    double d = mpfr_get_d(a, MPFR_RNDD);
    mpfr_clear(a);
    return d < 0 ? 0.0 : d;
}

RBall RBall::operator-() const {
    RBall r(*this);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

RBall RBall::operator+(const RBall& o) const {
    RBall r(std::max(prec_, o.prec_));
    if (mpfr_add(r.mid_, mid_, o.mid_, MPFR_RNDN) != 0) {
        mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
        add_ulp(r.rad_, r.mid_, r.prec_);
    } else {
        mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
    }
    return r;
}

RBall RBall::operator-(const RBall& o) const { return *this + (-o); }

RBall RBall::operator*(const RBall& o) const {
    RBall r(std::max(prec_, o.prec_));
    int inexact = mpfr_mul(r.mid_, mid_, o.mid_, MPFR_RNDN);
    // rad = |a| rb + |b| ra + ra rb  (upward)
    mpfr_t aa, bb, t;
    mpfr_init2(aa, kRadPrec);
    mpfr_init2(bb, kRadPrec);
    mpfr_init2(t, kRadPrec);
    mpfr_abs(aa, mid_, MPFR_RNDU);
    mpfr_abs(bb, o.mid_, MPFR_RNDU);
    mpfr_mul(t, aa, o.rad_, MPFR_RNDU);
    mpfr_set(r.rad_, t, MPFR_RNDU);
    mpfr_mul(t, bb, rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, t, MPFR_RNDU);
    mpfr_mul(t, rad_, o.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, t, MPFR_RNDU);
    if (inexact) add_ulp(r.rad_, r.mid_, r.prec_);
    mpfr_clear(aa);
    mpfr_clear(bb);
    mpfr_clear(t);
    return r;
}

RBall RBall::operator/(const RBall& o) const {
    if (o.contains_zero()) throw precision_exhausted_error("ball division by enclosure of zero");
    // 1/o enclosure: mid = 1/om, rad <= ro / (|om| (|om| - ro))
    RBall inv(std::max(prec_, o.prec_));
    mpfr_ui_div(inv.mid_, 1, o.mid_, MPFR_RNDN);
    mpfr_t am, den, t;
    mpfr_init2(am, kRadPrec);
    mpfr_init2(den, kRadPrec);
    mpfr_init2(t, kRadPrec);
    mpfr_abs(am, o.mid_, MPFR_RNDD);
    mpfr_sub(den, am, o.rad_, MPFR_RNDD);   // |om| - ro > 0
    mpfr_mul(den, den, am, MPFR_RNDD);      // |om| (|om|-ro)
    mpfr_div(t, o.rad_, den, MPFR_RNDU);
    mpfr_set(inv.rad_, t, MPFR_RNDU);
    add_ulp(inv.rad_, inv.mid_, inv.prec_);
    mpfr_clear(am);
    mpfr_clear(den);
    mpfr_clear(t);
    return *this * inv;
}

RBall RBall::abs() const {
    RBall r(*this);
    mpfr_abs(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

RBall RBall::log() const {
    if (!is_positive()) throw precision_exhausted_error("log of ball not certified positive");
    RBall r(prec_);
    mpfr_log(r.mid_, mid_, MPFR_RNDN);
    // |log'| <= 1/lower
    mpfr_t low, t;
    mpfr_init2(low, kRadPrec);
    mpfr_init2(t, kRadPrec);
    mpfr_set(low, mid_, MPFR_RNDD);
    mpfr_sub(low, low, rad_, MPFR_RNDD);
    mpfr_div(t, rad_, low, MPFR_RNDU);
    mpfr_set(r.rad_, t, MPFR_RNDU);
    add_ulp(r.rad_, r.mid_, prec_);
    mpfr_clear(low);
    mpfr_clear(t);
    return r;
}

RBall RBall::exp() const {
    RBall r(prec_);
    mpfr_exp(r.mid_, mid_, MPFR_RNDN);
    // enclose via endpoints
    mpfr_t hi, lo;
    mpfr_init2(hi, kRadPrec);
    mpfr_init2(lo, kRadPrec);
    mpfr_add(hi, mid_, rad_, MPFR_RNDU);
    mpfr_exp(hi, hi, MPFR_RNDU);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    mpfr_exp(lo, lo, MPFR_RNDD);
    mpfr_sub(hi, hi, r.mid_, MPFR_RNDU);
    mpfr_sub(lo, r.mid_, lo, MPFR_RNDU);
    if (mpfr_cmp(hi, lo) >= 0)
        mpfr_set(r.rad_, hi, MPFR_RNDU);
    else
        mpfr_set(r.rad_, lo, MPFR_RNDU);
    add_ulp(r.rad_, r.mid_, prec_);
    mpfr_clear(hi);
    mpfr_clear(lo);
    return r;
}

RBall RBall::cos() const {
    RBall r(prec_);
    mpfr_cos(r.mid_, mid_, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);  // 1-Lipschitz
    add_ulp(r.rad_, r.mid_, prec_);
    // clamp into [-1-eps, 1+eps] implicitly fine
    return r;
}

RBall RBall::sin() const {
    RBall r(prec_);
    mpfr_sin(r.mid_, mid_, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);
    add_ulp(r.rad_, r.mid_, prec_);
    return r;
}

RBall RBall::sqrt() const {
    RBall r(prec_);
    if (mpfr_sgn(mid_) < 0) throw precision_exhausted_error("sqrt of negative midpoint");
    mpfr_sqrt(r.mid_, mid_, MPFR_RNDN);
    // rad: sqrt(m+r) - sqrt(m-r) upper via endpoints
    mpfr_t hi, lo;
    mpfr_init2(hi, kRadPrec);
    mpfr_init2(lo, kRadPrec);
    mpfr_add(hi, mid_, rad_, MPFR_RNDU);
    mpfr_sqrt(hi, hi, MPFR_RNDU);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
    mpfr_sqrt(lo, lo, MPFR_RNDD);
    mpfr_sub(hi, hi, lo, MPFR_RNDU);
    mpfr_set(r.rad_, hi, MPFR_RNDU);
    add_ulp(r.rad_, r.mid_, prec_);
    mpfr_clear(hi);
    mpfr_clear(lo);
    return r;
}

RBall RBall::pow_si(long e) const {
    if (e == 0) return RBall::exact(1L, prec_);
    RBall base = *this;
    bool invert = e < 0;
    unsigned long k = invert ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
    RBall acc = RBall::exact(1L, prec_);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    if (invert) return RBall::exact(1L, prec_) / acc;
    return acc;
}

std::string RBall::str(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, mid_);
    std::string out(s);
    mpfr_free_str(s);
    std::ostringstream os;
    os << out << " +/- " << rad_double();
    return os.str();
}

CBall CBall::operator/(const CBall& o) const {
    RBall d = o.abs_sq();
    CBall num = *this * o.conj();
    return {num.re / d, num.im / d};
}

CBall CBall::pow_ui(unsigned long e) const {
    CBall acc(RBall::exact(1L, prec()), RBall::exact(0L, prec()));
    CBall base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

RBall CBall::abs() const {
    // sqrt of abs_sq, radius handled by ball sqrt; but midpoint of abs_sq can
    // dip negative only if the ball contains 0 in both coordinates.
    RBall s = abs_sq();
    if (mpfr_sgn(s.mid()) < 0) {
        RBall z = RBall::exact(0L, prec());
        mpfr_t hi;
        mpfr_init2(hi, 64);
        mpfr_add(hi, s.mid(), s.rad(), MPFR_RNDU);
        if (mpfr_sgn(hi) >= 0) {
            mpfr_sqrt(hi, hi, MPFR_RNDU);
            mpfr_set(z.rad_mut(), hi, MPFR_RNDU);
        }
        mpfr_clear(hi);
        return z;
    }
    return s.sqrt();
}

RBall CBall::arg() const {
    // avoid the branch cut: require not (re <= 0 straddling im = 0)
    if (im.contains_zero() && !re.is_positive())
        throw precision_exhausted_error("arg enclosure touches branch cut");
    RBall r(prec());
    mpfr_atan2(r.mid_mut(), im.mid(), re.mid(), MPFR_RNDN);
    double low = abs().abs_lower();
    if (low <= 0) throw precision_exhausted_error("arg of enclosure of zero");
    // |d arg| <= (|d re| + |d im|) / |z|
    mpfr_t t, l;
    mpfr_init2(t, 64);
    mpfr_init2(l, 64);
    mpfr_add(t, re.rad(), im.rad(), MPFR_RNDU);
    mpfr_set_d(l, low, MPFR_RNDD);
    mpfr_div(t, t, l, MPFR_RNDU);
    mpfr_add(r.rad_mut(), r.rad(), t, MPFR_RNDU);
    r.bump_ulp();
    mpfr_clear(t);
    mpfr_clear(l);
    return r;
}

std::string CBall::str(int digits) const {
    return "(" + re.str(digits) + ", " + im.str(digits) + ")";
}

}  // namespace qc
