#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "mosweb/rational.hpp"

namespace mosweb {

// Thin RAII wrapper around mpfr_t. Precision is fixed per value.
class bigfloat {
public:
    explicit bigfloat(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    bigfloat(const bigfloat& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    bigfloat(bigfloat&& o) noexcept {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_swap(x_, o.x_);
    }
    bigfloat& operator=(const bigfloat& o) {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    bigfloat& operator=(bigfloat&& o) noexcept {
        if (this != &o) mpfr_swap(x_, o.x_);
        return *this;
    }
    ~bigfloat() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }

    static bigfloat from_rational(const rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        bigfloat r(prec);
        mpfr_set_q(r.x_, q.get_mpq_t(), rnd);
        return r;
    }
    static bigfloat from_long(long v, mpfr_prec_t prec) {
        bigfloat r(prec);
        mpfr_set_si(r.x_, v, MPFR_RNDN);
        return r;
    }

    int sign() const { return mpfr_sgn(x_); }
    bool is_zero() const { return mpfr_zero_p(x_); }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

    // Decimal string, rounded in the given direction; exact enough to re-enclose.
    std::string str(mpfr_rnd_t rnd, size_t digits = 0) const;

private:
    mpfr_t x_;
};

int cmp(const bigfloat& a, const bigfloat& b);

}  // namespace mosweb
