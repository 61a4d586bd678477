#pragma once

#include <algorithm>
#include <string>

#include "mosweb/bigfloat.hpp"
#include "mosweb/rational.hpp"
#include "mosweb/trilean.hpp"

namespace mosweb {

// Closed real interval [lo, hi] with outward-rounded arithmetic.
class real_interval {
public:
    real_interval() : lo_(2), hi_(2) {}
    explicit real_interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}
    real_interval(bigfloat lo, bigfloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (mpfr_cmp(lo_.get(), hi_.get()) > 0) throw structural_error("interval: lo > hi");
    }

    static real_interval from_rational(const rational& q, mpfr_prec_t prec) {
        return {bigfloat::from_rational(q, prec, MPFR_RNDD),
                bigfloat::from_rational(q, prec, MPFR_RNDU)};
    }
    static real_interval from_long(long v, mpfr_prec_t prec) {
        return {bigfloat::from_long(v, prec), bigfloat::from_long(v, prec)};
    }
    static real_interval exact_zero() { return real_interval(); }

    const bigfloat& lo() const { return lo_; }
    const bigfloat& hi() const { return hi_; }
    mpfr_prec_t prec() const { return std::max(lo_.prec(), hi_.prec()); }

    bool is_exact_zero() const { return lo_.is_zero() && hi_.is_zero(); }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool contains(const rational& q) const {
        return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
    }

    trilean sign_is(int s) const {  // certified comparison of the value with 0
        if (s > 0) {
            if (lo_.sign() > 0) return trilean::yes;
            if (hi_.sign() <= 0) return trilean::no;
            return trilean::undetermined;
        }
        if (s < 0) {
            if (hi_.sign() < 0) return trilean::yes;
            if (lo_.sign() >= 0) return trilean::no;
            return trilean::undetermined;
        }
        if (is_exact_zero()) return trilean::yes;
        if (!contains_zero()) return trilean::no;
        return trilean::undetermined;
    }

    friend real_interval operator-(const real_interval& a) {
        real_interval r(a.prec());
        mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
        mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend real_interval operator+(const real_interval& a, const real_interval& b) {
        real_interval r(std::max(a.prec(), b.prec()));
        mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend real_interval operator-(const real_interval& a, const real_interval& b) {
        real_interval r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend real_interval operator*(const real_interval& a, const real_interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        // exact-zero short cut keeps structural zeros exact
        if (a.is_exact_zero() || b.is_exact_zero()) return real_interval(p);
        real_interval r(p);
        bigfloat t(p);
        const mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
        const mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
        bool first = true;
        for (auto av : as)
            for (auto bv : bs) {
                mpfr_mul(t.get(), av, bv, MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), av, bv, MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        return r;
    }

    real_interval recip() const {
        if (contains_zero()) throw undetermined_error("interval reciprocal: interval contains zero");
        real_interval r(prec());
        mpfr_ui_div(r.lo_.get(), 1, hi_.get(), MPFR_RNDD);
        mpfr_ui_div(r.hi_.get(), 1, lo_.get(), MPFR_RNDU);
        return r;
    }
    friend real_interval operator/(const real_interval& a, const real_interval& b) { return a * b.recip(); }

    real_interval sqr() const {
        real_interval r(prec());
        if (contains_zero()) {
            mpfr_set_zero(r.lo_.get(), 1);
            bigfloat t(prec());
            mpfr_sqr(t.get(), lo_.get(), MPFR_RNDU);
            mpfr_sqr(r.hi_.get(), hi_.get(), MPFR_RNDU);
            if (mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            return r;
        }
        return (*this) * (*this);
    }
    real_interval sqrt() const {
        if (lo_.sign() < 0) throw undetermined_error("interval sqrt of possibly negative value");
        real_interval r(prec());
        mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }
    real_interval exp() const {
        real_interval r(prec());
        mpfr_exp(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_exp(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }
    real_interval log() const {
        if (lo_.sign() <= 0) throw undetermined_error("interval log of possibly non-positive value");
        real_interval r(prec());
        mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }
    real_interval abs() const {
        if (lo_.sign() >= 0) return *this;
        if (hi_.sign() <= 0) return -*this;
        real_interval r(prec());
        mpfr_set_zero(r.lo_.get(), 1);
        bigfloat t(prec());
        mpfr_neg(t.get(), lo_.get(), MPFR_RNDU);
        if (mpfr_cmp(t.get(), hi_.get()) > 0)
            mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        else
            mpfr_set(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }

    real_interval pow_int(long e) const {
        if (e == 0) return from_long(1, prec());
        real_interval base = e > 0 ? *this : recip();
        unsigned long n = (unsigned long)(e > 0 ? e : -e);
        real_interval acc = from_long(1, prec());
        while (n) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    // certified a < b
    friend trilean less(const real_interval& a, const real_interval& b) {
        if (mpfr_cmp(a.hi_.get(), b.lo_.get()) < 0) return trilean::yes;
        if (mpfr_cmp(a.lo_.get(), b.hi_.get()) >= 0) return trilean::no;
        return trilean::undetermined;
    }
    friend trilean less_eq(const real_interval& a, const real_interval& b) {
        if (mpfr_cmp(a.hi_.get(), b.lo_.get()) <= 0) return trilean::yes;
        if (mpfr_cmp(a.lo_.get(), b.hi_.get()) > 0) return trilean::no;
        return trilean::undetermined;
    }

    real_interval widen_to(const real_interval& o) const {  // hull
        real_interval r(std::max(prec(), o.prec()));
        mpfr_min(r.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
        mpfr_max(r.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
        return r;
    }

    bigfloat width() const {
        bigfloat w(prec());
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }
    bigfloat mid() const {
        bigfloat m(prec());
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_ui(m.get(), m.get(), 2, MPFR_RNDN);
        return m;
    }

    std::string str() const { return "[" + lo_.str(MPFR_RNDD) + ", " + hi_.str(MPFR_RNDU) + "]"; }

private:
    bigfloat lo_, hi_;
};

// Rectangular complex interval.
class complex_interval {
public:
    complex_interval() = default;
    complex_interval(real_interval re, real_interval im) : re_(std::move(re)), im_(std::move(im)) {}
    complex_interval(long v) : re_(real_interval::from_long(v, 64)), im_() {}

    static complex_interval from_gaussian(const gaussian_rational& q, mpfr_prec_t prec) {
        complex_interval z;
        z.re_ = real_interval::from_rational(q.re(), prec);
        z.im_ = q.im() == 0 ? real_interval::exact_zero() : real_interval::from_rational(q.im(), prec);
        return z;
    }
    static complex_interval i(mpfr_prec_t prec) {
        return {real_interval::exact_zero(), real_interval::from_long(1, prec)};
    }

    const real_interval& re() const { return re_; }
    const real_interval& im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    bool is_zero() const { return re_.is_exact_zero() && im_.is_exact_zero(); }  // certified zero
    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool is_real() const { return im_.is_exact_zero(); }

    complex_interval conj() const { return {re_, -im_}; }
    real_interval norm2() const { return re_.sqr() + im_.sqr(); }
    real_interval abs() const { return norm2().sqrt(); }

    complex_interval operator-() const { return {-re_, -im_}; }
    complex_interval& operator+=(const complex_interval& o) {
        re_ = re_ + o.re_;
        im_ = im_ + o.im_;
        return *this;
    }
    complex_interval& operator-=(const complex_interval& o) {
        re_ = re_ - o.re_;
        im_ = im_ - o.im_;
        return *this;
    }
    complex_interval& operator*=(const complex_interval& o) {
        real_interval r = re_ * o.re_ - im_ * o.im_;
        real_interval i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    complex_interval& operator/=(const complex_interval& o) {
        real_interval n = o.norm2();
        if (n.contains_zero()) throw undetermined_error("complex interval division: divisor may be zero");
        complex_interval num = *this * o.conj();
        re_ = num.re_ / n;
        im_ = num.im_ / n;
        return *this;
    }

    friend complex_interval operator+(complex_interval a, const complex_interval& b) { return a += b; }
    friend complex_interval operator-(complex_interval a, const complex_interval& b) { return a -= b; }
    friend complex_interval operator*(complex_interval a, const complex_interval& b) { return a *= b; }
    friend complex_interval operator/(complex_interval a, const complex_interval& b) { return a /= b; }

    complex_interval inv() const {
        complex_interval one(1);
        return one /= *this;
    }

    // principal square root; valid away from the branch cut when certifiable
    complex_interval sqrt() const {
        real_interval r = abs();
        if (definitely(re_.sign_is(1)) || (re_.sign_is(-1) == trilean::no && !im_.contains_zero())) {
            // stable: x = sqrt((|z|+a)/2), y = b/(2x)
            real_interval two = real_interval::from_long(2, prec());
            real_interval x = ((r + re_) / two).sqrt();
            real_interval y = im_ / (two * x);
            return {x, y};
        }
        if (definitely(re_.sign_is(-1))) {
            real_interval two = real_interval::from_long(2, prec());
            real_interval ymag = ((r - re_) / two).sqrt();
            if (definitely(im_.sign_is(-1))) {
                real_interval x = (-im_) / (two * ymag);
                return {x, -ymag};
            }
            if (definitely(im_.sign_is(1)) || im_.is_exact_zero()) {
                real_interval x = im_.is_exact_zero() ? real_interval::exact_zero() : im_ / (two * ymag);
                return {x, ymag};
            }
        }
        throw undetermined_error("complex interval sqrt: cannot certify branch");
    }

    std::string str() const { return re_.str() + " + " + im_.str() + "*i"; }

private:
    real_interval re_, im_;
};

}  // namespace mosweb
