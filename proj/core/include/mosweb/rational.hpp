#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "mosweb/errors.hpp"
#include "mosweb/trilean.hpp"

namespace mosweb {

using rational = mpq_class;

rational rational_from_string(const std::string& s);
std::string rational_to_string(const rational& q);

// Exact square root in Q, if it exists.
std::optional<rational> sqrt_rational_exact(const rational& q);

// Coefficient field Q(i): exact Gaussian rationals.
class gaussian_rational {
public:
    gaussian_rational() : re_(0), im_(0) {}
    gaussian_rational(long n) : re_(n), im_(0) {}
    gaussian_rational(rational re) : re_(std::move(re)), im_(0) {}
    gaussian_rational(rational re, rational im) : re_(std::move(re)), im_(std::move(im)) {}
    gaussian_rational(long n, long d) : re_(rational(n, d)), im_(0) { re_.canonicalize(); }

    static gaussian_rational i() { return {rational(0), rational(1)}; }

    const rational& re() const { return re_; }
    const rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    gaussian_rational conj() const { return {re_, -im_}; }
    rational norm2() const { return re_ * re_ + im_ * im_; }

    gaussian_rational operator-() const { return {-re_, -im_}; }

    gaussian_rational& operator+=(const gaussian_rational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    gaussian_rational& operator-=(const gaussian_rational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    gaussian_rational& operator*=(const gaussian_rational& o) {
        rational r = re_ * o.re_ - im_ * o.im_;
        rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    gaussian_rational& operator/=(const gaussian_rational& o) {
        if (o.is_zero()) throw structural_error("gaussian_rational: division by zero");
        rational n = o.norm2();
        rational r = (re_ * o.re_ + im_ * o.im_) / n;
        rational i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend gaussian_rational operator+(gaussian_rational a, const gaussian_rational& b) { return a += b; }
    friend gaussian_rational operator-(gaussian_rational a, const gaussian_rational& b) { return a -= b; }
    friend gaussian_rational operator*(gaussian_rational a, const gaussian_rational& b) { return a *= b; }
    friend gaussian_rational operator/(gaussian_rational a, const gaussian_rational& b) { return a /= b; }
    friend bool operator==(const gaussian_rational& a, const gaussian_rational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const gaussian_rational& a, const gaussian_rational& b) { return !(a == b); }

    gaussian_rational inv() const {
        gaussian_rational one(1);
        return one /= *this;
    }

    // |a|^2 vs |b|^2 exact comparisons; moduli themselves may be irrational.
    static int cmp_norm2(const gaussian_rational& a, const gaussian_rational& b) {
        return cmp(a.norm2(), b.norm2());
    }

    std::string str() const;

private:
    rational re_, im_;
};

// Exact complex square root, when it stays in Q(i).
std::optional<gaussian_rational> sqrt_exact(const gaussian_rational& z);

// Deterministic total order used only for canonical tie-breaking
// (re, then im; numeric order on Q).
int tiebreak_cmp(const gaussian_rational& a, const gaussian_rational& b);

}  // namespace mosweb
