#pragma once

#include "mosweb/interval.hpp"
#include "mosweb/rational.hpp"

namespace mosweb {

// Unifies the two coefficient backends behind the generic series code.
template <class K>
struct scalar_traits;

template <>
struct scalar_traits<gaussian_rational> {
    static constexpr bool exact = true;
    using real_type = rational;

    static gaussian_rational zero() { return {}; }
    static gaussian_rational one() { return gaussian_rational(1); }
    static gaussian_rational imag_unit(mpfr_prec_t = 0) { return gaussian_rational::i(); }
    static gaussian_rational from_long(long v, mpfr_prec_t = 0) { return gaussian_rational(v); }
    static gaussian_rational from_gaussian(const gaussian_rational& q, mpfr_prec_t = 0) { return q; }
    static gaussian_rational conj(const gaussian_rational& x) { return x.conj(); }
    // prune rule: drop true zeros only
    static bool prune(const gaussian_rational& x) { return x.is_zero(); }
    // residues: must vanish identically
    static bool residue_ok(const gaussian_rational& x) { return x.is_zero(); }
    static bool can_divide(const gaussian_rational& x) { return !x.is_zero(); }
};

template <>
struct scalar_traits<complex_interval> {
    static constexpr bool exact = false;
    using real_type = real_interval;

    static complex_interval zero() { return {}; }
    static complex_interval one() { return complex_interval(1); }
    static complex_interval imag_unit(mpfr_prec_t prec = 256) { return complex_interval::i(prec); }
    static complex_interval from_long(long v, mpfr_prec_t prec = 256) {
        return complex_interval::from_gaussian(gaussian_rational(v), prec);
    }
    static complex_interval from_gaussian(const gaussian_rational& q, mpfr_prec_t prec = 256) {
        return complex_interval::from_gaussian(q, prec);
    }
    static complex_interval conj(const complex_interval& x) { return x.conj(); }
    // prune rule: only certified zero-width zeros may be dropped
    static bool prune(const complex_interval& x) { return x.is_zero(); }
    // residues: certified to contain zero
    static bool residue_ok(const complex_interval& x) { return x.contains_zero(); }
    static bool can_divide(const complex_interval& x) { return !x.contains_zero(); }
};

}  // namespace mosweb
