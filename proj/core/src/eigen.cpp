#include "mosweb/eigen.hpp"

#include <algorithm>

namespace mosweb {

namespace {

// arg ascending over the open upper half plane (b > 0): a/b descending
bool arg_less_upper(const gaussian_rational& x, const gaussian_rational& y) {
    // compare a1/b1 > a2/b2 with b1,b2 > 0
    return cmp(x.re() * y.im(), y.re() * x.im()) > 0;
}

complex_interval enclose_sqrt(const gaussian_rational& mu, bool real_positive, mpfr_prec_t prec) {
    if (real_positive) {
        real_interval r = real_interval::from_rational(mu.re(), prec).sqrt();
        return {r, real_interval::exact_zero()};
    }
    return complex_interval::from_gaussian(mu, prec).sqrt();
}

}  // namespace

eigen_data classify_eigenvalues_list(std::vector<gaussian_rational> eigs, mpfr_prec_t prec) {
    const int n = (int)eigs.size();
    if (n == 0 || n % 2) throw structural_error("classify_eigenvalues: need 2p eigenvalues");
    const int p = n / 2;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (eigs[i] == eigs[j])
                throw condition_error("condition E", "repeated eigenvalues of S");
    gaussian_rational one(1);
    for (auto& k : eigs) {
        if (k.is_zero()) throw structural_error("classify_eigenvalues: zero eigenvalue");
        if (k == one || k == -one)
            throw condition_error("condition E",
                                  "eigenvalue +-1 is excluded for involutive pairs (Lemma on "
                                  "realizability of linear families)");
        if (k.is_real() && sgn(k.re()) < 0)
            throw condition_error("reality",
                                  "negative real eigenvalue cannot occur for a family with "
                                  "anti-holomorphic symmetry and distinct eigenvalues");
    }
    auto contains = [&](const gaussian_rational& v) {
        for (auto& k : eigs)
            if (k == v) return true;
        return false;
    };
    for (auto& k : eigs) {
        if (!contains(k.inv()))
            throw structural_error("eigenvalue set not closed under k -> 1/k");
        if (!contains(k.conj().inv()))
            throw structural_error("eigenvalue set not closed under k -> 1/conj(k)");
    }

    std::vector<gaussian_rational> ell, hyp, cpx;
    for (auto& k : eigs) {
        if (k.is_real()) {
            if (cmp(k.re(), rational(1)) > 0) ell.push_back(k);
        } else if (k.norm2() == 1) {
            if (sgn(k.im()) > 0) hyp.push_back(k);
        } else {
            if (cmp(k.norm2(), rational(1)) > 0 && sgn(k.im()) > 0) cpx.push_back(k);
        }
    }
    typing_info ty{(int)ell.size(), (int)hyp.size(), (int)cpx.size()};
    if (ty.p() != p)
        throw structural_error("eigenvalues do not split into elliptic/hyperbolic/complex blocks");

    std::sort(ell.begin(), ell.end(),
              [](const gaussian_rational& a, const gaussian_rational& b) { return cmp(a.re(), b.re()) < 0; });
    std::sort(hyp.begin(), hyp.end(), arg_less_upper);
    std::sort(cpx.begin(), cpx.end(), [](const gaussian_rational& a, const gaussian_rational& b) {
        if (arg_less_upper(a, b)) return true;
        if (arg_less_upper(b, a)) return false;
        return gaussian_rational::cmp_norm2(a, b) < 0;
    });

    eigen_data ed;
    ed.p = p;
    ed.typing = ty;
    ed.mu.resize(p);
    ed.lambda.resize(p);
    ed.lambda_enclosure.resize(p);
    for (int e = 0; e < ty.e_star; ++e) ed.mu[e] = ell[e];
    for (int h = 0; h < ty.h_star; ++h) ed.mu[ty.e_star + h] = hyp[h];
    for (int s = 0; s < ty.s_star; ++s) {
        ed.mu[ty.e_star + ty.h_star + s] = cpx[s];
        ed.mu[ty.e_star + ty.h_star + ty.s_star + s] = cpx[s].conj().inv();
    }

    for (int j = 0; j < p; ++j) {
        const gaussian_rational& mu = ed.mu[j];
        switch (ty.type_of(j)) {
            case block_type::elliptic: {
                auto r = sqrt_rational_exact(mu.re());
                if (r) ed.lambda[j] = gaussian_rational(*r);
                ed.lambda_enclosure[j] = enclose_sqrt(mu, true, prec);
                break;
            }
            default: {
                if (ty.is_s_high(j)) {
                    int s = ty.partner(j);
                    if (ed.lambda[s]) ed.lambda[j] = ed.lambda[s]->conj().inv();
                    ed.lambda_enclosure[j] = ed.lambda_enclosure[s].conj().inv();
                } else {
                    auto w = sqrt_exact(mu);  // principal branch, arg in (0, pi/2) here
                    if (w) ed.lambda[j] = *w;
                    ed.lambda_enclosure[j] = enclose_sqrt(mu, false, prec);
                }
                break;
            }
        }
        if (!ed.lambda[j]) ed.lambda_exact = false;
    }
    return ed;
}

eigen_data classify_eigenvalues(const matrix<gaussian_rational>& S, mpfr_prec_t prec) {
    gr_poly chi = char_poly(S);
    if (!poly_squarefree(chi))
        throw condition_error("condition E", "S is not diagonalizable with distinct eigenvalues");
    auto roots = gaussian_roots(chi);
    if (!roots)
        throw not_representable_error(
            "eigenvalues of S are not Gaussian rational; use the interval backend");
    return classify_eigenvalues_list(std::move(*roots), prec);
}

eigen_data_interval classify_eigenvalues(const matrix<complex_interval>& S, mpfr_prec_t prec) {
    // interval char poly with exact-coefficient root machinery is unavailable;
    // certify via midpoint polynomial only when coefficient boxes are thin
    std::vector<complex_interval> chi = char_poly(S);
    // degenerate-width check: fall back to exact machinery through rational endpoints
    gr_poly mid;
    for (auto& c : chi) {
        if (!(c.re().width().is_zero() && c.im().width().is_zero()))
            throw undetermined_error(
                "interval classify_eigenvalues: wide characteristic polynomial coefficients");
        mpq_class re, im;
        mpfr_get_q(re.get_mpq_t(), c.re().lo().get());
        mpfr_get_q(im.get_mpq_t(), c.im().lo().get());
        mid.push_back(gaussian_rational(rational(re), rational(im)));
    }
    auto encl = certified_roots(mid, prec);
    const int n = (int)encl.size();
    if (n % 2) throw structural_error("classify_eigenvalues: odd spectrum");
    const int p = n / 2;
    // partition: real positive > 1 (exact-zero imaginary), else upper-half with |mu| > 1
    std::vector<complex_interval> ell, cpx;
    real_interval one = real_interval::from_long(1, prec);
    for (auto& k : encl) {
        if (k.im().is_exact_zero()) {
            if (definitely(less(one, k.re()))) ell.push_back(k);
        } else if (definitely(k.im().sign_is(1)) && definitely(less(one, k.norm2()))) {
            cpx.push_back(k);
        } else if (k.im().contains_zero() || k.norm2().contains(rational(1))) {
            throw undetermined_error("interval classify_eigenvalues: typing not certifiable");
        }
    }
    eigen_data_interval ed;
    ed.p = p;
    ed.typing = {(int)ell.size(), 0, (int)cpx.size()};
    if (ed.typing.p() != p)
        throw undetermined_error("interval classify_eigenvalues: blocks not certifiable");
    for (auto& m : ell) {
        ed.mu.push_back(m);
        ed.lambda.push_back(complex_interval(m.re().sqrt(), real_interval::exact_zero()));
    }
    for (auto& m : cpx) {
        ed.mu.push_back(m);
        ed.lambda.push_back(m.sqrt());
    }
    for (auto& m : cpx) {
        ed.mu.push_back(m.conj().inv());
        ed.lambda.push_back(m.sqrt().conj().inv());
    }
    return ed;
}

}  // namespace mosweb
