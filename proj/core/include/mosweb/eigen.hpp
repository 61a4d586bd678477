#pragma once

#include <optional>
#include <vector>

#include "mosweb/matrix.hpp"
#include "mosweb/polyroots.hpp"

namespace mosweb {

enum class block_type { elliptic, hyperbolic, complex_pair };

// Block layout e < h < s < s+s_star with e_star + h_star + 2 s_star = p.
struct typing_info {
    int e_star = 0, h_star = 0, s_star = 0;

    int p() const { return e_star + h_star + 2 * s_star; }
    block_type type_of(int j) const {  // 0-based
        if (j < e_star) return block_type::elliptic;
        if (j < e_star + h_star) return block_type::hyperbolic;
        return block_type::complex_pair;
    }
    bool is_s_low(int j) const { return j >= e_star + h_star && j < e_star + h_star + s_star; }
    bool is_s_high(int j) const { return j >= e_star + h_star + s_star; }
    int partner(int j) const {  // s <-> s + s_star, identity elsewhere
        if (is_s_low(j)) return j + s_star;
        if (is_s_high(j)) return j - s_star;
        return j;
    }
    friend bool operator==(const typing_info&, const typing_info&) = default;
};

// Classified spectrum of S: mu_j, canonical square roots lambda_j, typing.
struct eigen_data {
    int p = 0;
    typing_info typing;
    std::vector<gaussian_rational> mu;                    // canonical order
    std::vector<std::optional<gaussian_rational>> lambda; // exact branch when representable
    std::vector<complex_interval> lambda_enclosure;       // always populated
    bool lambda_exact = true;

    const gaussian_rational& lambda_or_throw(int j) const {
        if (!lambda[j])
            throw not_representable_error(
                "lambda_" + std::to_string(j + 1) +
                " is not Gaussian rational; use the interval backend");
        return *lambda[j];
    }
};

// Characteristic polynomial, monic, ascending coefficients (Faddeev-LeVerrier).
template <class K>
std::vector<K> char_poly(const matrix<K>& a) {
    using traits = scalar_traits<K>;
    int n = a.rows();
    if (n != a.cols()) throw structural_error("char_poly: square matrix required");
    std::vector<K> c(n + 1, traits::zero());
    c[n] = traits::one();
    matrix<K> m(n, n);  // zero
    for (int k = 1; k <= n; ++k) {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        matrix<K> t = m;
        for (int i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
        m = a * t;
        K tr = traits::zero();
        for (int i = 0; i < n; ++i) tr += m(i, i);
        c[n - k] = -(tr / traits::from_long(k));
    }
    return c;
}

eigen_data classify_eigenvalues(const matrix<gaussian_rational>& S, mpfr_prec_t prec = 256);
eigen_data classify_eigenvalues_list(std::vector<gaussian_rational> eigs, mpfr_prec_t prec = 256);

// Interval variant: certified enclosures of mu/lambda or undetermined.
struct eigen_data_interval {
    int p = 0;
    typing_info typing;
    std::vector<complex_interval> mu;
    std::vector<complex_interval> lambda;
};
eigen_data_interval classify_eigenvalues(const matrix<complex_interval>& S, mpfr_prec_t prec);

}  // namespace mosweb
