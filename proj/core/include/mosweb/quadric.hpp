#pragma once

#include "mosweb/matrix_b.hpp"
#include "mosweb/series_map.hpp"

namespace mosweb {

using gseries = series<gaussian_rational>;
using gmap = series_map<gaussian_rational>;

// Real submanifold z_{p+j} = E_j(z', conj z'), complexified to (z', w').
// Variables of each E_j: (z'_1..z'_p, w'_1..w'_p).
struct manifold_spec {
    int p = 0;
    int trunc = 2;
    std::vector<gseries> E;
};

void validate_manifold(const manifold_spec& m);

// quadratic data: E_j ~ z^T P_j z + z^T H_j w + w^T Q_j w (P_j is inert)
struct quad_forms {
    std::vector<gmat> H, Q;
};
quad_forms quadratic_parts(const manifold_spec& m);

struct deck_result {
    linear_family family;            // the p hyperplane-fixing generators + rho0
    std::vector<gmat> all_decks;     // all 2^p deck transformations
};
// linear deck transformations of the quadratic part; condition D / B failures throw
deck_result deck_transformations_quadratic(const manifold_spec& m);

// mu_s = conj(gamma_s)^{-1} - 1 and its quadruple + normalized representative
struct complex_type_result {
    gaussian_rational mu;
    std::vector<gaussian_rational> quadruple;  // mu, 1/mu, 1/conj mu, conj mu
    gaussian_rational normalized;              // |mu| >= 1, Im >= 0 member
};
complex_type_result complex_type_mu(const gaussian_rational& gamma_s);

// gamma vector (length p) from classified eigen data; exact
std::vector<gaussian_rational> gamma_from_lambda(const eigen_data& ed);
// interval variant used when lambda is not Gaussian rational
std::vector<complex_interval> gamma_from_lambda_interval(
    const std::vector<complex_interval>& lambda, const typing_info& ty);

struct quadric_nf {
    typing_info typing;
    std::vector<gaussian_rational> mu, lambda;
    std::vector<gaussian_rational> gamma;  // all p entries, s-high = 1 - conj(s-low)
    gmat bhat;                             // canonical extended Bishop invariant
    manifold_spec equations;               // Q_{Bhat, gamma}
    // audit trail
    gmat basis_change;   // linear normalization basis
    gmat b_raw;          // B before passing to Bhat
    b_witness bhat_witness;
};

// defining equations of Q_{Bhat,gamma}
manifold_spec build_qbg(const gmat& bhat, const std::vector<gaussian_rational>& gamma,
                        const typing_info& ty, int trunc);

quadric_nf classify_quadric(const manifold_spec& m);

// Nonlinear involution family on C^{2p}: p commuting holomorphic involutions
// and the anti-holomorphic rho, as truncated maps.
struct involution_family {
    int p = 0;
    std::vector<gmap> tau1j;
    gmap rho;  // anti flavor

    gmap tau1() const;
    gmap tau2() const;
    gmap sigma() const;
};
void validate_involution_family(const involution_family& fam);

struct realize_result {
    manifold_spec manifold;
    gmap linearizer;  // chi with chi tau_1j chi^{-1} = Z_j
    gmap phi;         // (z', w') = (A, conj(A o rho))
};
// realization of a family as a (formal) submanifold, Moser-Webster style
realize_result realize(const involution_family& fam, int trunc);
realize_result realize(const linear_family& fam, int trunc);
// realization with a caller-supplied conjugation to the Z_j model
realize_result realize_with_linearizer(const involution_family& fam, const gmap& chi);
// averaging map A with A o tau_g = L(tau_g) o A over the group generated by gens
gmap group_average(const std::vector<gmap>& gens, int trunc);

involution_family to_involution_family(const linear_family& fam, int trunc);

}  // namespace mosweb
