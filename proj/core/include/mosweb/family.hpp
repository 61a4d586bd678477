#pragma once

#include "mosweb/pd.hpp"
#include "mosweb/quadric.hpp"

namespace mosweb {

// nonlinear deck transformations: extend the linear generators of the
// quadratic part degree by degree through E o tau = E
involution_family deck_transformations(const manifold_spec& m);

// model pieces in the normalized coordinates: W = B_*^{-1} o E_N with
// E_N(xi, eta) = (xi + Lambda(xi eta) eta, -Lambda^{-1}(xi eta) xi + eta)
gmap e_n_map(const std::vector<gseries>& lambda1, int map_trunc);
gmap w_map(const std::vector<gseries>& lambda1, const gmat& b1, int map_trunc);
// tau-hat_{1j} = W^{-1} o Z_j o W
std::vector<gmap> model_family(const std::vector<gseries>& lambda1, const gmat& b1, int map_trunc);

// Phi1 in C(tau1-hat), tangent to identity, with Phi1^{-1} tau_{1j} Phi1 = tau-hat_{1j};
// requires tau1 = tau-hat1 exactly (sigma stage already applied)
gmap linearize_family(const involution_family& fam, const std::vector<gmap>& model);

struct family_decomposition {
    gmap phi1;  // in C^c(tau-hat_{11..1p})
    gmap phi0;  // in C(tau-hat_{11..1p})
};
family_decomposition family_centralizer_decompose(const gmap& phi,
                                                  const std::vector<gseries>& lambda1,
                                                  const gmat& b1);

struct family_nf {
    int p = 0;
    typing_info typing;
    std::vector<gseries> lambda1hat;  // of the composite tau-hat_1
    std::vector<gseries> Mhat;
    gmat b1;
    gmap psi_canonical;               // C^c-factor, epsilon-canonical representative
    std::vector<std::vector<int>> eps_group;  // automorphisms among admissible epsilon
    std::vector<gmap> model;          // the tau-hat_{1j}
};

// unique normal form of a family whose sigma-part is already normalized
family_nf family_normal_form(const involution_family& fam);

// admissible sign vectors commuting with psi (and with rho via eps_{s+s*} = eps_s)
std::vector<std::vector<int>> automorphism_group(const gmap& psi, const typing_info& ty);

// R_eps psi R_eps as a coefficient transform
gmap r_eps_conjugate(const gmap& psi, const std::vector<int>& eps);

// canonical representative of the R_eps-orbit of psi
gmap eps_canonicalize(const gmap& psi, const typing_info& ty);

// manifold normal form: realization along the canonical linearizer W o psi^{-1}
realize_result manifold_normal_form(const family_nf& nf, const gmap& rho, int trunc);

// equality of two family normal forms (exact)
bool family_nf_equal(const family_nf& a, const family_nf& b);

}  // namespace mosweb
