#pragma once

#include <optional>
#include <vector>

#include "mosweb/eigen.hpp"

namespace mosweb {

using gmat = matrix<gaussian_rational>;

// Family of p commuting linear involutions on C^{2p} plus the
// anti-holomorphic involution rho(v) = R * conj(v).
struct linear_family {
    int p = 0;
    std::vector<gmat> t1j;  // 2p x 2p
    gmat rho;               // core matrix R

    gmat t1() const;
    gmat t2() const;  // rho t1 rho
    gmat s() const;   // t1 t2
};

// conjugate of an anti-linear map: matrix of rho' = A^{-1} rho A is A^{-1} R conj(A)
gmat antilinear_conjugate(const gmat& r_core, const gmat& basis);

// throws on violated invariants (involutivity, commutativity, hyperplane
// fixed-point sets, transversality, the invariant-linear-form condition)
void validate_family(const linear_family& fam);

// standard normal-form matrices for given eigen data / typing
gmat that1_matrix(const eigen_data& ed);
gmat that2_matrix(const eigen_data& ed);
gmat shat_matrix(const eigen_data& ed);
gmat rhohat_matrix(const typing_info& ty);

struct linear_normal_form {
    eigen_data eigen;
    gmat basis;      // columns: chosen eigenvectors, (xi | eta) order
    gmat basis_inv;
    linear_family normalized;  // the family conjugated into normal coordinates
};

linear_normal_form normalize_linear(const linear_family& fam, mpfr_prec_t prec = 256);

// E_Lambda = 1/2 [[I, -L],[L^{-1}, I]] and B_* = diag(I, B)
gmat e_lambda_matrix(const std::vector<gaussian_rational>& lambda);
gmat b_star_matrix(const gmat& b);
gmat z_j_matrix(int p, int j);

// recover B with T_1j = E B_* Z_j B_*^{-1} E^{-1}; requires normalized family
gmat extract_b(const linear_family& fam_normalized, const eigen_data& ed);

// rebuild the family from (lambda, B)
std::vector<gmat> family_from_b(const std::vector<gaussian_rational>& lambda, const gmat& b);

// Example-style quadric families driven by an invertible matrix K:
// T1 = [[0,K],[K^{-1},0]], rho = swap-conjugation. Rejects det(K - conj(K)^{-1}) = 0.
linear_family jordan_quadric(const gmat& K);

}  // namespace mosweb
