#pragma once

#include <optional>
#include <vector>

#include "mosweb/linear_family.hpp"

namespace mosweb {

// Witness of B' = diag(a)^{-1} * B * diag_nu(d):
// a is typing-constrained (real on e/h, conjugate-paired on s), d free,
// nu a permutation with diag_nu(d)[j][nu[j]] = d_j.
struct b_witness {
    std::vector<gaussian_rational> a;
    std::vector<gaussian_rational> d;
    std::vector<int> nu;
};

gmat diag_nu_matrix(const std::vector<gaussian_rational>& d, const std::vector<int>& nu);
gmat apply_b_witness(const gmat& b, const b_witness& w);
bool witness_respects_typing(const b_witness& w, const typing_info& ty);

struct canonical_b {
    gmat rep;
    b_witness witness;  // rep = diag(a)^{-1} B diag_nu(d)
};

// Canonical representative of the class of B under the row/column scaling
// relation with column permutation. Deterministic and idempotent.
canonical_b canonicalize_b(const gmat& b, const typing_info& ty);

// Same action transposed: rows permuted/scaled freely, columns constrained.
canonical_b canonicalize_bhat(const gmat& bhat, const typing_info& ty);

// Equivalence test via canonical forms, with a realizing witness on success.
std::optional<b_witness> check_equivalence(const gmat& b1, const gmat& b2, const typing_info& ty);

// All solutions of B = diag(a)^{-1} B diag_nu(d) with a in {+-1}^p
// (the symmetry group relevant to the family normal form).
struct genb_solution {
    std::vector<int> nu;
    std::vector<int> a_signs;
    std::vector<gaussian_rational> d;
};
std::vector<genb_solution> genb_solutions(const gmat& b);

}  // namespace mosweb
