#pragma once

#include <optional>
#include <vector>

#include "mosweb/interval.hpp"
#include "mosweb/rational.hpp"

namespace mosweb {

// Univariate polynomial over Q(i), coefficients ascending.
using gr_poly = std::vector<gaussian_rational>;

int poly_degree(const gr_poly& p);
gr_poly poly_derivative(const gr_poly& p);
gaussian_rational poly_eval(const gr_poly& p, const gaussian_rational& x);
complex_interval poly_eval(const gr_poly& p, const complex_interval& x, mpfr_prec_t prec);
gr_poly poly_gcd(gr_poly a, gr_poly b);
bool poly_squarefree(const gr_poly& p);
gr_poly poly_squarefree_part(const gr_poly& p);
// deflate by a known root
gr_poly poly_deflate(const gr_poly& p, const gaussian_rational& root);

// All roots of a squarefree polynomial, exactly, when they all lie in Q(i).
// Returns nullopt when some root is not (recognizably) Gaussian rational.
std::optional<std::vector<gaussian_rational>> gaussian_roots(const gr_poly& p);

// Certified disjoint enclosures of the simple roots (interval Newton).
std::vector<complex_interval> certified_roots(const gr_poly& p, mpfr_prec_t prec);

// Best rational approximation with bounded denominator; nullopt when the
// continued fraction does not lock in within the tolerance.
std::optional<rational> rational_reconstruct(const bigfloat& x, const mpz_class& den_bound,
                                             long tol_bits);

}  // namespace mosweb
