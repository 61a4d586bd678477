#include "mosweb/rational.hpp"

namespace mosweb {

rational rational_from_string(const std::string& s) {
    rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw structural_error("cannot parse rational: '" + s + "'");
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
        throw structural_error("zero denominator in rational: '" + s + "'");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<rational> sqrt_rational_exact(const rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    if (q == 0) return rational(0);
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    rational r(rn, rd);
    r.canonicalize();
    return r;
}

std::string gaussian_rational::str() const {
    if (im_ == 0) return rational_to_string(re_);
    return rational_to_string(re_) + (sgn(im_) >= 0 ? "+" : "") + rational_to_string(im_) + "*i";
}

std::optional<gaussian_rational> sqrt_exact(const gaussian_rational& z) {
    // w = x + iy with x^2 - y^2 = a, 2xy = b; requires |z| rational.
    if (z.is_zero()) return gaussian_rational(0);
    auto r = sqrt_rational_exact(z.norm2());
    if (!r) return std::nullopt;
    const rational& a = z.re();
    const rational& b = z.im();
    if (b == 0) {
        if (sgn(a) > 0) {
            auto x = sqrt_rational_exact(a);
            if (!x) return std::nullopt;
            return gaussian_rational(*x);
        }
        auto y = sqrt_rational_exact(-a);
        if (!y) return std::nullopt;
        return gaussian_rational(rational(0), *y);  // principal: arg = pi/2
    }
    rational x2 = (a + *r) / 2;
    auto x = sqrt_rational_exact(x2);
    if (!x || *x == 0) return std::nullopt;
    rational y = b / (2 * (*x));
    gaussian_rational w(*x, y);
    // principal branch: Re w > 0, matching arg(w) = arg(z)/2 in (-pi/2, pi/2)
    return w;
}

int tiebreak_cmp(const gaussian_rational& a, const gaussian_rational& b) {
    int c = cmp(a.re(), b.re());
    if (c != 0) return c;
    return cmp(a.im(), b.im());
}

}  // namespace mosweb
