#include "mosweb/bigfloat.hpp"

#include <cstdlib>
#include <vector>

namespace mosweb {

std::string bigfloat::str(mpfr_rnd_t rnd, size_t digits) const {
    if (mpfr_zero_p(x_)) return "0";
    if (digits == 0) digits = (size_t)(prec() * 0.302) + 3;
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, x_, rnd);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string dig = neg ? mant.substr(1) : mant;
    std::string out = (neg ? "-" : "") + ("0." + dig) + "e" + std::to_string((long)e);
    return out;
}

int cmp(const bigfloat& a, const bigfloat& b) { return mpfr_cmp(a.get(), b.get()); }

}  // namespace mosweb
