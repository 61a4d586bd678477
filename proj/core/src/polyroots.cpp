#include "mosweb/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace mosweb {

int poly_degree(const gr_poly& p) {
    for (int i = (int)p.size() - 1; i >= 0; --i)
        if (!p[i].is_zero()) return i;
    return -1;
}

gr_poly poly_derivative(const gr_poly& p) {
    gr_poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * gaussian_rational((long)i));
    return d;
}

gaussian_rational poly_eval(const gr_poly& p, const gaussian_rational& x) {
    gaussian_rational acc(0);
    for (int i = (int)p.size() - 1; i >= 0; --i) acc = acc * x + p[i];
    return acc;
}

complex_interval poly_eval(const gr_poly& p, const complex_interval& x, mpfr_prec_t prec) {
    complex_interval acc = complex_interval::from_gaussian(gaussian_rational(0), prec);
    for (int i = (int)p.size() - 1; i >= 0; --i)
        acc = acc * x + complex_interval::from_gaussian(p[i], prec);
    return acc;
}

static gr_poly poly_trim(gr_poly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

static gr_poly poly_monic(gr_poly p) {
    p = poly_trim(std::move(p));
    if (p.empty()) return p;
    gaussian_rational lead = p.back();
    for (auto& c : p) c = c / lead;
    return p;
}

static gr_poly poly_mod(gr_poly a, const gr_poly& b) {
    int db = poly_degree(b);
    gaussian_rational lead = b[db];
    while (true) {
        a = poly_trim(std::move(a));
        int da = poly_degree(a);
        if (da < db) return a;
        gaussian_rational f = a[da] / lead;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
        a[da] = gaussian_rational(0);
    }
}

gr_poly poly_gcd(gr_poly a, gr_poly b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        gr_poly r = poly_mod(a, b);
        a = std::move(b);
        b = poly_trim(std::move(r));
    }
    return poly_monic(std::move(a));
}

bool poly_squarefree(const gr_poly& p) {
    gr_poly g = poly_gcd(p, poly_derivative(p));
    return poly_degree(g) <= 0;
}

static gr_poly poly_divexact(const gr_poly& a, const gr_poly& b) {
    int da = poly_degree(a), db = poly_degree(b);
    if (da < db) throw structural_error("poly_divexact: degree mismatch");
    gr_poly rem = a, q(da - db + 1, gaussian_rational(0));
    gaussian_rational lead = b[db];
    for (int d = da; d >= db; --d) {
        if (rem[(size_t)d].is_zero()) continue;
        gaussian_rational f = rem[(size_t)d] / lead;
        q[(size_t)(d - db)] = f;
        for (int i = 0; i <= db; ++i) rem[(size_t)(d - db + i)] -= f * b[(size_t)i];
    }
    for (auto& c : rem)
        if (!c.is_zero()) throw structural_error("poly_divexact: division is not exact");
    return q;
}

gr_poly poly_squarefree_part(const gr_poly& p) {
    gr_poly g = poly_gcd(p, poly_derivative(p));
    if (poly_degree(g) <= 0) return p;
    return poly_divexact(p, g);
}

gr_poly poly_deflate(const gr_poly& p, const gaussian_rational& root) {
    // synthetic division by (x - root)
    int d = poly_degree(p);
    gr_poly q(d);
    gaussian_rational carry(0);
    for (int i = d; i >= 1; --i) {
        carry = p[i] + carry * root;
        q[i - 1] = carry;
    }
    return q;
}

// ---- numeric seeding -----------------------------------------------------

static std::vector<std::complex<double>> durand_kerner(const gr_poly& p) {
    int d = poly_degree(p);
    std::vector<std::complex<double>> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = {p[i].re().get_d(), p[i].im().get_d()};
    for (int i = 0; i <= d; ++i) c[i] /= c[d];
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int i = d; i >= 0; --i) acc = acc * z + c[i];
        return acc;
    };
    std::vector<std::complex<double>> r(d);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> w = 1.0;
    for (int i = 0; i < d; ++i) {
        w *= seed;
        r[i] = w;
    }
    for (int it = 0; it < 800; ++it) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            if (std::abs(denom) < 1e-300) continue;
            std::complex<double> delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

// thin interval at the midpoint of a box
static complex_interval thin_mid(const complex_interval& z, mpfr_prec_t prec) {
    (void)prec;
    bigfloat mr = z.re().mid();
    real_interval re(mr, mr);
    if (z.im().is_exact_zero()) return {re, real_interval::exact_zero()};
    bigfloat mi = z.im().mid();
    return {re, real_interval(mi, mi)};
}

static complex_interval newton_polish(const gr_poly& p, const gr_poly& dp,
                                      std::complex<double> seed, mpfr_prec_t prec,
                                      bool force_real) {
    bigfloat br(prec), bi(prec);
    mpfr_set_d(br.get(), seed.real(), MPFR_RNDN);
    mpfr_set_d(bi.get(), force_real ? 0.0 : seed.imag(), MPFR_RNDN);
    complex_interval z(real_interval(br, br),
                       force_real ? real_interval::exact_zero() : real_interval(bi, bi));
    for (int it = 0; it < 64; ++it) {
        complex_interval fz = poly_eval(p, z, prec);
        complex_interval dz = poly_eval(dp, z, prec);
        if (dz.norm2().contains_zero()) break;
        complex_interval zn = z - fz / dz;
        z = thin_mid(zn, prec);
        if (force_real) z = complex_interval(z.re(), real_interval::exact_zero());
    }
    return z;
}

std::optional<rational> rational_reconstruct(const bigfloat& x, const mpz_class& den_bound,
                                             long tol_bits) {
    if (x.is_zero()) return rational(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
    rational r0;
    if (e >= 0) {
        mpz_class num = m << (unsigned long)e;
        r0 = rational(num);
    } else {
        mpz_class den = mpz_class(1) << (unsigned long)(-e);
        r0 = rational(m, den);
        r0.canonicalize();
    }
    rational tol(1, mpz_class(1) << (unsigned long)tol_bits);
    mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    rational cur = r0;
    for (int it = 0; it < 256; ++it) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), cur.get_num().get_mpz_t(), cur.get_den().get_mpz_t());
        mpz_class pk = fl * pm1 + pm2;
        mpz_class qk = fl * qm1 + qm2;
        if (qk > den_bound) return std::nullopt;
        rational conv(pk, qk);
        conv.canonicalize();
        if (abs(r0 - conv) <= tol) return conv;
        rational rem = cur - rational(fl);
        if (rem == 0) return conv;
        cur = rational(1) / rem;
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
    }
    return std::nullopt;
}

std::optional<std::vector<gaussian_rational>> gaussian_roots(const gr_poly& pin) {
    gr_poly p = poly_trim(pin);
    int d = poly_degree(p);
    if (d <= 0) return std::vector<gaussian_rational>{};
    if (!poly_squarefree(p)) return std::nullopt;
    gr_poly dp = poly_derivative(p);
    auto seeds = durand_kerner(p);
    const mpfr_prec_t prec = 320;
    const mpz_class den_bound = mpz_class(1) << 96;
    std::vector<gaussian_rational> roots;
    for (auto s : seeds) {
        bool try_real = std::abs(s.imag()) < 1e-7;
        std::optional<gaussian_rational> found;
        for (int attempt = 0; attempt < (try_real ? 2 : 1) && !found; ++attempt) {
            bool force_real = try_real && attempt == 0;
            complex_interval z = newton_polish(p, dp, s, prec, force_real);
            auto re = rational_reconstruct(z.re().mid(), den_bound, 200);
            if (!re) continue;
            std::optional<rational> im =
                force_real ? std::optional<rational>(rational(0))
                           : rational_reconstruct(z.im().mid(), den_bound, 200);
            if (!im) continue;
            gaussian_rational cand(*re, *im);
            if (poly_eval(p, cand).is_zero()) found = cand;
        }
        if (!found) return std::nullopt;
        roots.push_back(*found);
    }
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (roots[i] == roots[j]) return std::nullopt;
    return roots;
}

static bool strictly_inside(const real_interval& inner, const real_interval& outer) {
    return mpfr_cmp(outer.lo().get(), inner.lo().get()) < 0 &&
           mpfr_cmp(inner.hi().get(), outer.hi().get()) < 0;
}

std::vector<complex_interval> certified_roots(const gr_poly& pin, mpfr_prec_t prec) {
    gr_poly p = poly_trim(pin);
    int d = poly_degree(p);
    if (d <= 0) return {};
    gr_poly dp = poly_derivative(p);
    auto seeds = durand_kerner(p);
    std::vector<complex_interval> out;
    for (auto s : seeds) {
        complex_interval z = newton_polish(p, dp, s, prec, false);
        bool ok = false;
        // try boxes of shrinking radius; one contracting Newton step certifies
        for (long rbits : {prec / 2, 2 * prec / 3, prec - 24}) {
            rational rad(1, mpz_class(1) << (unsigned long)rbits);
            real_interval dr = real_interval::from_rational(rad, prec);
            real_interval xre = (z.re() - dr).widen_to(z.re() + dr);
            real_interval xim = (z.im() - dr).widen_to(z.im() + dr);
            complex_interval X(xre, xim);
            complex_interval mid = thin_mid(X, prec);
            complex_interval fm = poly_eval(p, mid, prec);
            complex_interval dX = poly_eval(dp, X, prec);
            if (dX.norm2().contains_zero()) continue;
            complex_interval N = mid - fm / dX;
            if (strictly_inside(N.re(), X.re()) && strictly_inside(N.im(), X.im())) {
                out.push_back(N);
                ok = true;
                break;
            }
        }
        if (!ok) throw undetermined_error("certified_roots: could not certify a root enclosure");
    }
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j) {
            bool sep_re = mpfr_cmp(out[i].re().hi().get(), out[j].re().lo().get()) < 0 ||
                          mpfr_cmp(out[j].re().hi().get(), out[i].re().lo().get()) < 0;
            bool sep_im = mpfr_cmp(out[i].im().hi().get(), out[j].im().lo().get()) < 0 ||
                          mpfr_cmp(out[j].im().hi().get(), out[i].im().lo().get()) < 0;
            if (!(sep_re || sep_im))
                throw undetermined_error("certified_roots: enclosures overlap (repeated root?)");
        }
    return out;
}

}  // namespace mosweb
