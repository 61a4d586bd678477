#include "mosweb/matrix_b.hpp"

#include <algorithm>
#include <numeric>

namespace mosweb {

using G = gaussian_rational;

gmat diag_nu_matrix(const std::vector<G>& d, const std::vector<int>& nu) {
    const int p = (int)d.size();
    gmat m(p, p);
    for (int j = 0; j < p; ++j) m(j, nu[j]) = d[j];
    return m;
}

gmat apply_b_witness(const gmat& b, const b_witness& w) {
    gmat ai = gmat::diagonal(w.a).inverse();
    return ai * b * diag_nu_matrix(w.d, w.nu);
}

bool witness_respects_typing(const b_witness& w, const typing_info& ty) {
    for (int j = 0; j < ty.p(); ++j) {
        switch (ty.type_of(j)) {
            case block_type::elliptic:
            case block_type::hyperbolic:
                if (!w.a[j].is_real()) return false;
                break;
            case block_type::complex_pair:
                if (ty.is_s_low(j) && !(w.a[ty.partner(j)] == w.a[j].conj())) return false;
                break;
        }
        if (w.a[j].is_zero() || w.d[j].is_zero()) return false;
    }
    return true;
}

namespace {

// residual gauge parameter slots: one real per e/h index, one complex per s-pair
struct gauge {
    const typing_info& ty;
    std::vector<int> slot;       // index -> parameter slot
    std::vector<bool> is_real;   // per slot
    std::vector<bool> fixed;     // per slot
    std::vector<G> value;        // per slot, the chosen a-contribution

    explicit gauge(const typing_info& t) : ty(t) {
        const int p = t.p();
        slot.resize(p);
        int ns = 0;
        for (int j = 0; j < p; ++j) {
            if (t.is_s_high(j)) {
                slot[j] = slot[t.partner(j)];
            } else {
                slot[j] = ns++;
            }
        }
        is_real.assign(ns, false);
        for (int j = 0; j < p; ++j)
            if (t.type_of(j) != block_type::complex_pair) is_real[slot[j]] = true;
        fixed.assign(ns, false);
        value.assign(ns, G(1));
    }
    // a_j as a function of the slot values
    G a_of(int j) const {
        const G& z = value[slot[j]];
        return ty.is_s_high(j) ? z.conj() : z;
    }
};

// canonical value of z under multiplication by an arbitrary nonzero REAL t,
// together with the chosen t
std::pair<G, G> real_ray_canonical(const G& z) {
    // prefer exact modulus-one normalization when representable
    auto m = sqrt_rational_exact(z.norm2());
    if (m) {
        G t = G(rational(1) / *m);
        G w = z * t;
        // land arg in [0, pi): flip sign if Im < 0, or Im == 0 and Re < 0
        if (sgn(w.im()) < 0 || (w.im() == 0 && sgn(w.re()) < 0)) {
            t = -t;
            w = -w;
        }
        return {w, t};
    }
    if (z.re() != 0) {
        G t(rational(1) / z.re());
        G w = z * t;  // Re = 1
        if (sgn(w.im()) < 0) { /* Re fixed positive already */
        }
        return {w, t};
    }
    G t(rational(1) / z.im());
    return {z * t, t};  // = i
}

// canonical gauge of N (unit diagonal) under N_ij -> (a_j / a_i) N_ij
void fix_gauge(gmat& n, gauge& g) {
    const int p = n.rows();
    for (;;) {
        int first_unfixed = -1;
        for (size_t s = 0; s < g.fixed.size(); ++s)
            if (!g.fixed[s]) {
                first_unfixed = (int)s;
                break;
            }
        if (first_unfixed < 0) break;

        // 1) fix via the first entry coupling a fixed slot to an unfixed one
        bool touched = false;
        for (int i = 0; i < p && !touched; ++i)
            for (int j = 0; j < p && !touched; ++j) {
                if (i == j || n(i, j).is_zero()) continue;
                int si = g.slot[i], sj = g.slot[j];
                if (si == sj || g.fixed[si] == g.fixed[sj]) continue;
                int sfree = g.fixed[si] ? sj : si;
                bool free_is_j = (sfree == sj);
                G cur = (g.a_of(j) / g.a_of(i)) * n(i, j);
                if (g.is_real[sfree]) {
                    auto [w, t] = real_ray_canonical(cur);
                    (void)w;
                    g.value[sfree] = free_is_j ? t : t.inv();
                } else {
                    // full complex freedom: normalize the entry to exactly 1
                    G t = cur.inv();
                    G t_slot = free_is_j ? t : t.inv();
                    bool conj_role = free_is_j ? g.ty.is_s_high(j) : g.ty.is_s_high(i);
                    if (conj_role) t_slot = t_slot.conj();
                    g.value[sfree] = t_slot;
                }
                g.fixed[sfree] = true;
                touched = true;
            }
        if (touched) continue;

        // 2) seed a new component; a pair slot with a nonzero intra-pair entry
        //    still carries a quadrant's worth of exact freedom
        int s = first_unfixed;
        G z(1);
        if (!g.is_real[s]) {
            bool done = false;
            for (int i = 0; i < p && !done; ++i)
                for (int j = 0; j < p && !done; ++j) {
                    if (i == j || n(i, j).is_zero()) continue;
                    if (g.slot[i] != s || g.slot[j] != s) continue;
                    // factor on this entry is conj(z)/z or its inverse
                    static const G zs[4] = {G(1), G(rational(1), rational(-1)), G::i(),
                                            G(rational(1), rational(1))};
                    for (const G& cand : zs) {
                        G f = cand.conj() / cand;
                        bool low_to_high = g.ty.is_s_high(j);
                        G val = (low_to_high ? f : f.inv()) * n(i, j);
                        if (sgn(val.re()) > 0 && sgn(val.im()) >= 0) {
                            z = cand;
                            break;
                        }
                    }
                    done = true;
                }
        }
        g.value[s] = z;
        g.fixed[s] = true;
    }
    // apply the gauge
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            n(i, j) = (g.a_of(j) / g.a_of(i)) * n(i, j);
        }
}

// graded-lex comparison of matrices by (re, im) of entries, row-major
int mat_tiebreak(const gmat& x, const gmat& y) {
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            int c = tiebreak_cmp(x(i, j), y(i, j));
            if (c) return c;
        }
    return 0;
}

}  // namespace

canonical_b canonicalize_b(const gmat& b, const typing_info& ty) {
    const int p = b.rows();
    if (b.cols() != p || ty.p() != p) throw structural_error("canonicalize_b: shape mismatch");
    if (b.det().is_zero()) throw structural_error("canonicalize_b: singular matrix");

    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<canonical_b> best;
    // nu runs over permutations; columns j of B' = column nu^{-1}(j) of B
    std::vector<int> nu_inv(p);
    do {
        // interpret perm as nu; column j of C is B's column nu^{-1}(j)
        for (int j = 0; j < p; ++j) nu_inv[perm[j]] = j;
        bool ok = true;
        for (int i = 0; i < p && ok; ++i)
            if (b(i, nu_inv[i]).is_zero()) ok = false;  // need nonzero diagonal
        if (!ok) continue;

        gmat n(p, p);
        std::vector<G> dcol(p);  // column scaling absorbed: d'_j = 1 / C_jj (with a = 1 baseline)
        for (int j = 0; j < p; ++j) {
            G cjj = b(j, nu_inv[j]);
            dcol[j] = cjj.inv();
            for (int i = 0; i < p; ++i) n(i, j) = b(i, nu_inv[j]) / cjj;
        }
        gauge g(ty);
        fix_gauge(n, g);

        b_witness w;
        w.nu.resize(p);
        w.a.resize(p);
        w.d.resize(p);
        for (int j = 0; j < p; ++j) {
            w.nu[j] = perm[j];
            w.a[j] = g.a_of(j);
        }
        // recover d from rep = diag(a)^{-1} B diag_nu(d): d_k scales B-column k into rep-column perm[k]
        // rep_{i, perm[k]} = a_i^{-1} b_{ik} d_k
        for (int k = 0; k < p; ++k) {
            int j = perm[k];
            int i0 = -1;
            for (int i = 0; i < p; ++i)
                if (!b(i, k).is_zero()) {
                    i0 = i;
                    break;
                }
            w.d[k] = n(i0, j) * w.a[i0] / b(i0, k);
        }
        gmat check = apply_b_witness(b, w);
        bool consistent = true;
        for (int i = 0; i < p && consistent; ++i)
            for (int j = 0; j < p && consistent; ++j)
                if (!(check(i, j) == n(i, j))) consistent = false;
        if (!consistent) throw structural_error("canonicalize_b: witness reconstruction failed");

        if (!best || mat_tiebreak(n, best->rep) < 0) best = canonical_b{n, w};
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!best) throw structural_error("canonicalize_b: no admissible permutation (singular?)");
    return *best;
}

canonical_b canonicalize_bhat(const gmat& bhat, const typing_info& ty) {
    canonical_b t = canonicalize_b(bhat.transpose(), ty);
    canonical_b out;
    out.rep = t.rep.transpose();
    out.witness = t.witness;  // transposed-sense witness
    return out;
}

std::optional<b_witness> check_equivalence(const gmat& b1, const gmat& b2, const typing_info& ty) {
    if (b1.rows() != b2.rows()) throw structural_error("check_equivalence: size mismatch");
    canonical_b c1 = canonicalize_b(b1, ty);
    canonical_b c2 = canonicalize_b(b2, ty);
    if (!(c1.rep == c2.rep)) return std::nullopt;
    // compose: c = diag(a1)^{-1} B1 D1 = diag(a2)^{-1} B2 D2
    // => B2 = diag(a2) diag(a1)^{-1} B1 D1 D2^{-1}
    const int p = b1.rows();
    gmat d1 = diag_nu_matrix(c1.witness.d, c1.witness.nu);
    gmat d2 = diag_nu_matrix(c2.witness.d, c2.witness.nu);
    gmat dd = d1 * d2.inverse();
    b_witness w;
    w.a.resize(p);
    w.d.resize(p);
    w.nu.resize(p);
    for (int j = 0; j < p; ++j) w.a[j] = c1.witness.a[j] / c2.witness.a[j];
    // dd is a scaled permutation matrix: dd[j][nu[j]] = d_j
    for (int j = 0; j < p; ++j) {
        int col = -1;
        for (int k = 0; k < p; ++k)
            if (!dd(j, k).is_zero()) {
                if (col >= 0) throw structural_error("check_equivalence: witness is not monomial");
                col = k;
            }
        w.nu[j] = col;
        w.d[j] = dd(j, col);
    }
    gmat check = apply_b_witness(b1, w);
    if (!(check == b2)) throw structural_error("check_equivalence: composed witness failed");
    return w;
}

std::vector<genb_solution> genb_solutions(const gmat& b) {
    const int p = b.rows();
    std::vector<genb_solution> out;
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (long mask = 0; mask < (1L << p); ++mask) {
            std::vector<int> signs(p);
            for (int i = 0; i < p; ++i) signs[i] = (mask >> i) & 1 ? -1 : 1;
            // need d with diag(a) B = B diag_nu(d), i.e.
            // a_i b_{ij} = b_{i nu^{-1}(j)} d_{nu^{-1}(j)} for all i, j
            std::vector<int> nu_inv(p);
            for (int j = 0; j < p; ++j) nu_inv[perm[j]] = j;
            std::vector<G> d(p, G(0));
            bool ok = true;
            for (int j = 0; j < p && ok; ++j) {
                int k = nu_inv[j];  // source column
                // solve d_k from any row with b_{ik} != 0
                G dk(0);
                bool have = false;
                for (int i = 0; i < p && ok; ++i) {
                    G lhs = G((long)signs[i]) * b(i, j);
                    if (b(i, k).is_zero()) {
                        if (!lhs.is_zero()) ok = false;
                        continue;
                    }
                    G cand = lhs / b(i, k);
                    if (!have) {
                        dk = cand;
                        have = true;
                    } else if (!(dk == cand)) {
                        ok = false;
                    }
                }
                if (!have || dk.is_zero()) ok = false;
                if (ok) d[k] = dk;
            }
            if (ok) out.push_back({perm, signs, d});
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace mosweb
