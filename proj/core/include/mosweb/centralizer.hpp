#pragma once

#include "mosweb/series_map.hpp"

namespace mosweb {

// Splittings C + C^c for the three reference families (S-hat, {T1,T2}, {Z_j}).
enum class cent_kind { s_hat, t1t2, z_family };

// position classification for a map on C^{2p}, component c, monomial m
struct position {
    int p;
    int comp;             // 0..2p-1
    const multi_index& m;  // dim 2p
};

inline bool is_resonant_s(int p, int comp, const multi_index& m) {
    // xi_j component: P - Q = e_j; eta_j: Q - P = e_j
    int j = comp % p;
    bool eta = comp >= p;
    for (int i = 0; i < p; ++i) {
        int diff = (int)m[i] - (int)m[p + i];
        int want = (i == j) ? (eta ? -1 : 1) : 0;
        if (diff != want) return false;
    }
    return true;
}

// Z-family centralizer membership: U even in each eta_j; V_j = eta_j * even
inline bool is_z_centralizer_position(int p, int comp, const multi_index& m) {
    if (comp < p) {
        for (int i = 0; i < p; ++i)
            if (m[p + i] % 2) return false;
        return true;
    }
    int j = comp - p;
    for (int i = 0; i < p; ++i) {
        int want_odd = (i == j) ? 1 : 0;
        if ((int)(m[p + i] % 2) != want_odd) return false;
    }
    return true;
}

template <class K>
struct decomposition {
    series_map<K> psi1;  // in C^c
    series_map<K> psi0;  // in C
};

// unique psi = psi1 o psi0^{-1} for a map tangent to the identity
template <class K>
decomposition<K> centralizer_decompose(const series_map<K>& psi, int p, cent_kind kind) {
    using traits = scalar_traits<K>;
    const int n = 2 * p;
    const int D = psi.trunc();
    if (psi.in_dim() != n || psi.out_dim() != n)
        throw structural_error("centralizer_decompose: map must act on C^{2p}");
    if (!psi.is_tangent_to_identity())
        throw structural_error("centralizer_decompose: map must be tangent to the identity");

    series_map<K> psi0 = series_map<K>::identity(n, D);
    for (int d = 2; d <= D; ++d) {
        series_map<K> t = compose(psi, psi0);
        // choose the degree-d part of psi0 so that (psi o psi0)^{[d]} lands in C^c
        if (kind == cent_kind::t1t2) {
            for (int j = 0; j < p; ++j) {
                // resonant xi positions (A+e_j, A), |A| = (d-1)/2
                if ((d - 1) % 2) continue;
                series<K> xi_part = t[j].homogeneous_part(d);
                series<K> eta_part = t[p + j].homogeneous_part(d);
                std::vector<multi_index> sites;
                for (auto& [m, c0] : xi_part.terms())
                    if (is_resonant_s(p, j, m)) sites.push_back(m);
                for (auto& [m2, c0] : eta_part.terms())
                    if (is_resonant_s(p, p + j, m2)) {
                        multi_index m = m2;
                        m[j] += 1;
                        m[p + j] -= 1;
                        bool seen = false;
                        for (auto& s : sites)
                            if (s == m) seen = true;
                        if (!seen) sites.push_back(m);
                    }
                for (auto& m : sites) {
                    multi_index m2 = m;
                    m2[j] -= 1;
                    m2[p + j] += 1;
                    K x = xi_part.coeff(m);
                    K y = eta_part.coeff(m2);
                    K s = -(x + y) * (traits::one() / traits::from_long(2));
                    psi0[j].add_term(m, s);
                    psi0[p + j].add_term(m2, s);
                }
            }
        } else {
            for (int c = 0; c < n; ++c) {
                series<K> part = t[c].homogeneous_part(d);
                for (auto& [m, coef] : part.terms()) {
                    bool to_psi0 = (kind == cent_kind::s_hat)
                                       ? is_resonant_s(p, c, m)
                                       : is_z_centralizer_position(p, c, m);
                    if (to_psi0) psi0[c].add_term(m, -coef);
                }
            }
        }
    }
    decomposition<K> out;
    out.psi0 = psi0;
    out.psi1 = compose(psi, psi0);
    return out;
}

// membership checks (coefficientwise, up to the truncation degree)
template <class K>
bool in_complement(const series_map<K>& f, int p, cent_kind kind) {
    using traits = scalar_traits<K>;
    const int n = 2 * p;
    series_map<K> dev = f - series_map<K>::identity(n, f.trunc());
    for (int c = 0; c < n; ++c) {
        int j = c % p;
        bool eta = c >= p;
        for (auto& [m, coef] : dev[c].terms()) {
            if (m.degree() < 2) {
                if (!traits::residue_ok(coef)) return false;
                continue;
            }
            switch (kind) {
                case cent_kind::s_hat:
                    if (is_resonant_s(p, c, m) && !traits::residue_ok(coef)) return false;
                    break;
                case cent_kind::t1t2: {
                    if (!is_resonant_s(p, c, m) || eta) break;
                    multi_index m2 = m;
                    m2[j] -= 1;
                    m2[p + j] += 1;
                    K y = dev[p + j].coeff(m2);
                    if (!traits::residue_ok(coef + y)) return false;
                    break;
                }
                case cent_kind::z_family:
                    if (is_z_centralizer_position(p, c, m) && !traits::residue_ok(coef))
                        return false;
                    break;
            }
        }
    }
    return true;
}

template <class K>
bool in_centralizer(const series_map<K>& f, int p, cent_kind kind) {
    using traits = scalar_traits<K>;
    const int n = 2 * p;
    for (int c = 0; c < n; ++c) {
        int j = c % p;
        bool eta = c >= p;
        for (auto& [m, coef] : f[c].terms()) {
            switch (kind) {
                case cent_kind::s_hat:
                    if (!is_resonant_s(p, c, m) && !traits::residue_ok(coef)) return false;
                    break;
                case cent_kind::t1t2: {
                    if (!is_resonant_s(p, c, m)) {
                        if (!traits::residue_ok(coef)) return false;
                        break;
                    }
                    if (eta) break;
                    multi_index m2 = m;
                    m2[j] -= 1;
                    m2[p + j] += 1;
                    K y = f[p + j].coeff(m2);
                    if (!traits::residue_ok(coef - y)) return false;
                    break;
                }
                case cent_kind::z_family:
                    if (!is_z_centralizer_position(p, c, m) && !traits::residue_ok(coef))
                        return false;
                    break;
            }
        }
    }
    return true;
}

}  // namespace mosweb
