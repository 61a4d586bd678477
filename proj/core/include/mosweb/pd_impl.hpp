#pragma once

#include <set>

namespace mosweb {

template <class K>
std::vector<K> sigma_multipliers(const series_map<K>& sigma, int p) {
    using traits = scalar_traits<K>;
    matrix<K> L = sigma.linear_matrix();
    std::vector<K> mu;
    for (int j = 0; j < p; ++j) mu.push_back(L(j, j));
    for (int r = 0; r < 2 * p; ++r)
        for (int k = 0; k < 2 * p; ++k) {
            K expect = traits::zero();
            if (r == k) expect = r < p ? mu[r] : traits::one() / mu[r - p];
            if (!traits::residue_ok(L(r, k) - expect))
                throw structural_error("sigma linear part is not diag(mu, mu^{-1})");
        }
    return mu;
}

template <class K>
void check_nonresonant(const std::vector<K>& mu, int height) {
    using traits = scalar_traits<K>;
    const int p = (int)mu.size();
    // cached powers mu_j^k, k in [-height, height]
    std::vector<std::vector<K>> pw(p, std::vector<K>(2 * height + 1, traits::one()));
    for (int j = 0; j < p; ++j) {
        for (int k = 1; k <= height; ++k) pw[j][height + k] = pw[j][height + k - 1] * mu[j];
        K inv = traits::one() / mu[j];
        for (int k = 1; k <= height; ++k) pw[j][height - k] = pw[j][height - k + 1] * inv;
    }
    std::vector<int> q(p, -height);
    for (;;) {
        int norm = 0;
        for (int i = 0; i < p; ++i) norm += std::abs(q[i]);
        bool skip = norm == 0 || norm > height;
        // use the symmetry Q <-> -Q: only check tuples whose first nonzero is positive
        if (!skip) {
            for (int i = 0; i < p; ++i) {
                if (q[i] > 0) break;
                if (q[i] < 0) {
                    skip = true;
                    break;
                }
            }
        }
        if (!skip) {
            K prod = traits::one();
            for (int i = 0; i < p; ++i) prod = prod * pw[i][height + q[i]];
            K res = prod - traits::one();
            if constexpr (traits::exact) {
                if (res.is_zero()) {
                    std::string qs;
                    for (int i = 0; i < p; ++i) qs += std::to_string(q[i]) + (i + 1 < p ? "," : "");
                    throw condition_error("non-resonance",
                                          "mu^Q = 1 for Q = (" + qs + ") (Eq. mu^Q != 1 fails)");
                }
            } else {
                if (res.contains_zero())
                    throw undetermined_error(
                        "non-resonance certificate failed: mu^Q - 1 not separated from 0");
            }
        }
        int i = 0;
        while (i < p && ++q[i] > height) q[i++] = -height;
        if (i == p) break;
    }
}

template <class K>
pd_stage<K> pd_sweep(const series_map<K>& sigma, const std::vector<K>& mu, int p, int upto,
                     divisor_log<K>* log) {
    using traits = scalar_traits<K>;
    const int n = 2 * p;
    const int D = sigma.trunc();
    pd_stage<K> st;
    st.transform = series_map<K>::identity(n, D);
    st.sigma_cur = sigma;
    std::vector<K> muinv;
    for (auto& m : mu) muinv.push_back(traits::one() / m);

    for (int d = 2; d <= std::min(upto, D); ++d) {
        series_map<K> corr = series_map<K>::identity(n, D);
        bool any = false;
        for (int c = 0; c < n; ++c) {
            int j = c % p;
            bool eta = c >= p;
            series<K> part = st.sigma_cur[c].homogeneous_part(d);
            for (auto& [m, coef] : part.terms()) {
                if (is_resonant_s(p, c, m)) continue;  // routed into M/N
                // divisor mu^{P-Q} - mu_j (xi side) or mu^{P-Q} - mu_j^{-1} (eta side)
                K fac = traits::one();
                for (int i = 0; i < p; ++i) {
                    int e = (int)m[i] - (int)m[p + i];
                    if (e == 0) continue;
                    K base = e > 0 ? mu[i] : muinv[i];
                    for (int k = 0; k < std::abs(e); ++k) fac = fac * base;
                }
                K divisor = fac - (eta ? muinv[j] : mu[j]);
                if (!traits::can_divide(divisor)) {
                    if constexpr (traits::exact)
                        throw condition_error("non-resonance",
                                              "resonant divisor mu^{P-Q} - mu_j vanishes");
                    else
                        throw undetermined_error("small divisor interval contains zero");
                }
                if (log) {
                    multi_index P(p), Q(p);
                    for (int i = 0; i < p; ++i) {
                        P[i] = m[i];
                        Q[i] = m[p + i];
                    }
                    if (eta) std::swap(P, Q);  // record as the xi-side exponent pair
                    log->add(j + 1, P, Q, divisor);
                }
                corr[c].add_term(m, coef / divisor);
                any = true;
            }
        }
        if (!any) continue;
        series_map<K> corr_inv = invert_map(corr);
        st.sigma_cur = compose(corr_inv, compose(st.sigma_cur, corr));
        st.transform = compose(st.transform, corr);
    }
    if (log) st.divisors = *log;
    return st;
}

template <class K>
std::vector<series<K>> multiplier_of_sigma(const series_map<K>& sigma, int p) {
    using traits = scalar_traits<K>;
    const int D = sigma.trunc();
    const int dz = zeta_trunc(D);
    std::vector<series<K>> out;
    for (int c = 0; c < 2 * p; ++c) {
        int j = c % p;
        series<K> m(p, dz);
        for (auto& [mi, coef] : sigma[c].terms()) {
            if (!is_resonant_s(p, c, mi))
                throw structural_error("multiplier_of_sigma: map is not in C(S) shape");
            multi_index a(p);
            for (int i = 0; i < p; ++i) a[i] = std::min(mi[i], mi[p + i]);
            m.add_term(a, coef);
        }
        out.push_back(std::move(m));
        (void)j;
    }
    return out;
}

template <class K>
std::vector<series<K>> multiplier_of_tau(const series_map<K>& tau, int p) {
    using traits = scalar_traits<K>;
    const int D = tau.trunc();
    const int dz = zeta_trunc(D);
    std::vector<series<K>> out;
    for (int c = 0; c < 2 * p; ++c) {
        int j = c % p;
        bool eta = c >= p;
        series<K> m(p, dz);
        for (auto& [mi, coef] : tau[c].terms()) {
            // expected monomials: xi side Lambda_j(zeta) eta_j, i.e. zeta^A eta_j
            multi_index a(p);
            bool ok = true;
            for (int i = 0; i < p; ++i) {
                int diff = (int)mi[i] - (int)mi[p + i];
                int want = (i == j) ? (eta ? 1 : -1) : 0;  // xi comp carries eta_j
                if (diff != want) ok = false;
                a[i] = std::min(mi[i], mi[p + i]);
            }
            if (!ok) throw structural_error("multiplier_of_tau: map is not in Lambda shape");
            m.add_term(a, coef);
        }
        out.push_back(std::move(m));
    }
    return out;
}

template <class K>
series_map<K> sigma_from_multiplier(const std::vector<series<K>>& M, int map_trunc) {
    using traits = scalar_traits<K>;
    const int p = (int)M.size() / 2;
    std::vector<series<K>> comps;
    for (int c = 0; c < 2 * p; ++c) {
        int j = c % p;
        series<K> lifted = lift_zeta(M[c], map_trunc);
        comps.push_back(lifted.shifted(multi_index::unit(2 * p, c), traits::one()));
        (void)j;
    }
    return series_map<K>(comps);
}

template <class K>
series_map<K> tau_from_multiplier(const std::vector<series<K>>& L, int map_trunc) {
    using traits = scalar_traits<K>;
    const int p = (int)L.size() / 2;
    std::vector<series<K>> comps;
    for (int c = 0; c < 2 * p; ++c) {
        int j = c % p;
        bool eta = c >= p;
        series<K> lifted = lift_zeta(L[c], map_trunc);
        int var = eta ? j : p + j;  // xi component carries eta_j
        comps.push_back(lifted.shifted(multi_index::unit(2 * p, var), traits::one()));
    }
    return series_map<K>(comps);
}

template <class K>
pd_sigma_result<K> pd_normalize_sigma(const series_map<K>& sigma, int p) {
    const int D = sigma.trunc();
    pd_sigma_result<K> out;
    out.mu = sigma_multipliers(sigma, p);
    check_nonresonant(out.mu, 2 * D);

    divisor_log<K> log;
    pd_stage<K> st = pd_sweep(sigma, out.mu, p, D, &log);
    out.divisors = log;

    // split the composed transform into the unique normalized factor
    auto dec = centralizer_decompose(st.transform, p, cent_kind::s_hat);
    out.psi = dec.psi1;
    series_map<K> psi0inv = invert_map(dec.psi0);
    out.sigma_star = compose(psi0inv, compose(st.sigma_cur, dec.psi0));
    // conjugation by psi0 in C(S) keeps C(S); the shape check happens here
    auto mult = multiplier_of_sigma(out.sigma_star, p);
    out.M.assign(mult.begin(), mult.begin() + p);
    out.N.assign(mult.begin() + p, mult.end());
    return out;
}

template <class K>
pd_result<K> pd_normalize(const reversible_pair<K>& pair) {
    const int p = pair.p;
    series_map<K> sigma = pair.sigma();
    pd_sigma_result<K> raw = pd_normalize_sigma(sigma, p);
    pd_result<K> out;
    out.mu = std::move(raw.mu);
    out.psi = std::move(raw.psi);
    out.sigma_star = std::move(raw.sigma_star);
    out.M = std::move(raw.M);
    out.N = std::move(raw.N);
    out.divisors = std::move(raw.divisors);

    series_map<K> psiinv = invert_map(out.psi);
    out.tau1_star = compose(psiinv, compose(pair.tau1, out.psi));
    out.tau2_star = compose(psiinv, compose(pair.get_tau2(), out.psi));
    auto l1 = multiplier_of_tau(out.tau1_star, p);
    auto l2 = multiplier_of_tau(out.tau2_star, p);
    out.lambda1.assign(l1.begin(), l1.begin() + p);
    out.lambda2.assign(l2.begin(), l2.begin() + p);
    return out;
}

template <class K>
pair_result<K> pair_normalize(const pd_result<K>& pd, int p) {
    using traits = scalar_traits<K>;
    const int D = pd.tau1_star.trunc();
    const int dz = zeta_trunc(D);
    series_map<K> t1 = pd.tau1_star, t2 = pd.tau2_star;
    series_map<K> w_total = series_map<K>::identity(2 * p, D);

    for (int k = 1; k <= dz; ++k) {
        auto l1 = multiplier_of_tau(t1, p);
        auto l2 = multiplier_of_tau(t2, p);
        bool any = false;
        std::vector<series<K>> delta(p, series<K>(p, dz));
        for (int j = 0; j < p; ++j) {
            series<K> r = l1[j] * l2[j] - series<K>::constant(p, dz, traits::one());
            series<K> rk = r.homogeneous_part(k);
            if (!rk.is_zero()) {
                delta[j] = rk * (traits::one() / traits::from_long(4));
                any = true;
            }
        }
        if (!any) continue;
        // psi0 step: xi_j -> xi_j (1 + delta_j(zeta)), eta_j -> eta_j (1 - delta_j(zeta))
        std::vector<series<K>> comps;
        for (int c = 0; c < 2 * p; ++c) {
            int j = c % p;
            bool eta = c >= p;
            series<K> fac = series<K>::constant(2 * p, D, traits::one());
            series<K> lifted = lift_zeta(delta[j], D);
            fac = eta ? fac - lifted : fac + lifted;
            comps.push_back(fac.shifted(multi_index::unit(2 * p, c), traits::one()));
        }
        series_map<K> w(comps);
        series_map<K> winv = invert_map(w);
        t1 = compose(winv, compose(t1, w));
        t2 = compose(winv, compose(t2, w));
        w_total = compose(w_total, w);
        // the degree-k residual must be gone now
        auto l1n = multiplier_of_tau(t1, p);
        auto l2n = multiplier_of_tau(t2, p);
        for (int j = 0; j < p; ++j) {
            series<K> r = l1n[j] * l2n[j] - series<K>::constant(p, dz, traits::one());
            if (!r.homogeneous_part(k).residue_ok())
                throw structural_error("pair_normalize: degree step did not close");
        }
    }

    // replace the composite by its unique C^c(T1,T2) factor
    auto dec = centralizer_decompose(w_total, p, cent_kind::t1t2);
    series_map<K> psi0 = dec.psi1;
    series_map<K> psi0inv = invert_map(psi0);
    pair_result<K> out;
    out.psi0 = psi0;
    out.tau1_t = compose(psi0inv, compose(pd.tau1_star, psi0));
    out.tau2_t = compose(psi0inv, compose(pd.tau2_star, psi0));
    auto l1 = multiplier_of_tau(out.tau1_t, p);
    auto l2 = multiplier_of_tau(out.tau2_t, p);
    out.lambda1.assign(l1.begin(), l1.begin() + p);
    out.lambda2.assign(l2.begin(), l2.begin() + p);
    for (int j = 0; j < p; ++j) {
        series<K> r = out.lambda1[j] * out.lambda2[j] -
                      series<K>::constant(p, zeta_trunc(D), traits::one());
        if (!r.residue_ok())
            throw structural_error("pair_normalize: Lambda1 Lambda2 != 1 after normalization");
        out.M.push_back(out.lambda1[j] * out.lambda1[j]);
    }
    return out;
}

template <class K>
std::vector<series<K>> log_m(const std::vector<series<K>>& M, const typing_info& ty,
                             mpfr_prec_t prec) {
    using traits = scalar_traits<K>;
    std::vector<series<K>> F;
    for (int j = 0; j < (int)M.size(); ++j) {
        series<K> lg = M[j].log_normalized();
        if (ty.type_of(j) != block_type::elliptic)
            lg.scale(-traits::imag_unit(prec));
        F.push_back(std::move(lg));
    }
    return F;
}

template <class K>
hyperplane_result<K> hyperplane_normalize(const series_map<K>& F) {
    using traits = scalar_traits<K>;
    const int p = F.in_dim();
    const int D = F.trunc();
    if (!F.is_tangent_to_identity())
        throw structural_error("hyperplane_normalize: F must be tangent to the identity");
    series_map<K> id = series_map<K>::identity(p, D);
    std::vector<series<K>> g(p, series<K>(p, D));  // psi_j = zeta_j (1 + g_j)

    auto build_psi = [&]() {
        std::vector<series<K>> comps;
        for (int j = 0; j < p; ++j) {
            series<K> fac = series<K>::constant(p, D, traits::one()) + g[j];
            comps.push_back(fac.shifted(multi_index::unit(p, j), traits::one()));
        }
        return series_map<K>(comps);
    };

    for (int d = 2; d <= D; ++d) {
        series_map<K> psi = build_psi();
        series_map<K> h = compose(F, psi);
        for (int j = 0; j < p; ++j) {
            series<K> part = h[j].homogeneous_part(d);
            for (auto& [q, coef] : part.terms()) {
                if (q[j] == 0) continue;  // stays in fhat
                multi_index qm = q;
                qm[j] -= 1;
                g[j].add_term(qm, -coef);
            }
        }
    }
    hyperplane_result<K> out;
    out.psi = build_psi();
    out.fhat = compose(F, out.psi);
    // d fhat_j / d zeta_j must vanish identically beyond the linear term
    for (int j = 0; j < p; ++j) {
        for (auto& [q, coef] : out.fhat[j].terms()) {
            if (q.degree() < 2) continue;
            if (q[j] != 0 && !traits::residue_ok(coef))
                throw structural_error("hyperplane_normalize: offending coefficient survived");
        }
    }
    return out;
}

template <class K>
series<K> zeta_rho_transport(const series<K>& s, const typing_info& ty) {
    const int p = s.dim();
    series<K> out(p, s.trunc());
    for (auto& [a, c] : s.terms()) {
        multi_index b(p);
        for (int i = 0; i < p; ++i) b[ty.type_of(i) == block_type::complex_pair ? ty.partner(i) : i] = a[i];
        out.add_term(b, scalar_traits<K>::conj(c));
    }
    return out;
}

template <class K>
std::vector<series<K>> reality_residues(const std::vector<series<K>>& lambda1,
                                        const std::vector<series<K>>& lambda2,
                                        const std::vector<series<K>>& M, const typing_info& ty,
                                        reality_convention conv) {
    using traits = scalar_traits<K>;
    std::vector<series<K>> res;
    const int p = ty.p();
    auto one = series<K>::constant(p, lambda1[0].trunc(), traits::one());
    for (int j = 0; j < p; ++j) {
        switch (ty.type_of(j)) {
            case block_type::elliptic:
                // Lambda_{2e}^{-1} = conj(Lambda_{1e} o rho_z); M_e real
                res.push_back(lambda2[j] * zeta_rho_transport(lambda1[j], ty) - one);
                res.push_back(zeta_rho_transport(M[j], ty) - M[j]);
                break;
            case block_type::hyperbolic:
                res.push_back(lambda2[j] - zeta_rho_transport(lambda1[j], ty));
                res.push_back(zeta_rho_transport(M[j], ty) * M[j] - one);
                break;
            case block_type::complex_pair: {
                int k = ty.partner(j);
                if (!ty.is_s_low(j)) break;
                int src_j = conv == reality_convention::displayed ? k : j;
                int src_k = conv == reality_convention::displayed ? j : k;
                res.push_back(lambda2[j] - zeta_rho_transport(lambda1[src_j], ty));
                res.push_back(lambda2[k] - zeta_rho_transport(lambda1[src_k], ty));
                res.push_back(zeta_rho_transport(M[j], ty) * M[k] - one);
                break;
            }
        }
    }
    return res;
}

template <class K>
unf_result<K> unique_normal_form(const reversible_pair<K>& pair, bool reality) {
    using traits = scalar_traits<K>;
    const int p = pair.p;
    const int D = pair.tau1.trunc();
    unf_result<K> out;
    out.pd = pd_normalize(pair);
    out.pair = pair_normalize(out.pd, p);

    // typing from the linear multipliers: needed for log branching; derive from
    // mu exactly on the exact backend, or trust structural zeros on intervals
    typing_info ty;
    if constexpr (traits::exact) {
        std::vector<gaussian_rational> eigs;
        for (auto& m : out.pd.mu) {
            eigs.push_back(m);
            eigs.push_back(m.inv());
        }
        eigen_data ed = classify_eigenvalues_list(eigs);
        ty = ed.typing;
        // classification reorders; require the input already canonical
        for (int j = 0; j < p; ++j)
            if (!(ed.mu[j] == out.pd.mu[j]))
                throw structural_error(
                    "unique_normal_form: sigma multipliers are not in the canonical order");
    } else {
        // interval backend: elliptic iff the multiplier is structurally real
        int e = 0;
        for (auto& m : out.pd.mu)
            if (m.is_real()) ++e;
        if (e != p)
            throw undetermined_error(
                "unique_normal_form: interval backend requires structurally real multipliers "
                "(pure elliptic) or exact typing");
        ty = typing_info{p, 0, 0};
    }

    std::vector<series<K>> Mt = out.pair.M;
    std::vector<series<K>> Lt = out.pair.lambda1;
    auto F = log_m(Mt, ty);
    // linear part of F
    matrix<K> A(p, p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) A(j, k) = F[j].coeff(multi_index::unit(p, k));
    bool is_id = true;
    for (int j = 0; j < p && is_id; ++j)
        for (int k = 0; k < p && is_id; ++k) {
            K want = (j == k) ? traits::one() : traits::zero();
            if (!traits::residue_ok(A(j, k) - want)) is_id = false;
        }
    if (!is_id) {
        // permitted dilation: diagonal with positive e/h entries, conjugate s pairs
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                if (j != k && !traits::residue_ok(A(j, k)))
                    throw condition_error("log-M tangency",
                                          "log M linear part is not diagonal; the hypothesis of "
                                          "the unique normal form fails");
        std::vector<K> b;
        for (int j = 0; j < p; ++j) {
            K ajj = A(j, j);
            if (!traits::can_divide(ajj))
                throw condition_error("log-M tangency", "log M has a vanishing diagonal entry");
            if constexpr (traits::exact) {
                if (ty.type_of(j) != block_type::complex_pair) {
                    if (!ajj.is_real() || sgn(ajj.re()) <= 0)
                        throw condition_error(
                            "log-M tangency",
                            "permitted dilation requires positive diagonal entries on e/h blocks");
                }
            }
            b.push_back(traits::one() / ajj);
        }
        if constexpr (traits::exact) {
            for (int j = 0; j < p; ++j)
                if (ty.is_s_low(j) && !(b[ty.partner(j)] == b[j].conj()))
                    throw condition_error("log-M tangency",
                                          "permitted dilation must be conjugate-paired on s blocks");
        }
        out.dilation = b;
        // compose zeta-series with diag(b): coefficient at A scales by b^A
        auto dilate = [&](series<K>& s) {
            series<K> r(s.dim(), s.trunc());
            for (auto& [a, c] : s.terms()) {
                K f = c;
                for (int i = 0; i < p; ++i)
                    for (int k2 = 0; k2 < a[i]; ++k2) f = f * b[i];
                r.add_term(a, f);
            }
            s = r;
        };
        for (auto& m : Mt) dilate(m);
        for (auto& l : Lt) dilate(l);
        F = log_m(Mt, ty);
    }

    series_map<K> Fm(F);
    auto hp = hyperplane_normalize(Fm);
    out.zeta_psi = hp.psi;
    for (int j = 0; j < p; ++j) {
        // Mhat = M o psi
        series_map<K> mj({Mt[j]});
        series_map<K> lj({Lt[j]});
        out.Mhat.push_back(compose(mj, hp.psi)[0]);
        out.lambda1hat.push_back(compose(lj, hp.psi)[0]);
    }
    std::vector<series<K>> mfull = out.Mhat;
    for (int j = 0; j < p; ++j) mfull.push_back(out.Mhat[j].recip());
    out.sigma_hat = sigma_from_multiplier(mfull, D);
    std::vector<series<K>> lfull = out.lambda1hat;
    for (int j = 0; j < p; ++j) lfull.push_back(out.lambda1hat[j].recip());
    out.tau1_hat = tau_from_multiplier(lfull, D);
    std::vector<series<K>> l2full;
    for (int j = 0; j < p; ++j) l2full.push_back(out.lambda1hat[j].recip());
    for (int j = 0; j < p; ++j) l2full.push_back(out.lambda1hat[j]);
    out.tau2_hat = tau_from_multiplier(l2full, D);

    if (reality) {
        auto res = reality_residues(out.pair.lambda1, out.pair.lambda2, out.pair.M, ty);
        out.reality_checked = true;
        for (auto& r : res)
            if (!r.residue_ok()) out.reality_checked = false;
    }
    return out;
}

}  // namespace mosweb
