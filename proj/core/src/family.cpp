#include "mosweb/family.hpp"

#include <algorithm>

namespace mosweb {

using G = gaussian_rational;

involution_family deck_transformations(const manifold_spec& m) {
    validate_manifold(m);
    const int p = m.p;
    const int n = 2 * p;
    const int D = m.trunc;
    deck_result quad = deck_transformations_quadratic(m);

    involution_family fam;
    fam.p = p;
    fam.rho = gmap::from_linear(quad.family.rho, D, true);

    quad_forms qf = quadratic_parts(m);
    for (int g = 0; g < p; ++g) {
        const gmat& lin = quad.family.t1j[g];
        gmap tau = gmap::from_linear(lin, D);
        // linear forms ell[j][k](z, w): coefficient of the unknown f_k in the
        // degree-(d+1) part of E_j o tau, i.e. (H_j^T z)_k ... more precisely
        // dE_j/dw_k at the linear-part image: sum_i z_i H_j(i,k) + 2 (Q_j (Aw+Cz))_k
        std::vector<std::vector<gseries>> ell(p, std::vector<gseries>(p, gseries(n, D)));
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k) {
                for (int i = 0; i < p; ++i)
                    if (!qf.H[j](i, k).is_zero())
                        ell[j][k].add_term(multi_index::unit(n, i), qf.H[j](i, k));
                for (int i = 0; i < p; ++i) {
                    if (qf.Q[j](k, i).is_zero()) continue;
                    G c2 = G(2) * qf.Q[j](k, i);
                    for (int v = 0; v < n; ++v) {
                        const G& a = lin(p + i, v);
                        if (!a.is_zero()) ell[j][k].add_term(multi_index::unit(n, v), c2 * a);
                    }
                }
            }

        for (int d = 2; d < D; ++d) {
            std::vector<gseries> res;
            bool any = false;
            for (int j = 0; j < p; ++j) {
                gmap em({m.E[j]});
                gseries r = compose(em, tau)[0] - m.E[j];
                if (!r.is_zero() && r.order() <= d)
                    throw structural_error("deck_transformations: residual below current degree");
                gseries rd = r.homogeneous_part(d + 1);
                if (!rd.is_zero()) any = true;
                res.push_back(rd);
            }
            if (!any) continue;

            // unknowns: degree-d monomials in (z, w) for each of the p components
            std::vector<multi_index> monos;
            {
                multi_index cur(n);
                auto rec = [&](auto&& self, int var, int left) -> void {
                    if (var == n - 1) {
                        cur[var] = (uint16_t)left;
                        monos.push_back(cur);
                        return;
                    }
                    for (int t = left; t >= 0; --t) {
                        cur[var] = (uint16_t)t;
                        self(self, var + 1, left - t);
                    }
                };
                rec(rec, 0, d);
            }
            const int nun = (int)monos.size() * p;
            std::map<std::pair<int, multi_index>, int> eqindex;  // (j, target monomial)
            std::vector<std::map<int, G>> cols(nun);
            for (size_t u = 0; u < monos.size(); ++u)
                for (int k = 0; k < p; ++k) {
                    int col = (int)u * p + k;
                    for (int j = 0; j < p; ++j)
                        for (auto& [lm, lc] : ell[j][k].terms()) {
                            multi_index tgt = lm + monos[u];
                            auto key = std::make_pair(j, tgt);
                            auto [it, fresh] = eqindex.emplace(key, (int)eqindex.size());
                            cols[col][it->second] += lc;
                        }
                }
            std::map<int, G> rhs;
            for (int j = 0; j < p; ++j)
                for (auto& [mi2, c] : res[j].terms()) {
                    auto key = std::make_pair(j, mi2);
                    auto [it, fresh] = eqindex.emplace(key, (int)eqindex.size());
                    rhs[it->second] = -c;
                }
            const int neq = (int)eqindex.size();
            gmat aug(neq, nun + 1);
            for (int u = 0; u < nun; ++u)
                for (auto& [r, c] : cols[u]) aug(r, u) = c;
            for (auto& [r, c] : rhs) aug(r, nun) = c;
            auto pivots = aug.rref();
            std::vector<G> x(nun, G(0));
            for (size_t pr = 0; pr < pivots.size(); ++pr) {
                int pc = pivots[pr];
                if (pc == nun)
                    throw condition_error("condition D", "deck transformation obstructed at degree " +
                                                             std::to_string(d));
                x[pc] = aug((int)pr, nun);
            }
            for (size_t u = 0; u < monos.size(); ++u)
                for (int k = 0; k < p; ++k) {
                    const G& v = x[u * p + k];
                    if (!v.is_zero()) tau[p + k].add_term(monos[u], v);
                }
        }
        for (int j = 0; j < p; ++j) {
            gmap em({m.E[j]});
            if (!(compose(em, tau)[0] - m.E[j]).is_zero())
                throw condition_error("condition D",
                                      "deck transformation does not extend to the truncation degree");
        }
        fam.tau1j.push_back(tau);
    }
    validate_involution_family(fam);
    return fam;
}

gmap e_n_map(const std::vector<gseries>& lambda1, int map_trunc) {
    const int p = (int)lambda1.size();
    const int n = 2 * p;
    std::vector<gseries> comps;
    for (int j = 0; j < p; ++j) {
        gseries c = gseries::variable(n, map_trunc, j, G(1));
        c += lift_zeta(lambda1[j], map_trunc).shifted(multi_index::unit(n, p + j), G(1));
        comps.push_back(std::move(c));
    }
    for (int j = 0; j < p; ++j) {
        gseries c = gseries::variable(n, map_trunc, p + j, G(1));
        c -= lift_zeta(lambda1[j].recip(), map_trunc).shifted(multi_index::unit(n, j), G(1));
        comps.push_back(std::move(c));
    }
    return gmap(comps);
}

gmap w_map(const std::vector<gseries>& lambda1, const gmat& b1, int map_trunc) {
    const int p = (int)lambda1.size();
    gmat bsinv = b_star_matrix(b1).inverse();
    return compose(gmap::from_linear(bsinv, map_trunc), e_n_map(lambda1, map_trunc));
}

std::vector<gmap> model_family(const std::vector<gseries>& lambda1, const gmat& b1,
                               int map_trunc) {
    const int p = (int)lambda1.size();
    const int n = 2 * p;
    gmap w = w_map(lambda1, b1, map_trunc);
    gmap winv = invert_map(w);
    std::vector<gmap> out;
    for (int j = 0; j < p; ++j) {
        gmat zj = gmat::identity(n);
        zj(p + j, p + j) = G(-1);
        out.push_back(compose(winv, compose(gmap::from_linear(zj, map_trunc), w)));
    }
    return out;
}

gmap linearize_family(const involution_family& fam, const std::vector<gmap>& model) {
    const int D = fam.tau1j.front().trunc();
    gmap a = group_average(fam.tau1j, D);
    gmap ahat = group_average(model, D);
    gmap phi1 = compose(invert_map(a), ahat);
    // verification: Phi1 tau-hat_{1j} Phi1^{-1} = tau_{1j}
    gmap phi1inv = invert_map(phi1);
    for (size_t j = 0; j < model.size(); ++j) {
        gmap lhs = compose(phi1, compose(model[j], phi1inv));
        if (!(lhs - fam.tau1j[j]).is_zero())
            throw structural_error("linearize_family: conjugacy to the model family failed");
    }
    return phi1;
}

family_decomposition family_centralizer_decompose(const gmap& phi,
                                                  const std::vector<gseries>& lambda1,
                                                  const gmat& b1) {
    const int p = (int)lambda1.size();
    const int D = phi.trunc();
    gmap w = w_map(lambda1, b1, D);
    gmap winv = invert_map(w);
    gmap g = compose(w, compose(phi, winv));
    auto dec = centralizer_decompose(g, p, cent_kind::z_family);
    family_decomposition out;
    out.phi1 = compose(winv, compose(dec.psi1, w));
    out.phi0 = compose(winv, compose(dec.psi0, w));
    return out;
}

std::vector<std::vector<int>> all_admissible_eps(const typing_info& ty) {
    const int p = ty.p();
    std::vector<std::vector<int>> out;
    for (long mask = 0; mask < (1L << p); ++mask) {
        std::vector<int> eps(p);
        for (int j = 0; j < p; ++j) eps[j] = (mask >> j) & 1 ? -1 : 1;
        bool ok = true;
        for (int j = 0; j < p; ++j)
            if (ty.is_s_low(j) && eps[ty.partner(j)] != eps[j]) ok = false;
        if (ok) out.push_back(eps);
    }
    return out;
}

gmap r_eps_conjugate(const gmap& psi, const std::vector<int>& eps) {
    const int p = (int)eps.size();
    gmap out = psi;
    for (int c = 0; c < 2 * p; ++c) {
        gseries s(2 * p, psi.trunc());
        for (auto& [m, co] : psi[c].terms()) {
            long sign = eps[c % p];
            for (int i = 0; i < p; ++i)
                if ((m[i] + m[p + i]) % 2) sign *= eps[i];
            s.add_term(m, sign < 0 ? -co : co);
        }
        out[c] = std::move(s);
    }
    return out;
}

namespace {
int map_tiebreak(const gmap& a, const gmap& b) {
    for (int c = 0; c < a.out_dim(); ++c) {
        auto &ta = a[c].terms(), &tb = b[c].terms();
        size_t k = 0;
        for (; k < ta.size() && k < tb.size(); ++k) {
            if (ta[k].first != tb[k].first) return ta[k].first < tb[k].first ? -1 : 1;
            int cc = tiebreak_cmp(ta[k].second, tb[k].second);
            if (cc) return cc;
        }
        if (ta.size() != tb.size()) return ta.size() < tb.size() ? 1 : -1;
    }
    return 0;
}
}  // namespace

gmap eps_canonicalize(const gmap& psi, const typing_info& ty) {
    std::optional<gmap> best;
    for (auto& eps : all_admissible_eps(ty)) {
        gmap cand = r_eps_conjugate(psi, eps);
        if (!best || map_tiebreak(cand, *best) < 0) best = cand;
    }
    return *best;
}

std::vector<std::vector<int>> automorphism_group(const gmap& psi, const typing_info& ty) {
    std::vector<std::vector<int>> out;
    for (auto& eps : all_admissible_eps(ty)) {
        gmap cand = r_eps_conjugate(psi, eps);
        if ((cand - psi).is_zero()) out.push_back(eps);
    }
    // group closure check
    auto find = [&](const std::vector<int>& e) {
        for (auto& f : out)
            if (f == e) return true;
        return false;
    };
    for (auto& a : out)
        for (auto& b : out) {
            std::vector<int> c(a.size());
            for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
            if (!find(c)) throw structural_error("automorphism_group: closure check failed");
        }
    return out;
}

family_nf family_normal_form(const involution_family& fam) {
    validate_involution_family(fam);
    const int p = fam.p;
    const int D = fam.tau1j.front().trunc();

    family_nf out;
    out.p = p;
    gmap tau1 = fam.tau1();
    auto lambda_full = multiplier_of_tau(tau1, p);  // throws unless in Lambda shape
    out.lambda1hat.assign(lambda_full.begin(), lambda_full.begin() + p);
    for (int j = 0; j < p; ++j) out.Mhat.push_back(out.lambda1hat[j] * out.lambda1hat[j]);

    // typing from the linear multipliers
    std::vector<G> mu;
    std::vector<gaussian_rational> eigs;
    for (int j = 0; j < p; ++j) {
        G m0 = out.Mhat[j].coeff(multi_index(p));
        mu.push_back(m0);
        eigs.push_back(m0);
        eigs.push_back(m0.inv());
    }
    eigen_data ed = classify_eigenvalues_list(eigs);
    out.typing = ed.typing;
    for (int j = 0; j < p; ++j)
        if (!(ed.mu[j] == mu[j]))
            throw structural_error("family_normal_form: multipliers not in canonical order");

    // B1 from the linear parts
    linear_family lf;
    lf.p = p;
    for (auto& t : fam.tau1j) lf.t1j.push_back(t.linear_matrix());
    lf.rho = fam.rho.linear_matrix();
    eigen_data edl = ed;
    for (int j = 0; j < p; ++j) edl.lambda[j] = out.lambda1hat[j].coeff(multi_index(p));
    out.b1 = extract_b(lf, edl);

    // non-degeneracy: (genB) solvable only with nu = I
    for (auto& sol : genb_solutions(out.b1)) {
        bool id = true;
        for (size_t j = 0; j < sol.nu.size(); ++j)
            if (sol.nu[j] != (int)j) id = false;
        if (!id) {
            std::string nus;
            for (auto v : sol.nu) nus += std::to_string(v + 1);
            throw condition_error("genB non-degeneracy",
                                  "the B-matrix admits the extra symmetry nu = (" + nus + ")");
        }
    }

    out.model = model_family(out.lambda1hat, out.b1, D);
    // the model family must compose to tau1
    gmap comp = out.model.front();
    for (int j = 1; j < p; ++j) comp = compose(comp, out.model[j]);
    if (!(comp - tau1).is_zero())
        throw structural_error("family_normal_form: model family does not compose to tau_1");

    gmap phi1 = linearize_family(fam, out.model);
    auto dec = family_centralizer_decompose(phi1, out.lambda1hat, out.b1);
    // Psi must commute with tau1 (membership in C(tau-hat_1))
    if (!(compose(dec.phi1, tau1) - compose(tau1, dec.phi1)).is_zero())
        throw structural_error("family_normal_form: Psi is not in C(tau-hat_1)");
    out.psi_canonical = eps_canonicalize(dec.phi1, out.typing);
    out.eps_group = automorphism_group(out.psi_canonical, out.typing);
    return out;
}

realize_result manifold_normal_form(const family_nf& nf, const gmap& rho, int trunc) {
    const int p = nf.p;
    gmap w = w_map(nf.lambda1hat, nf.b1, trunc);
    gmap chi = compose(w, invert_map(nf.psi_canonical));
    involution_family fam;
    fam.p = p;
    for (auto& t : nf.model) {
        gmap psiinv = invert_map(nf.psi_canonical);
        fam.tau1j.push_back(compose(nf.psi_canonical, compose(t, psiinv)));
    }
    fam.rho = rho;
    return realize_with_linearizer(fam, chi);
}

bool family_nf_equal(const family_nf& a, const family_nf& b) {
    if (a.p != b.p || !(a.typing == b.typing)) return false;
    for (int j = 0; j < a.p; ++j)
        if (!(a.Mhat[j] == b.Mhat[j])) return false;
    if (!(a.psi_canonical == b.psi_canonical)) return false;
    if (a.eps_group != b.eps_group) return false;
    return true;
}

}  // namespace mosweb
