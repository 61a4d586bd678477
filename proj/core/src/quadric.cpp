#include "mosweb/quadric.hpp"

#include <algorithm>

namespace mosweb {

using G = gaussian_rational;

void validate_manifold(const manifold_spec& m) {
    if ((int)m.E.size() != m.p) throw structural_error("manifold_spec: expected p series");
    for (auto& e : m.E) {
        if (e.dim() != 2 * m.p) throw structural_error("manifold_spec: E_j must have 2p variables");
        if (e.trunc() != m.trunc) throw structural_error("manifold_spec: truncation mismatch");
        if (!e.coeff(multi_index(2 * m.p)).is_zero())
            throw structural_error("manifold_spec: E_j(0) != 0");
        for (int v = 0; v < 2 * m.p; ++v)
            if (!e.coeff(multi_index::unit(2 * m.p, v)).is_zero())
                throw structural_error("manifold_spec: E_j has linear terms");
    }
}

quad_forms quadratic_parts(const manifold_spec& m) {
    const int p = m.p;
    quad_forms qf;
    qf.H.assign(p, gmat(p, p));
    qf.Q.assign(p, gmat(p, p));
    for (int j = 0; j < p; ++j) {
        for (auto& [mi, c] : m.E[j].terms()) {
            if (mi.degree() != 2) continue;
            int a = -1, b = -1;
            for (int v = 0; v < 2 * p; ++v)
                for (int k = 0; k < mi[v]; ++k) (a < 0 ? a : b) = v;
            // monomial x_a x_b with a <= b
            if (a >= p && b >= p) {
                // w_a w_b
                int i1 = a - p, i2 = b - p;
                if (i1 == i2)
                    qf.Q[j](i1, i1) += c;
                else {
                    G half(1, 2);
                    qf.Q[j](i1, i2) += c * half;
                    qf.Q[j](i2, i1) += c * half;
                }
            } else if (a < p && b >= p) {
                qf.H[j](a, b - p) += c;
            }
            // pure z'^2 terms do not interact with deck transformations
        }
    }
    return qf;
}

namespace {

std::vector<G> mat_vec(const gmat& m, const std::vector<G>& v) { return m.apply(v); }

bool is_zero_vec(const std::vector<G>& v) {
    for (auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// candidate generator data for one skew direction v
struct generator {
    std::vector<G> v, r, s;
    std::vector<G> kappa;
};

std::optional<generator> try_generator(const quad_forms& qf, std::vector<G> v) {
    const int p = (int)qf.Q.size();
    generator g;
    g.v = std::move(v);
    g.kappa.resize(p);
    for (int j = 0; j < p; ++j) {
        auto qv = mat_vec(qf.Q[j], g.v);
        G k(0);
        for (int i = 0; i < p; ++i) k += g.v[i] * qv[i];
        g.kappa[j] = k;
    }
    int jstar = -1;
    for (int j = 0; j < p; ++j)
        if (!g.kappa[j].is_zero()) {
            jstar = j;
            break;
        }
    if (jstar < 0) return std::nullopt;  // q(v) = 0: condition-B degeneracy for this direction
    auto rv = mat_vec(qf.Q[jstar], g.v);
    g.r.resize(p);
    for (int i = 0; i < p; ++i) g.r[i] = rv[i] / g.kappa[jstar];
    auto hv = mat_vec(qf.H[jstar], g.v);  // z-coefficient vector of the deck equation
    g.s.resize(p);
    for (int i = 0; i < p; ++i) g.s[i] = -hv[i] / g.kappa[jstar];
    // consistency: Q_j v = kappa_j r and H_j^T v = -kappa_j s for all j
    for (int j = 0; j < p; ++j) {
        auto qv = mat_vec(qf.Q[j], g.v);
        auto hj = mat_vec(qf.H[j], g.v);
        for (int i = 0; i < p; ++i) {
            if (!(qv[i] == g.kappa[j] * g.r[i])) return std::nullopt;
            if (!(hj[i] == -(g.kappa[j] * g.s[i]))) return std::nullopt;
        }
    }
    return g;
}

gmat generator_matrix(int p, const generator& g) {
    // tau: z' = z, w' = w - v (2 r^T w - s^T z)
    gmat t = gmat::identity(2 * p);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) {
            t(p + i, p + k) -= G(2) * g.v[i] * g.r[k];
            t(p + i, k) += g.v[i] * g.s[k];
        }
    return t;
}

// normalize a projective vector: first nonzero = 1
std::vector<G> proj_normalize(std::vector<G> v) {
    G piv(0);
    for (auto& x : v)
        if (!x.is_zero()) {
            piv = x;
            break;
        }
    for (auto& x : v) x = x / piv;
    return v;
}

bool vec_eq(const std::vector<G>& a, const std::vector<G>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

int vec_tiebreak(const std::vector<G>& a, const std::vector<G>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = tiebreak_cmp(a[i], b[i]);
        if (c) return c;
    }
    return 0;
}

}  // namespace

deck_result deck_transformations_quadratic(const manifold_spec& m) {
    validate_manifold(m);
    const int p = m.p;
    quad_forms qf = quadratic_parts(m);

    // find an invertible member of the pencil of the Q_j
    gmat qc(p, p);
    bool have = false;
    std::vector<std::vector<long>> combos = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                                             {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 2, 3},
                                             {3, 1, 2}, {2, 3, 1}, {1, -1, 2}, {5, 7, 11}};
    for (auto& c : combos) {
        gmat q(p, p);
        for (int j = 0; j < p; ++j) q = q + qf.Q[j] * G(c[j % c.size()]);
        if (!q.det().is_zero()) {
            qc = q;
            have = true;
            break;
        }
    }
    if (!have)
        throw condition_error("condition B",
                              "the quadratic pencil q is degenerate (no invertible combination)");

    // candidate skew directions: common eigenvectors of the pencils qc^{-1} Q_j
    gmat qcinv = qc.inverse();
    std::vector<std::vector<G>> cands;
    if (p == 1) {
        cands.push_back({G(1)});
    } else {
        std::vector<gmat> ms;                          // non-scalar pencil members
        std::vector<std::vector<G>> root_lists;        // their distinct eigenvalues
        for (int j = 0; j < p; ++j) {
            gmat mj = qcinv * qf.Q[j];
            gmat scal = mj - gmat::identity(p) * mj(0, 0);
            if (scal.is_zero()) continue;
            gr_poly chi = char_poly(mj);
            auto roots = gaussian_roots(poly_squarefree_part(chi));
            if (!roots)
                throw not_representable_error(
                    "deck transformations: pencil eigenvalues are not Gaussian rational");
            ms.push_back(mj);
            root_lists.push_back(*roots);
        }
        if (ms.empty())
            throw condition_error("condition B", "pencil is scalar (degenerate q)");
        // intersect eigenspaces over all eigenvalue choices
        std::vector<size_t> pick(ms.size(), 0);
        for (;;) {
            gmat st((int)ms.size() * p, p);
            for (size_t b = 0; b < ms.size(); ++b) {
                gmat s = ms[b] - gmat::identity(p) * root_lists[b][pick[b]];
                for (int i = 0; i < p; ++i)
                    for (int j2 = 0; j2 < p; ++j2) st((int)b * p + i, j2) = s(i, j2);
            }
            auto ker = st.kernel();
            if (ker.size() > 1)
                throw condition_error("condition B",
                                      "a family of skew directions exists (degenerate q)");
            if (ker.size() == 1) cands.push_back(ker[0]);
            // advance the choice tuple
            size_t b = 0;
            while (b < pick.size() && ++pick[b] == root_lists[b].size()) pick[b++] = 0;
            if (b == pick.size()) break;
        }
    }

    std::vector<generator> gens;
    for (auto& v : cands) {
        auto g = try_generator(qf, proj_normalize(v));
        if (g) gens.push_back(*g);
    }
    std::sort(gens.begin(), gens.end(),
              [](const generator& a, const generator& b) { return vec_tiebreak(a.v, b.v) < 0; });
    gens.erase(std::unique(gens.begin(), gens.end(),
                           [](const generator& a, const generator& b) { return vec_eq(a.v, b.v); }),
               gens.end());

    if ((int)gens.size() < p)
        throw condition_error("condition D",
                              "only " + std::to_string(1L << gens.size()) + " of " +
                                  std::to_string(1L << p) + " deck transformations exist");
    if ((int)gens.size() > p)
        throw condition_error("condition B", "too many skew directions (degenerate q)");

    deck_result out;
    out.family.p = p;
    for (auto& g : gens) out.family.t1j.push_back(generator_matrix(p, g));
    gmat rho(2 * p, 2 * p);
    for (int i = 0; i < p; ++i) {
        rho(i, p + i) = G(1);
        rho(p + i, i) = G(1);
    }
    out.family.rho = rho;

    // verify E o tau = E exactly for all generators, via the series engine
    for (auto& t : out.family.t1j) {
        gmap tau = gmap::from_linear(t, m.trunc);
        for (auto& e : m.E) {
            gmap em({e});
            gmap et = compose(em, tau);
            if (!(et[0] - e).is_zero())
                throw structural_error("deck transformation does not preserve E");
        }
    }
    validate_family(out.family);

    // all 2^p products
    for (long mask = 0; mask < (1L << p); ++mask) {
        gmat t = gmat::identity(2 * p);
        for (int j = 0; j < p; ++j)
            if ((mask >> j) & 1) t = t * out.family.t1j[j];
        out.all_decks.push_back(t);
    }
    for (size_t i = 0; i < out.all_decks.size(); ++i)
        for (size_t j = i + 1; j < out.all_decks.size(); ++j)
            if (out.all_decks[i] == out.all_decks[j])
                throw condition_error("condition D", "deck transformations are not distinct");
    return out;
}

complex_type_result complex_type_mu(const G& gamma_s) {
    if (gamma_s.is_zero() || gamma_s == G(1) || gamma_s == G(1, 2))
        throw structural_error("complex_type_mu: gamma_s in {0, 1, 1/2} is excluded");
    complex_type_result r;
    r.mu = gamma_s.conj().inv() - G(1);
    if (r.mu == G(-1)) throw structural_error("complex_type_mu: mu_s = -1 is excluded");
    r.quadruple = {r.mu, r.mu.inv(), r.mu.conj().inv(), r.mu.conj()};
    // normalized representative: |mu| >= 1, Im mu >= 0
    r.normalized = r.mu;
    for (auto& c : r.quadruple) {
        bool mod_ok = cmp(c.norm2(), rational(1)) >= 0;
        bool im_ok = sgn(c.im()) >= 0;
        if (mod_ok && im_ok) {
            r.normalized = c;
            break;
        }
    }
    return r;
}

std::vector<G> gamma_from_lambda(const eigen_data& ed) {
    std::vector<G> gamma(ed.p);
    for (int j = 0; j < ed.p; ++j) {
        const G& l = ed.lambda_or_throw(j);
        switch (ed.typing.type_of(j)) {
            case block_type::elliptic:
                gamma[j] = (l + l.inv()).inv();
                if (!(sgn(gamma[j].re()) > 0 && cmp(gamma[j].re(), rational(1, 2)) < 0))
                    throw structural_error("gamma_e outside (0, 1/2)");
                break;
            case block_type::hyperbolic:
                gamma[j] = (l + l.conj()).inv();
                if (!(gamma[j].is_real() && cmp(gamma[j].re(), rational(1, 2)) > 0))
                    throw structural_error("gamma_h outside (1/2, inf)");
                break;
            case block_type::complex_pair:
                if (ed.typing.is_s_low(j)) {
                    gamma[j] = (G(1) + l.conj() * l.conj()).inv();
                    if (!(cmp(gamma[j].re(), rational(1, 2)) < 0 && sgn(gamma[j].im()) > 0))
                        throw structural_error("gamma_s outside {Re < 1/2, Im > 0}");
                } else {
                    gamma[j] = G(1) - gamma[ed.typing.partner(j)].conj();
                }
                break;
        }
    }
    return gamma;
}

std::vector<complex_interval> gamma_from_lambda_interval(const std::vector<complex_interval>& lambda,
                                                         const typing_info& ty) {
    std::vector<complex_interval> gamma;
    const complex_interval one(1);
    for (int j = 0; j < ty.p(); ++j) {
        const complex_interval& l = lambda[j];
        switch (ty.type_of(j)) {
            case block_type::elliptic:
                gamma.push_back((l + l.inv()).inv());
                break;
            case block_type::hyperbolic:
                gamma.push_back((l + l.conj()).inv());
                break;
            case block_type::complex_pair:
                if (ty.is_s_low(j))
                    gamma.push_back((one + l.conj() * l.conj()).inv());
                else
                    gamma.push_back(one - gamma[ty.partner(j)].conj());
                break;
        }
    }
    return gamma;
}

manifold_spec build_qbg(const gmat& bhat, const std::vector<G>& gamma, const typing_info& ty,
                        int trunc) {
    const int p = ty.p();
    manifold_spec m;
    m.p = p;
    m.trunc = trunc;
    const int n = 2 * p;
    for (int j = 0; j < p; ++j) {
        // L_j = sum_l bhat_{jl} (z_l + 2 gamma' w_{pair'}) with the s-pair cross terms
        gseries L(n, trunc);
        for (int l = 0; l < p; ++l) {
            if (bhat(j, l).is_zero()) continue;
            int wl;  // index of the conjugated coordinate paired with z_l
            G gcoef;
            if (ty.type_of(l) != block_type::complex_pair) {
                wl = l;
                gcoef = gamma[l];
            } else if (ty.is_s_low(l)) {
                wl = ty.partner(l);
                gcoef = gamma[ty.partner(l)];
            } else {
                wl = ty.partner(l);
                gcoef = gamma[ty.partner(l)];
            }
            L.add_term(multi_index::unit(n, l), bhat(j, l));
            L.add_term(multi_index::unit(n, p + wl), bhat(j, l) * G(2) * gcoef);
        }
        m.E.push_back(L * L);
    }
    validate_manifold(m);
    return m;
}

quadric_nf classify_quadric(const manifold_spec& m) {
    deck_result deck = deck_transformations_quadratic(m);
    linear_normal_form nf = normalize_linear(deck.family);
    gmat b = extract_b(nf.normalized, nf.eigen);

    quadric_nf out;
    out.typing = nf.eigen.typing;
    out.mu = nf.eigen.mu;
    for (int j = 0; j < nf.eigen.p; ++j) out.lambda.push_back(nf.eigen.lambda_or_throw(j));
    out.gamma = gamma_from_lambda(nf.eigen);
    out.basis_change = nf.basis;
    out.b_raw = b;

    // Bhat = B^{-1} diag(L) diag(I, Lambda_h^{1/2}, I)
    const int p = nf.eigen.p;
    std::vector<G> lfac(p), hfac(p, G(1));
    for (int j = 0; j < p; ++j) {
        const G& l = out.lambda[j];
        lfac[j] = (l * l + G(1)) / (l * (l * l - G(1)));
        if (out.typing.type_of(j) == block_type::hyperbolic) {
            auto rt = sqrt_exact(l);
            if (!rt)
                throw not_representable_error(
                    "classify_quadric: sqrt(lambda_h) is not Gaussian rational");
            hfac[j] = *rt;
        }
    }
    gmat bhat_raw = b.inverse() * gmat::diagonal(lfac) * gmat::diagonal(hfac);
    auto can = canonicalize_bhat(bhat_raw, out.typing);
    out.bhat = can.rep;
    out.bhat_witness = can.witness;
    out.equations = build_qbg(out.bhat, out.gamma, out.typing, m.trunc);
    return out;
}

// ---- realization ----------------------------------------------------------

gmap involution_family::tau1() const {
    gmap t = tau1j.front();
    for (size_t j = 1; j < tau1j.size(); ++j) t = compose(t, tau1j[j]);
    return t;
}
gmap involution_family::tau2() const { return conjugate_by_rho(tau1(), rho); }
gmap involution_family::sigma() const { return compose(tau1(), tau2()); }

void validate_involution_family(const involution_family& fam) {
    const int n = 2 * fam.p;
    if ((int)fam.tau1j.size() != fam.p)
        throw structural_error("involution_family: expected p involutions");
    int D = fam.tau1j.front().trunc();
    gmap id = gmap::identity(n, D);
    for (auto& t : fam.tau1j)
        if (!(compose(t, t) - id).is_zero())
            throw structural_error("involution_family: tau_1j^2 != I");
    for (size_t i = 0; i < fam.tau1j.size(); ++i)
        for (size_t j = i + 1; j < fam.tau1j.size(); ++j)
            if (!(compose(fam.tau1j[i], fam.tau1j[j]) - compose(fam.tau1j[j], fam.tau1j[i]))
                     .is_zero())
                throw structural_error("involution_family: tau_1j do not commute");
    if (!fam.rho.anti() || !(compose(fam.rho, fam.rho) - id).is_zero())
        throw structural_error("involution_family: rho is not an anti-holomorphic involution");
    // linear parts form a valid linear family
    linear_family lf;
    lf.p = fam.p;
    for (auto& t : fam.tau1j) lf.t1j.push_back(t.linear_matrix());
    lf.rho = fam.rho.linear_matrix();
    validate_family(lf);
}

involution_family to_involution_family(const linear_family& fam, int trunc) {
    involution_family f;
    f.p = fam.p;
    for (auto& t : fam.t1j) f.tau1j.push_back(gmap::from_linear(t, trunc));
    f.rho = gmap::from_linear(fam.rho, trunc, true);
    return f;
}

gmap group_average(const std::vector<gmap>& gens, int trunc) {
    const int p = (int)gens.size();
    const int n = gens.front().in_dim();
    gmap avg(std::vector<gseries>(n, gseries(n, trunc)));
    for (long mask = 0; mask < (1L << p); ++mask) {
        gmap g = gmap::identity(n, trunc);
        gmat lg = gmat::identity(n);
        for (int j = 0; j < p; ++j)
            if ((mask >> j) & 1) {
                g = compose(g, gens[j]);
                lg = lg * gens[j].linear_matrix();
            }
        gmap lginv_g = compose(gmap::from_linear(lg.inverse(), trunc), g);
        avg = avg + lginv_g;
    }
    G w(1, 1L << p);
    for (int i = 0; i < n; ++i) avg[i].scale(w);
    return avg;
}

realize_result realize(const involution_family& fam, int trunc) {
    validate_involution_family(fam);
    const int p = fam.p;
    const int n = 2 * p;

    // group averaging: A o tau_g = (L tau_g) o A, A tangent to the identity
    gmap avg = group_average(fam.tau1j, trunc);

    // Z-coordinates: Q^{-1} L(tau_1j) Q = Z_j
    std::vector<gmat> lin;
    for (auto& t : fam.tau1j) lin.push_back(t.linear_matrix());
    gmat id = gmat::identity(n);
    std::vector<std::vector<G>> skew;  // v_j: T_1j v = -v, T_1k v = v
    for (int j = 0; j < p; ++j) {
        auto k = (lin[j] + id).kernel();
        if (k.size() != 1) throw structural_error("realize: skew direction not one-dimensional");
        for (int k2 = 0; k2 < p; ++k2) {
            if (k2 == j) continue;
            auto tv = lin[k2].apply(k[0]);
            for (int i = 0; i < n; ++i)
                if (!(tv[i] == k[0][i]))
                    throw structural_error("realize: skew directions are not compatible");
        }
        skew.push_back(k[0]);
    }
    std::vector<gmat> diffs;
    for (auto& t : lin) diffs.push_back(t - id);
    gmat st((int)diffs.size() * n, n);
    for (int b = 0; b < (int)diffs.size(); ++b)
        for (int i = 0; i < n; ++i)
            for (int j2 = 0; j2 < n; ++j2) st(b * n + i, j2) = diffs[b](i, j2);
    auto fixed = st.kernel();
    if ((int)fixed.size() != p)
        throw structural_error("realize: common fixed space has wrong dimension");
    gmat Q(n, n);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) {
            Q(i, j) = fixed[j][i];
            Q(i, p + j) = skew[j][i];
        }
    gmat Qinv = Q.inverse();

    // chi = Q^{-1} o A conjugates tau_1j to Z_j
    gmap chi = compose(gmap::from_linear(Qinv, trunc), avg);
    return realize_with_linearizer(fam, chi);
}

realize_result realize_with_linearizer(const involution_family& fam, const gmap& chi) {
    const int p = fam.p;
    const int n = 2 * p;
    const int trunc = chi.trunc();
    for (int j = 0; j < p; ++j) {
        gmap lhs = compose(chi, fam.tau1j[j]);
        gmat zj(n, n);
        for (int i = 0; i < n; ++i) zj(i, i) = (i == p + j) ? G(-1) : G(1);
        gmap rhs = compose(gmap::from_linear(zj, trunc), chi);
        if (!(lhs - rhs).is_zero())
            throw structural_error("realize: simultaneous linearization failed");
    }

    // invariants A_j (first p comps) and skew-invariants Btilde_j (last p comps)
    std::vector<gseries> acomp(chi.comps().begin(), chi.comps().begin() + p);
    std::vector<gseries> bcomp(chi.comps().begin() + p, chi.comps().end());
    gmap amap(acomp);

    // phi = (A, conj(A o rho)); the second block is holomorphic after conjugation
    gmap a_rho = compose(amap, fam.rho);  // anti flavor
    std::vector<gseries> phic = acomp;
    for (auto& c : a_rho.comps()) phic.push_back(c.conj_coeffs());
    gmap phi(phic);
    gmat lphi = phi.linear_matrix();
    {
        gmat test = lphi;
        auto piv = test.rref();
        if ((int)piv.size() != n)
            throw condition_error(
                "conreal",
                "invariant linear forms of the two families intersect nontrivially; the "
                "realization map is singular");
    }
    gmap phiinv = invert_map(phi);

    realize_result out;
    out.linearizer = chi;
    out.phi = phi;
    out.manifold.p = p;
    out.manifold.trunc = trunc;
    for (int j = 0; j < p; ++j) {
        gseries b2 = bcomp[j] * bcomp[j];
        gmap b2m({b2});
        out.manifold.E.push_back(compose(b2m, phiinv)[0]);
    }
    validate_manifold(out.manifold);
    return out;
}

realize_result realize(const linear_family& fam, int trunc) {
    return realize(to_involution_family(fam, trunc), trunc);
}

}  // namespace mosweb
