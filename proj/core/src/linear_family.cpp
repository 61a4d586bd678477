#include "mosweb/linear_family.hpp"

namespace mosweb {

using G = gaussian_rational;

gmat linear_family::t1() const {
    gmat m = gmat::identity(2 * p);
    for (auto& t : t1j) m = m * t;
    return m;
}
gmat linear_family::t2() const {
    gmat T1 = t1();
    return rho * T1.conj() * rho.conj();
}
gmat linear_family::s() const { return t1() * t2(); }

gmat antilinear_conjugate(const gmat& r_core, const gmat& basis) {
    return basis.inverse() * r_core * basis.conj();
}

namespace {

int rank_of_stack(const std::vector<gmat>& ms) {
    if (ms.empty()) return 0;
    int rows = 0;
    for (auto& m : ms) rows += m.rows();
    gmat st(rows, ms[0].cols());
    int r0 = 0;
    for (auto& m : ms) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) st(r0 + i, j) = m(i, j);
        r0 += m.rows();
    }
    return st.rank();
}

// invariant linear forms of T: left eigenvectors with eigenvalue 1
std::vector<std::vector<G>> invariant_forms(const gmat& t) {
    gmat m = t.transpose() - gmat::identity(t.rows());
    return m.kernel();
}

// scalar alpha with x = alpha * y (exact); nullopt if not proportional
std::optional<G> proportionality(const std::vector<G>& x, const std::vector<G>& y) {
    int pivot = -1;
    for (size_t i = 0; i < y.size(); ++i)
        if (!y[i].is_zero()) {
            pivot = (int)i;
            break;
        }
    if (pivot < 0) return std::nullopt;
    G a = x[pivot] / y[pivot];
    for (size_t i = 0; i < x.size(); ++i)
        if (!(x[i] == a * y[i])) return std::nullopt;
    return a;
}

std::vector<G> mat_apply(const gmat& m, const std::vector<G>& v) { return m.apply(v); }

std::vector<G> conj_vec(std::vector<G> v) {
    for (auto& x : v) x = x.conj();
    return v;
}

// c with c / conj(c) = w, |w| = 1; c = 1 when nothing to do
G gauge_scalar(const G& w) {
    if (w == G(1)) return G(1);
    if (w == G(-1)) return G::i();
    return G(1) + w;
}

}  // namespace

void validate_family(const linear_family& fam) {
    const int p = fam.p;
    const int n = 2 * p;
    if ((int)fam.t1j.size() != p) throw structural_error("linear_family: expected p involutions");
    gmat id = gmat::identity(n);
    for (auto& t : fam.t1j) {
        if (!((t * t) == id)) throw structural_error("linear_family: T_1j is not an involution");
        gmat d = t - id;
        if (d.rank() != 1)
            throw structural_error("linear_family: Fix(T_1j) is not a hyperplane");
    }
    for (size_t i = 0; i < fam.t1j.size(); ++i)
        for (size_t j = i + 1; j < fam.t1j.size(); ++j)
            if (!((fam.t1j[i] * fam.t1j[j]) == (fam.t1j[j] * fam.t1j[i])))
                throw structural_error("linear_family: involutions do not commute");
    std::vector<gmat> diffs;
    for (auto& t : fam.t1j) diffs.push_back(t - id);
    if (rank_of_stack(diffs) != p)
        throw structural_error("linear_family: intersection of fixed hyperplanes has wrong dimension");
    if (!((fam.rho * fam.rho.conj()) == id))
        throw structural_error("linear_family: rho is not an anti-holomorphic involution");

    // invariant-linear-form condition: the T1- and T2-invariant forms meet trivially
    gmat T1 = fam.t1();
    gmat T2 = fam.t2();
    auto f1 = invariant_forms(T1);
    auto f2 = invariant_forms(T2);
    if ((int)f1.size() != p || (int)f2.size() != p)
        throw structural_error("linear_family: invariant linear forms have wrong dimension");
    gmat both(n, 2 * p);
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < n; ++i) {
            both(i, k) = f1[k][i];
            both(i, p + k) = f2[k][i];
        }
    if (both.rank() != n)
        throw structural_error(
            "linear_family: invariant linear forms of T1 and T2 intersect nontrivially");
}

gmat that1_matrix(const eigen_data& ed) {
    const int p = ed.p;
    gmat m(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) {
        const G& l = ed.lambda_or_throw(j);
        m(j, p + j) = l;
        m(p + j, j) = l.inv();
    }
    return m;
}
gmat that2_matrix(const eigen_data& ed) {
    const int p = ed.p;
    gmat m(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) {
        const G& l = ed.lambda_or_throw(j);
        m(j, p + j) = l.inv();
        m(p + j, j) = l;
    }
    return m;
}
gmat shat_matrix(const eigen_data& ed) {
    const int p = ed.p;
    gmat m(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) {
        m(j, j) = ed.mu[j];
        m(p + j, p + j) = ed.mu[j].inv();
    }
    return m;
}
gmat rhohat_matrix(const typing_info& ty) {
    const int p = ty.p();
    gmat m(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) {
        switch (ty.type_of(j)) {
            case block_type::elliptic:
                m(j, p + j) = G(1);
                m(p + j, j) = G(1);
                break;
            case block_type::hyperbolic:
                m(j, j) = G(1);
                m(p + j, p + j) = G(1);
                break;
            case block_type::complex_pair: {
                int k = ty.partner(j);
                m(j, k) = G(1);
                m(p + j, p + k) = G(1);
                break;
            }
        }
    }
    return m;
}

linear_normal_form normalize_linear(const linear_family& fam, mpfr_prec_t prec) {
    validate_family(fam);
    const int p = fam.p;
    const int n = 2 * p;
    gmat T1 = fam.t1();
    gmat S = fam.s();
    eigen_data ed = classify_eigenvalues(S, prec);
    if (ed.p != p) throw structural_error("normalize_linear: spectrum size mismatch");
    if (!ed.lambda_exact)
        throw not_representable_error(
            "normalize_linear: some lambda_j is not Gaussian rational; use the interval backend");

    auto eigvec = [&](const G& mu) {
        gmat m = S - gmat::identity(n) * mu;
        auto k = m.kernel();
        if (k.size() != 1) throw condition_error("condition E", "eigenspace is not one-dimensional");
        return k[0];
    };
    auto rho_apply = [&](const std::vector<G>& v) { return mat_apply(fam.rho, conj_vec(v)); };

    std::vector<std::vector<G>> cols_xi(p), cols_eta(p);
    for (int j = 0; j < p; ++j) {
        const G& mu = ed.mu[j];
        const G& lam = *ed.lambda[j];
        switch (ed.typing.type_of(j)) {
            case block_type::elliptic: {
                auto u = eigvec(mu);
                auto v = rho_apply(u);
                auto alpha = proportionality(mat_apply(T1, u), v);
                if (!alpha) throw structural_error("normalize_linear: T1 u not aligned with rho u");
                G w = (lam * (*alpha)).inv();
                if (!(w * w.conj() == G(1)))
                    throw structural_error("normalize_linear: elliptic gauge is not unimodular");
                G c = gauge_scalar(w);
                for (auto& x : u) x *= c;
                v = rho_apply(u);
                cols_xi[j] = u;
                cols_eta[j] = v;
                break;
            }
            case block_type::hyperbolic: {
                auto u = eigvec(mu);
                auto a = proportionality(rho_apply(u), u);
                if (!a) throw structural_error("normalize_linear: rho does not preserve E(mu_h)");
                G c = gauge_scalar(*a);
                for (auto& x : u) x *= c;
                auto v = mat_apply(T1, u);
                auto b = proportionality(rho_apply(v), v);
                if (!b) throw structural_error("normalize_linear: rho does not preserve T1 E(mu_h)");
                G c2 = gauge_scalar(*b);
                for (auto& x : v) x *= c2;
                // now rho u = u, rho v = v; scale v by the real s = beta*lambda
                auto beta = proportionality(mat_apply(T1, u), v);
                if (!beta) throw structural_error("normalize_linear: hyperbolic alignment failed");
                G sca = (*beta) * lam;
                if (!sca.is_real())
                    throw structural_error("normalize_linear: hyperbolic rescale is not real");
                for (auto& x : v) x *= sca;
                cols_xi[j] = u;
                cols_eta[j] = v;
                break;
            }
            case block_type::complex_pair: {
                if (ed.typing.is_s_high(j)) break;  // filled by the partner
                int k = ed.typing.partner(j);
                auto u = eigvec(mu);
                auto ut = rho_apply(u);
                auto ustar = mat_apply(T1, u);
                for (auto& x : ustar) x *= lam;
                auto ustart = rho_apply(ustar);
                cols_xi[j] = u;
                cols_xi[k] = ut;
                cols_eta[j] = ustar;
                cols_eta[k] = ustart;
                break;
            }
        }
    }

    gmat basis(n, n);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) {
            basis(i, j) = cols_xi[j][i];
            basis(i, p + j) = cols_eta[j][i];
        }
    gmat basis_inv = basis.inverse();

    linear_normal_form nf;
    nf.eigen = ed;
    nf.basis = basis;
    nf.basis_inv = basis_inv;
    nf.normalized.p = p;
    for (auto& t : fam.t1j) nf.normalized.t1j.push_back(basis_inv * t * basis);
    nf.normalized.rho = antilinear_conjugate(fam.rho, basis);

    if (!(nf.normalized.t1() == that1_matrix(ed)))
        throw structural_error("normalize_linear: T1 failed to reach its normal form");
    if (!(nf.normalized.rho == rhohat_matrix(ed.typing)))
        throw structural_error("normalize_linear: rho failed to reach its normal form");
    if (!((basis_inv * S * basis) == shat_matrix(ed)))
        throw structural_error("normalize_linear: S failed to reach its normal form");
    return nf;
}

gmat e_lambda_matrix(const std::vector<G>& lambda) {
    const int p = (int)lambda.size();
    gmat m(2 * p, 2 * p);
    G half(1, 2);
    for (int j = 0; j < p; ++j) {
        m(j, j) = half;
        m(j, p + j) = -lambda[j] * half;
        m(p + j, j) = lambda[j].inv() * half;
        m(p + j, p + j) = half;
    }
    return m;
}
gmat b_star_matrix(const gmat& b) {
    const int p = b.rows();
    gmat m(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) m(j, j) = G(1);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(p + i, p + j) = b(i, j);
    return m;
}
gmat z_j_matrix(int p, int j) {
    gmat m = gmat::identity(2 * p);
    m(p + j, p + j) = G(-1);
    return m;
}

std::vector<gmat> family_from_b(const std::vector<G>& lambda, const gmat& b) {
    const int p = (int)lambda.size();
    gmat e = e_lambda_matrix(lambda);
    gmat einv = e.inverse();
    gmat bs = b_star_matrix(b);
    gmat bsinv = bs.inverse();
    std::vector<gmat> out;
    for (int j = 0; j < p; ++j) out.push_back(e * bs * z_j_matrix(p, j) * bsinv * einv);
    return out;
}

gmat extract_b(const linear_family& fam, const eigen_data& ed) {
    const int p = fam.p;
    std::vector<G> lambda;
    for (int j = 0; j < p; ++j) lambda.push_back(ed.lambda_or_throw(j));
    gmat e = e_lambda_matrix(lambda);
    gmat einv = e.inverse();
    gmat b(p, p);
    for (int j = 0; j < p; ++j) {
        gmat f = einv * fam.t1j[j] * e;
        // expect diag(I_p, C_j) with C_j a reflection
        for (int i = 0; i < p; ++i)
            for (int k = 0; k < 2 * p; ++k) {
                G expect = (i == k) ? G(1) : G(0);
                if (!(f(i, k) == expect))
                    throw structural_error("extract_b: family is not in the product normal form");
                if (!(f(k, i) == expect))
                    throw structural_error("extract_b: family is not in the product normal form");
            }
        gmat c(p, p);
        for (int i = 0; i < p; ++i)
            for (int k = 0; k < p; ++k) c(i, k) = f(p + i, p + k);
        gmat cm = c + gmat::identity(p);
        auto ker = cm.kernel();
        if (ker.size() != 1)
            throw structural_error("extract_b: skew direction of T_1j is not one-dimensional");
        // deterministic column scale: diagonal entry = 1 when possible,
        // else first nonzero entry = 1
        auto col = ker[0];
        G pivot = col[j];
        if (pivot.is_zero())
            for (auto& x : col)
                if (!x.is_zero()) {
                    pivot = x;
                    break;
                }
        for (int i = 0; i < p; ++i) b(i, j) = col[i] / pivot;
    }
    // reconstruction must reproduce the family exactly
    auto rebuilt = family_from_b(lambda, b);
    for (int j = 0; j < p; ++j)
        if (!(rebuilt[j] == fam.t1j[j]))
            throw structural_error("extract_b: reconstruction check failed");
    return b;
}

linear_family jordan_quadric(const gmat& K) {
    const int p = K.rows();
    if (K.cols() != p) throw structural_error("jordan_quadric: K must be square");
    gmat d = K - K.conj().inverse();
    if (d.det().is_zero())
        throw condition_error("transversality",
                              "det(K - conj(K)^{-1}) = 0: fixed-point sets do not intersect "
                              "transversally");
    linear_family fam;
    fam.p = p;
    gmat outer(2 * p, 2 * p);  // diag(K, I)
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) outer(i, j) = K(i, j);
    for (int i = 0; i < p; ++i) outer(p + i, p + i) = G(1);
    gmat outer_inv = outer.inverse();
    for (int j = 0; j < p; ++j) {
        gmat w(2 * p, 2 * p);  // swap of the pair (j, p+j)
        for (int i = 0; i < 2 * p; ++i)
            if (i != j && i != p + j) w(i, i) = G(1);
        w(j, p + j) = G(1);
        w(p + j, j) = G(1);
        fam.t1j.push_back(outer * w * outer_inv);
    }
    gmat r(2 * p, 2 * p);
    for (int i = 0; i < p; ++i) {
        r(i, p + i) = G(1);
        r(p + i, i) = G(1);
    }
    fam.rho = r;
    validate_family(fam);
    return fam;
}

}  // namespace mosweb
