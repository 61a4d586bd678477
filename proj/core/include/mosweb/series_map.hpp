#pragma once

#include <map>
#include <vector>

#include "mosweb/matrix.hpp"
#include "mosweb/series.hpp"

namespace mosweb {

// Tuple of series representing a formal map germ at the origin.
// flavor: holomorphic, or anti-holomorphic meaning x -> core(conj x).
template <class K>
class series_map {
public:
    using traits = scalar_traits<K>;

    series_map() = default;
    series_map(std::vector<series<K>> comps, bool anti = false)
        : comps_(std::move(comps)), anti_(anti) {
        for (auto& c : comps_) c.check_compat(comps_.front());
    }

    static series_map identity(int n, int trunc) {
        std::vector<series<K>> c;
        c.reserve(n);
        for (int j = 0; j < n; ++j) c.push_back(series<K>::variable(n, trunc, j, traits::one()));
        return series_map(std::move(c));
    }
    static series_map from_linear(const matrix<K>& m, int trunc, bool anti = false) {
        std::vector<series<K>> c;
        c.reserve(m.rows());
        for (int i = 0; i < m.rows(); ++i) {
            series<K> s(m.cols(), trunc);
            for (int j = 0; j < m.cols(); ++j)
                if (!traits::prune(m(i, j)))
                    s.add_term(multi_index::unit(m.cols(), j), m(i, j));
            c.push_back(std::move(s));
        }
        return series_map(std::move(c), anti);
    }

    int out_dim() const { return (int)comps_.size(); }
    int in_dim() const { return comps_.empty() ? 0 : comps_.front().dim(); }
    int trunc() const { return comps_.empty() ? 0 : comps_.front().trunc(); }
    bool anti() const { return anti_; }
    void set_anti(bool a) { anti_ = a; }

    const series<K>& operator[](int i) const { return comps_[i]; }
    series<K>& operator[](int i) { return comps_[i]; }
    const std::vector<series<K>>& comps() const { return comps_; }

    bool has_constant_term() const {
        multi_index z(in_dim());
        for (auto& c : comps_)
            if (!traits::prune(c.coeff(z))) return true;
        return false;
    }

    matrix<K> linear_matrix() const {
        matrix<K> m(out_dim(), in_dim());
        for (int i = 0; i < out_dim(); ++i)
            for (int j = 0; j < in_dim(); ++j) m(i, j) = comps_[i].coeff(multi_index::unit(in_dim(), j));
        return m;
    }
    bool is_tangent_to_identity() const {
        if (anti_ || out_dim() != in_dim() || has_constant_term()) return false;
        series_map lin = from_linear(linear_matrix(), trunc());
        series_map id = identity(in_dim(), trunc());
        for (int i = 0; i < out_dim(); ++i)
            if (!(lin.comps_[i] - id.comps_[i]).residue_ok()) return false;
        return true;
    }

    series_map conj_coeffs() const {
        std::vector<series<K>> c;
        c.reserve(comps_.size());
        for (auto& s : comps_) c.push_back(s.conj_coeffs());
        return series_map(std::move(c), anti_);
    }

    // componentwise difference of cores (flavors must agree)
    friend series_map operator-(const series_map& a, const series_map& b) {
        if (a.anti_ != b.anti_) throw structural_error("series_map: flavor mismatch in difference");
        if (a.out_dim() != b.out_dim()) throw structural_error("series_map: size mismatch");
        std::vector<series<K>> c;
        c.reserve(a.comps_.size());
        for (size_t i = 0; i < a.comps_.size(); ++i) c.push_back(a.comps_[i] - b.comps_[i]);
        return series_map(std::move(c), a.anti_);
    }
    friend series_map operator+(const series_map& a, const series_map& b) {
        if (a.anti_ != b.anti_) throw structural_error("series_map: flavor mismatch in sum");
        std::vector<series<K>> c;
        c.reserve(a.comps_.size());
        for (size_t i = 0; i < a.comps_.size(); ++i) c.push_back(a.comps_[i] + b.comps_[i]);
        return series_map(std::move(c), a.anti_);
    }

    bool residue_ok() const {
        for (auto& c : comps_)
            if (!c.residue_ok()) return false;
        return true;
    }
    bool is_zero() const {
        for (auto& c : comps_)
            if (!c.is_zero()) return false;
        return true;
    }

    series_map truncated(int d) const {
        std::vector<series<K>> c;
        c.reserve(comps_.size());
        for (auto& s : comps_) c.push_back(s.truncated(d));
        return series_map(std::move(c), anti_);
    }

    std::vector<K> eval(std::vector<K> x) const {
        if (anti_)
            for (auto& v : x) v = traits::conj(v);
        std::vector<K> y;
        y.reserve(comps_.size());
        for (auto& c : comps_) y.push_back(c.eval(x));
        return y;
    }

    friend bool operator==(const series_map& a, const series_map& b) {
        if (a.anti_ != b.anti_ || a.out_dim() != b.out_dim()) return false;
        for (int i = 0; i < a.out_dim(); ++i)
            if (!(a.comps_[i] == b.comps_[i])) return false;
        return true;
    }

private:
    std::vector<series<K>> comps_;
    bool anti_ = false;
};

namespace detail {

template <class K>
series<K> taylor_shift(const series<K>& g, const std::vector<series<K>>& H);

// outer components composed with inner map, both plain (no flavor handling)
template <class K>
std::vector<series<K>> compose_core(const std::vector<series<K>>& outer,
                                    const std::vector<series<K>>& inner) {
    using traits = scalar_traits<K>;
    if (outer.empty()) return {};
    const int n_in = (int)inner.size();
    if (outer.front().dim() != n_in)
        throw structural_error("compose: outer arity differs from inner component count");
    const int trunc = outer.front().trunc();
    for (auto& f : inner) {
        if (f.trunc() != trunc) throw structural_error("compose: truncation degree mismatch");
        if (!traits::prune(f.coeff(multi_index(f.dim()))))
            throw structural_error("compose: inner map must fix the origin (germs only)");
    }
    const int dim_res = inner.front().dim();

    // monomial fast path: every inner component is a single term
    bool all_monomial = true;
    for (auto& f : inner)
        if (f.size() > 1) {
            all_monomial = false;
            break;
        }
    if (all_monomial) {
        std::vector<series<K>> out;
        out.reserve(outer.size());
        for (auto& g : outer) {
            series<K> r(dim_res, trunc);
            std::map<multi_index, K> acc;
            for (auto& [P, c] : g.terms()) {
                K coeff = c;
                multi_index m(dim_res);
                bool dead = false;
                for (int i = 0; i < n_in && !dead; ++i) {
                    if (P[i] == 0) continue;
                    if (inner[i].is_zero()) {
                        dead = true;
                        break;
                    }
                    auto& t = inner[i].terms().front();
                    for (int k = 0; k < P[i]; ++k) {
                        coeff = coeff * t.second;
                        m = m + t.first;
                    }
                }
                if (dead || m.degree() > trunc) continue;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, std::move(coeff));
                else
                    it->second += coeff;
            }
            for (auto& [m, c] : acc)
                if (!traits::prune(c)) r.add_term(m, c);
            out.push_back(std::move(r));
        }
        return out;
    }

    // near-identity Taylor path: inner = I + H with ord H >= 2 and H sparse
    if (n_in == dim_res) {
        std::vector<series<K>> H;
        bool near_id = true;
        size_t hterms = 0;
        for (int i = 0; i < n_in; ++i) {
            series<K> h = inner[i] - series<K>::variable(dim_res, trunc, i, traits::one());
            if (h.order() < 2) {
                near_id = false;
                break;
            }
            hterms += h.size();
            H.push_back(std::move(h));
        }
        if (near_id && hterms <= 32) {
            std::vector<series<K>> out;
            out.reserve(outer.size());
            for (auto& g : outer) out.push_back(taylor_shift(g, H));
            return out;
        }
    }

    // generic path: cached monomial powers of the inner map
    std::map<multi_index, series<K>> pw;
    pw.emplace(multi_index(n_in), series<K>::constant(dim_res, trunc, traits::one()));
    // recursive power builder along canonical parent chains
    auto get_pow = [&](auto&& self, const multi_index& P) -> const series<K>& {
        auto it = pw.find(P);
        if (it != pw.end()) return it->second;
        int i = P.first_nonzero();
        multi_index Q = P;
        Q[i] -= 1;
        const series<K>& base = self(self, Q);
        series<K> s = base * inner[i];
        return pw.emplace(P, std::move(s)).first->second;
    };
    std::vector<series<K>> out;
    out.reserve(outer.size());
    for (auto& g : outer) {
        series<K> r(dim_res, trunc);
        for (auto& [P, c] : g.terms()) {
            const series<K>& p = get_pow(get_pow, P);
            r += p * c;
        }
        out.push_back(std::move(r));
    }
    return out;
}

// g(x + H(x)) via the Taylor expansion over derivative multi-indices
template <class K>
series<K> taylor_shift(const series<K>& g, const std::vector<series<K>>& H) {
    using traits = scalar_traits<K>;
    const int n = (int)H.size();
    const int trunc = g.trunc();
    series<K> res(g.dim(), trunc);
    // rec(i, dg) adds sum over alpha supported on vars >= i of (d^a g / a!) H^a
    auto rec = [&](auto&& self, int i, const series<K>& dg, const series<K>& hprod) -> void {
        if (dg.is_zero() || hprod.is_zero()) return;
        if (i == n) {
            res += dg * hprod;
            return;
        }
        self(self, i + 1, dg, hprod);
        if (H[i].is_zero()) return;
        series<K> cur = dg;
        series<K> hp = hprod;
        for (int k = 1; k <= trunc; ++k) {
            cur = cur.derivative(i);
            cur.scale(traits::one() / traits::from_long(k));
            hp = hp * H[i];
            if (cur.is_zero() || hp.is_zero()) break;
            self(self, i + 1, cur, hp);
        }
    };
    series<K> one = series<K>::constant(g.dim(), trunc, traits::one());
    rec(rec, 0, g, one);
    return res;
}

}  // namespace detail

// flavor-aware composition outer o inner
template <class K>
series_map<K> compose(const series_map<K>& outer, const series_map<K>& inner) {
    std::vector<series<K>> inner_core = inner.comps();
    if (outer.anti())
        for (auto& c : inner_core) c = c.conj_coeffs();
    auto out = detail::compose_core(outer.comps(), inner_core);
    return series_map<K>(std::move(out), outer.anti() != inner.anti());
}

// inverse of a holomorphic map with invertible linear part
template <class K>
series_map<K> invert_map(const series_map<K>& f) {
    using traits = scalar_traits<K>;
    if (f.anti()) throw structural_error("invert_map: holomorphic flavor required");
    if (f.out_dim() != f.in_dim()) throw structural_error("invert_map: map must be square");
    if (f.has_constant_term()) throw structural_error("invert_map: germ at origin required");
    const int n = f.in_dim(), D = f.trunc();
    matrix<K> L = f.linear_matrix();
    matrix<K> Linv = L.inverse();  // throws if singular
    // g = Linv o f = I + H, ord H >= 2
    series_map<K> g = compose(series_map<K>::from_linear(Linv, D), f);
    series_map<K> id = series_map<K>::identity(n, D);
    series_map<K> H = g - id;
    for (int i = 0; i < n; ++i)
        if (!H[i].is_zero() && H[i].order() < 2)
            throw structural_error("invert_map: linear part not factored cleanly");
    // X = I - H o X, gains one correct order per pass
    series_map<K> X = id;
    for (int it = 0; it < D; ++it) {
        series_map<K> HX = compose(H, X);
        if (HX.is_zero()) break;
        series_map<K> Xn = id - HX;
        X = std::move(Xn);
    }
    return compose(X, series_map<K>::from_linear(Linv, D));
}

// rho o f o rho for an anti-holomorphic involution rho
template <class K>
series_map<K> conjugate_by_rho(const series_map<K>& f, const series_map<K>& rho) {
    if (!rho.anti()) throw structural_error("conjugate_by_rho: rho must be anti-holomorphic");
    series_map<K> rr = compose(rho, rho);
    series_map<K> id = series_map<K>::identity(rho.in_dim(), rho.trunc());
    if (!(rr - id).residue_ok())
        throw structural_error("conjugate_by_rho: rho is not an involution up to the truncation degree");
    return compose(rho, compose(f, rho));
}

}  // namespace mosweb
