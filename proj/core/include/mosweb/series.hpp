#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "mosweb/multiindex.hpp"
#include "mosweb/scalar.hpp"

namespace mosweb {

// Sparse formal power series truncated at total degree `trunc`.
// Terms are kept sorted graded-lexicographically with no prunable zeros.
template <class K>
class series {
public:
    using traits = scalar_traits<K>;
    using term = std::pair<multi_index, K>;

    series() = default;
    series(int dim, int trunc) : dim_(dim), trunc_(trunc) {}

    static series zero(int dim, int trunc) { return series(dim, trunc); }
    static series constant(int dim, int trunc, K c) {
        series s(dim, trunc);
        s.add_term(multi_index(dim), std::move(c));
        return s;
    }
    static series monomial(int dim, int trunc, const multi_index& m, K c) {
        series s(dim, trunc);
        if (m.degree() <= trunc) s.add_term(m, std::move(c));
        return s;
    }
    static series variable(int dim, int trunc, int j, K c) {
        return monomial(dim, trunc, multi_index::unit(dim, j), std::move(c));
    }

    int dim() const { return dim_; }
    int trunc() const { return trunc_; }
    const std::vector<term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    // min total degree of a stored term; trunc+1 when empty
    int order() const { return terms_.empty() ? trunc_ + 1 : terms_.front().first.degree(); }

    K coeff(const multi_index& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const term& t, const multi_index& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return traits::zero();
    }

    void add_term(const multi_index& m, K c) {
        if (m.dim != dim_) throw structural_error("series: index dimension mismatch");
        if (m.degree() > trunc_) return;
        if (traits::prune(c)) {
            // keep an existing slot consistent: explicit zero add is a no-op
            auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                       [](const term& t, const multi_index& k) { return t.first < k; });
            if (it != terms_.end() && it->first == m) {
                it->second += c;
                if (traits::prune(it->second)) terms_.erase(it);
            }
            return;
        }
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const term& t, const multi_index& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) {
            it->second += c;
            if (traits::prune(it->second)) terms_.erase(it);
        } else {
            terms_.insert(it, {m, std::move(c)});
        }
    }
    void set_coeff(const multi_index& m, K c) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const term& t, const multi_index& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) {
            if (traits::prune(c))
                terms_.erase(it);
            else
                it->second = std::move(c);
        } else if (!traits::prune(c) && m.degree() <= trunc_) {
            terms_.insert(it, {m, std::move(c)});
        }
    }

    series& operator+=(const series& o) {
        check_compat(o);
        std::vector<term> out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        while (a != terms_.end() || b != o.terms_.end()) {
            if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
                out.push_back(*a++);
            } else if (a == terms_.end() || b->first < a->first) {
                out.push_back(*b++);
            } else {
                K c = a->second;
                c += b->second;
                if (!traits::prune(c)) out.push_back({a->first, std::move(c)});
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        return *this;
    }
    series& operator-=(const series& o) { return *this += -o; }
    series operator-() const {
        series r(dim_, trunc_);
        r.terms_.reserve(terms_.size());
        for (auto& [m, c] : terms_) r.terms_.push_back({m, -c});
        return r;
    }
    friend series operator+(series a, const series& b) { return a += b; }
    friend series operator-(series a, const series& b) { return a -= b; }

    series& scale(const K& c) {
        if (traits::prune(c)) {
            terms_.clear();
            return *this;
        }
        std::vector<term> out;
        out.reserve(terms_.size());
        for (auto& [m, v] : terms_) {
            K w = v * c;
            if (!traits::prune(w)) out.push_back({m, std::move(w)});
        }
        terms_ = std::move(out);
        return *this;
    }
    friend series operator*(series a, const K& c) { return a.scale(c); }

    friend series operator*(const series& a, const series& b) {
        a.check_compat(b);
        series r(a.dim_, a.trunc_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        std::map<multi_index, K> acc;
        for (auto& [ma, ca] : a.terms_) {
            int da = ma.degree();
            for (auto& [mb, cb] : b.terms_) {
                if (da + mb.degree() > a.trunc_) break;  // terms sorted by degree
                multi_index m = ma + mb;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, ca * cb);
                else
                    it->second += ca * cb;
            }
        }
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!traits::prune(c)) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    // multiply by a single monomial
    series shifted(const multi_index& m, const K& c) const {
        series r(dim_, trunc_);
        for (auto& [mi, v] : terms_) {
            if (mi.degree() + m.degree() > trunc_) break;
            K w = v * c;
            if (!traits::prune(w)) r.terms_.push_back({mi + m, std::move(w)});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const term& x, const term& y) { return x.first < y.first; });
        return r;
    }

    series truncated(int new_trunc) const {
        series r(dim_, new_trunc);
        for (auto& [m, c] : terms_) {
            if (m.degree() > new_trunc) break;
            r.terms_.push_back({m, c});
        }
        return r;
    }

    // homogeneous part of the given total degree
    series homogeneous_part(int deg) const {
        series r(dim_, trunc_);
        for (auto& [m, c] : terms_)
            if (m.degree() == deg) r.terms_.push_back({m, c});
        return r;
    }
    // drop all terms with degree < deg
    series tail_from(int deg) const {
        series r(dim_, trunc_);
        for (auto& [m, c] : terms_)
            if (m.degree() >= deg) r.terms_.push_back({m, c});
        return r;
    }

    series conj_coeffs() const {
        series r(dim_, trunc_);
        r.terms_.reserve(terms_.size());
        for (auto& [m, c] : terms_) r.terms_.push_back({m, traits::conj(c)});
        return r;
    }

    series derivative(int j) const {
        series r(dim_, trunc_);
        for (auto& [m, c] : terms_) {
            if (m.e[j] == 0) continue;
            multi_index d = m;
            d.e[j] -= 1;
            K w = c * traits::from_long(m.e[j]);
            r.terms_.push_back({d, std::move(w)});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const term& x, const term& y) { return x.first < y.first; });
        return r;
    }

    // reciprocal of a series with invertible constant term
    series recip() const {
        K c0 = coeff(multi_index(dim_));
        if (!traits::can_divide(c0)) throw structural_error("series reciprocal: constant term not invertible");
        K ic0 = c0;
        ic0 = traits::one() / ic0;
        // u = 1 - f/c0; 1/f = (1/c0) * sum u^k
        series u = constant(dim_, trunc_, traits::one()) - (*this) * ic0;
        series acc = constant(dim_, trunc_, traits::one());
        series pw = u;
        for (int k = 1; k <= trunc_ && !pw.is_zero(); ++k) {
            acc += pw;
            pw = pw * u;
        }
        return acc * ic0;
    }

    // log(f / f(0)) for invertible constant term
    series log_normalized() const {
        K c0 = coeff(multi_index(dim_));
        if (!traits::can_divide(c0)) throw structural_error("series log: constant term not invertible");
        K ic0 = traits::one() / c0;
        series u = (*this) * ic0 - constant(dim_, trunc_, traits::one());
        series acc(dim_, trunc_);
        series pw = u;
        K sign = traits::one();
        for (int k = 1; k <= trunc_ && !pw.is_zero(); ++k) {
            K f = sign / traits::from_long(k);
            acc += pw * f;
            pw = pw * u;
            sign = -sign;
        }
        return acc;
    }

    // (1 + g)^(1/2) for g of positive order; exact binomial series
    static series sqrt_one_plus(const series& g) {
        if (g.order() < 1) throw structural_error("series sqrt: argument must vanish at 0");
        series acc = constant(g.dim_, g.trunc_, traits::one());
        series pw = g;
        // binomial coefficients C(1/2, k)
        rational c(1, 2);
        rational half(1, 2);
        for (int k = 1; k <= g.trunc_ && !pw.is_zero(); ++k) {
            acc += pw * traits::from_gaussian(gaussian_rational(c));
            rational next = c * (half - k) / (k + 1);
            c = next;
            pw = pw * g;
        }
        return acc;
    }

    // exp(f) for f of positive order
    series exp_positive_order() const {
        if (order() < 1) throw structural_error("series exp: argument must vanish at 0");
        series acc = constant(dim_, trunc_, traits::one());
        series pw = *this;
        rational fact(1);
        for (int k = 1; k <= trunc_ && !pw.is_zero(); ++k) {
            fact *= k;  // fact = k!
            acc += pw * traits::from_gaussian(gaussian_rational(rational(1) / fact));
            pw = pw * (*this);
        }
        return acc;
    }

    // evaluate at a point (steps through terms; exact/interval per backend)
    K eval(const std::vector<K>& x) const {
        if ((int)x.size() != dim_) throw structural_error("series eval: point dimension mismatch");
        K total = traits::zero();
        for (auto& [m, c] : terms_) {
            K t = c;
            for (int i = 0; i < dim_; ++i)
                for (int k = 0; k < m.e[i]; ++k) t *= x[i];
            total += t;
        }
        return total;
    }

    // every coefficient passes the backend residue test (zero / contains zero)
    bool residue_ok() const {
        for (auto& [m, c] : terms_)
            if (!traits::residue_ok(c)) return false;
        return true;
    }

    friend bool operator==(const series& a, const series& b) {
        if (a.dim_ != b.dim_ || a.trunc_ != b.trunc_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i) {
            if (a.terms_[i].first != b.terms_[i].first) return false;
            if constexpr (traits::exact) {
                if (!(a.terms_[i].second == b.terms_[i].second)) return false;
            } else {
                throw structural_error("series equality is only decidable on the exact backend");
            }
        }
        return true;
    }

    void check_compat(const series& o) const {
        if (dim_ != o.dim_) throw structural_error("series: dimension mismatch");
        if (trunc_ != o.trunc_) throw structural_error("series: truncation degree mismatch");
    }

private:
    int dim_ = 0;
    int trunc_ = 0;
    std::vector<term> terms_;
};

}  // namespace mosweb
