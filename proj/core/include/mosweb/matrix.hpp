#pragma once

#include <vector>

#include "mosweb/scalar.hpp"

namespace mosweb {

// Dense matrix over an exact or interval scalar; desk-scale sizes only.
template <class K>
class matrix {
public:
    using traits = scalar_traits<K>;

    matrix() = default;
    matrix(int r, int c) : rows_(r), cols_(c), a_(size_t(r) * c, traits::zero()) {}

    static matrix identity(int n) {
        matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = traits::one();
        return m;
    }
    static matrix diagonal(const std::vector<K>& d) {
        matrix m((int)d.size(), (int)d.size());
        for (size_t i = 0; i < d.size(); ++i) m((int)i, (int)i) = d[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    K& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const K& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    matrix conj() const {
        matrix m(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = traits::conj(a_[i]);
        return m;
    }
    matrix transpose() const {
        matrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    friend matrix operator*(const matrix& a, const matrix& b) {
        if (a.cols_ != b.rows_) throw structural_error("matrix: shape mismatch in product");
        matrix m(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const K& aik = a(i, k);
                if (traits::prune(aik)) continue;
                for (int j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }
    friend matrix operator+(matrix a, const matrix& b) {
        for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }
    friend matrix operator-(matrix a, const matrix& b) {
        for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }
    matrix operator-() const {
        matrix m(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = -a_[i];
        return m;
    }
    friend matrix operator*(matrix a, const K& c) {
        for (auto& v : a.a_) v = v * c;
        return a;
    }

    std::vector<K> apply(const std::vector<K>& x) const {
        if ((int)x.size() != cols_) throw structural_error("matrix: vector size mismatch");
        std::vector<K> y(rows_, traits::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    bool is_zero() const {
        for (auto& v : a_)
            if (!traits::prune(v)) return false;
        return true;
    }
    friend bool operator==(const matrix& a, const matrix& b) {
        static_assert(traits::exact, "matrix equality is exact-backend only");
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (size_t i = 0; i < a.a_.size(); ++i)
            if (!(a.a_[i] == b.a_[i])) return false;
        return true;
    }

    K det() const {
        if (rows_ != cols_) throw structural_error("matrix: det needs a square matrix");
        matrix m = *this;
        K d = traits::one();
        for (int c = 0; c < cols_; ++c) {
            int p = m.find_pivot(c, c);
            if (p < 0) return traits::zero();
            if (p != c) {
                m.swap_rows(p, c);
                d = -d;
            }
            d = d * m(c, c);
            K inv = traits::one() / m(c, c);
            for (int r = c + 1; r < rows_; ++r) {
                K f = m(r, c) * inv;
                if (traits::prune(f)) continue;
                for (int j = c; j < cols_; ++j) m(r, j) -= f * m(c, j);
            }
        }
        return d;
    }

    matrix inverse() const {
        if (rows_ != cols_) throw structural_error("matrix: inverse needs a square matrix");
        matrix m = *this;
        matrix inv = identity(rows_);
        for (int c = 0; c < cols_; ++c) {
            int p = m.find_pivot(c, c);
            if (p < 0) throw structural_error("matrix: singular (or not certifiably invertible)");
            if (p != c) {
                m.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            K f = traits::one() / m(c, c);
            for (int j = 0; j < cols_; ++j) {
                m(c, j) = m(c, j) * f;
                inv(c, j) = inv(c, j) * f;
            }
            for (int r = 0; r < rows_; ++r) {
                if (r == c) continue;
                K g = m(r, c);
                if (traits::prune(g)) continue;
                for (int j = 0; j < cols_; ++j) {
                    m(r, j) -= g * m(c, j);
                    inv(r, j) -= g * inv(c, j);
                }
            }
        }
        return inv;
    }

    // reduced row echelon; returns pivot columns
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int p = find_pivot(r, c);
            if (p < 0) continue;
            swap_rows(p, r);
            K f = traits::one() / (*this)(r, c);
            for (int j = 0; j < cols_; ++j) (*this)(r, j) = (*this)(r, j) * f;
            for (int i = 0; i < rows_; ++i) {
                if (i == r) continue;
                K g = (*this)(i, c);
                if (traits::prune(g)) continue;
                for (int j = 0; j < cols_; ++j) (*this)(i, j) -= g * (*this)(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    // basis of the right kernel (deterministic)
    std::vector<std::vector<K>> kernel() const {
        matrix m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int c : pivots) is_pivot[c] = true;
        std::vector<std::vector<K>> basis;
        for (int c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            std::vector<K> v(cols_, traits::zero());
            v[c] = traits::one();
            for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m((int)r, c);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    int rank() const {
        matrix m = *this;
        return (int)m.rref().size();
    }

private:
    int find_pivot(int from_row, int col) const {
        if constexpr (traits::exact) {
            for (int r = from_row; r < rows_; ++r)
                if (!(*this)(r, col).is_zero()) return r;
            return -1;
        } else {
            // pick the row whose entry has the largest certified mignitude
            int best = -1;
            for (int r = from_row; r < rows_; ++r) {
                const K& v = (*this)(r, col);
                if (v.contains_zero()) continue;
                if (best < 0) {
                    best = r;
                } else {
                    auto c = less((*this)(best, col).norm2(), v.norm2());
                    if (c == trilean::yes) best = r;
                }
            }
            return best;
        }
    }
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    int rows_ = 0, cols_ = 0;
    std::vector<K> a_;
};

}  // namespace mosweb
