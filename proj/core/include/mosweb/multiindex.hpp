#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mosweb/errors.hpp"

namespace mosweb {

// Exponent vector of a monomial, graded-lex ordered.
struct multi_index {
    static constexpr int max_dim = 8;

    std::array<uint16_t, max_dim> e{};
    uint8_t dim = 0;

    multi_index() = default;
    explicit multi_index(int d) : dim(static_cast<uint8_t>(d)) {
        if (d < 0 || d > max_dim) throw structural_error("multi_index: unsupported dimension");
    }
    static multi_index unit(int d, int j, int k = 1) {
        multi_index m(d);
        m.e[j] = static_cast<uint16_t>(k);
        return m;
    }

    int degree() const {
        int s = 0;
        for (int i = 0; i < dim; ++i) s += e[i];
        return s;
    }
    bool is_zero() const {
        for (int i = 0; i < dim; ++i)
            if (e[i]) return false;
        return true;
    }
    int first_nonzero() const {
        for (int i = 0; i < dim; ++i)
            if (e[i]) return i;
        return -1;
    }

    uint16_t operator[](int i) const { return e[i]; }
    uint16_t& operator[](int i) { return e[i]; }

    friend bool operator==(const multi_index& a, const multi_index& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.e[i] != b.e[i]) return false;
        return true;
    }
    friend bool operator!=(const multi_index& a, const multi_index& b) { return !(a == b); }

    // graded lexicographic: by total degree, then lexicographic on exponents
    friend bool operator<(const multi_index& a, const multi_index& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        for (int i = 0; i < a.dim; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
        return false;
    }

    friend multi_index operator+(const multi_index& a, const multi_index& b) {
        if (a.dim != b.dim) throw structural_error("multi_index: dimension mismatch");
        multi_index r(a.dim);
        for (int i = 0; i < a.dim; ++i) r.e[i] = static_cast<uint16_t>(a.e[i] + b.e[i]);
        return r;
    }
    // componentwise difference; caller ensures a >= b
    friend multi_index operator-(const multi_index& a, const multi_index& b) {
        multi_index r(a.dim);
        for (int i = 0; i < a.dim; ++i) {
            if (a.e[i] < b.e[i]) throw structural_error("multi_index: negative exponent");
            r.e[i] = static_cast<uint16_t>(a.e[i] - b.e[i]);
        }
        return r;
    }
    bool divides(const multi_index& b) const {
        for (int i = 0; i < dim; ++i)
            if (e[i] > b.e[i]) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim; ++i) s += std::to_string(e[i]) + (i + 1 < dim ? "," : "");
        return s + ")";
    }
};

}  // namespace mosweb
