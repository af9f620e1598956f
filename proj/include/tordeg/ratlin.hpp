#pragma once

#include "tordeg/lattice.hpp"
#include "tordeg/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// Dense exact rational matrix, row-major. Only the small exact kernels the
/// polyhedral layer needs: rank, linear solve, nullspace.
struct RatMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    RatMatrix() = default;
    RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rat(0)) {}

    Rat& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static RatMatrix from_columns(const std::vector<std::vector<Rat>>& cols_in) {
        if (cols_in.empty()) throw std::invalid_argument("no columns");
        RatMatrix m(cols_in[0].size(), cols_in.size());
        for (std::size_t j = 0; j < cols_in.size(); ++j) {
            if (cols_in[j].size() != m.rows) throw std::invalid_argument("ragged columns");
            for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = cols_in[j][i];
        }
        return m;
    }
};

inline std::vector<Rat> to_rat(const LatticeVector& v) {
    std::vector<Rat> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

inline std::size_t rat_rank(RatMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m(p, c) == 0) ++p;
        if (p == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(p, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

inline std::size_t lattice_rank(const std::vector<LatticeVector>& vs) {
    if (vs.empty()) return 0;
    RatMatrix m(vs.size(), vs[0].size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs[0].size(); ++j) m(i, j) = Rat(vs[i][j]);
    return rat_rank(std::move(m));
}

/// Solve A x = b exactly. Returns nullopt if inconsistent. If the system is
/// underdetermined, free variables are set to zero.
inline std::optional<std::vector<Rat>> rat_solve(RatMatrix A, std::vector<Rat> b) {
    if (A.rows != b.size()) throw std::invalid_argument("rat_solve: shape mismatch");
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols && r < A.rows; ++c) {
        std::size_t p = r;
        while (p < A.rows && A(p, c) == 0) ++p;
        if (p == A.rows) continue;
        for (std::size_t j = 0; j < A.cols; ++j) std::swap(A(r, j), A(p, j));
        std::swap(b[r], b[p]);
        for (std::size_t i = 0; i < A.rows; ++i) {
            if (i == r || A(i, c) == 0) continue;
            Rat f = A(i, c) / A(r, c);
            for (std::size_t j = c; j < A.cols; ++j) A(i, j) -= f * A(r, j);
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < A.rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(A.cols, Rat(0));
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i] / A(i, pivot_col[i]);
    return x;
}

/// Nullspace basis (as rows) of A over Q.
inline std::vector<std::vector<Rat>> rat_nullspace(RatMatrix A) {
    std::vector<std::size_t> pivot_col;
    std::vector<bool> is_pivot(A.cols, false);
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols && r < A.rows; ++c) {
        std::size_t p = r;
        while (p < A.rows && A(p, c) == 0) ++p;
        if (p == A.rows) continue;
        for (std::size_t j = 0; j < A.cols; ++j) std::swap(A(r, j), A(p, j));
        for (std::size_t i = 0; i < A.rows; ++i) {
            if (i == r || A(i, c) == 0) continue;
            Rat f = A(i, c) / A(r, c);
            for (std::size_t j = c; j < A.cols; ++j) A(i, j) -= f * A(r, j);
        }
        pivot_col.push_back(c);
        is_pivot[c] = true;
        ++r;
    }
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free = 0; free < A.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(A.cols, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < r; ++i)
            v[pivot_col[i]] = -A(i, free) / A(i, pivot_col[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Rat dot(const std::vector<Rat>& x, const std::vector<Rat>& y) {
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline Rat dot(const std::vector<Rat>& x, const LatticeVector& y) {
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace tordeg
