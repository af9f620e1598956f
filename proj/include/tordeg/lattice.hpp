#pragma once

#include "tordeg/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// A point of the character lattice M in a fixed basis. Exact integers.
using LatticeVector = std::vector<Int>;

/// Dense exact integer matrix, row-major.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

    Int& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<LatticeVector>& rows_in) {
        if (rows_in.empty()) throw std::invalid_argument("empty row list");
        IntMatrix m(rows_in.size(), rows_in[0].size());
        for (std::size_t i = 0; i < rows_in.size(); ++i) {
            if (rows_in[i].size() != m.cols) throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows_in[i][j];
        }
        return m;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

inline IntMatrix matmul(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("shape mismatch");
    IntMatrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
        }
    return z;
}

inline bool is_zero(const LatticeVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

/// v / gcd(coords); sign preserved, gcd of the result is 1.
inline LatticeVector primitivize(const LatticeVector& v) {
    if (is_zero(v)) throw std::invalid_argument("not a direction: zero vector");
    Int g = 0;
    for (const auto& x : v) g = int_gcd(g, x);
    LatticeVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
    return out;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int determinant(IntMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

struct SmithResult {
    IntMatrix U, D, V; // U*A*V = D, U and V unimodular, D diagonal with d1 | d2 | ...
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(i, c), m(j, c));
}
inline void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m.rows; ++r) std::swap(m(r, i), m(r, j));
}
// row[i] += f * row[j]
inline void add_row(IntMatrix& m, std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t c = 0; c < m.cols; ++c) m(i, c) += f * m(j, c);
}
inline void add_col(IntMatrix& m, std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t r = 0; r < m.rows; ++r) m(r, i) += f * m(r, j);
}
inline void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t c = 0; c < m.cols; ++c) m(i, c) = -m(i, c);
}

} // namespace detail

/// Smith normal form by gcd row/column elimination. Input ranks here are tiny,
/// so no pivot-growth control beyond picking the smallest nonzero entry.
inline SmithResult smith_normal_form(const IntMatrix& input) {
    SmithResult r;
    r.D = input;
    r.U = IntMatrix::identity(input.rows);
    r.V = IntMatrix::identity(input.cols);
    IntMatrix& D = r.D;
    const std::size_t nmin = std::min(input.rows, input.cols);

    for (std::size_t s = 0; s < nmin; ++s) {
        // locate smallest nonzero |entry| in the trailing block
        std::size_t pi = s, pj = s;
        bool found = false;
        Int best = 0;
        for (std::size_t i = s; i < D.rows; ++i)
            for (std::size_t j = s; j < D.cols; ++j) {
                if (D(i, j) == 0) continue;
                Int v = abs(D(i, j));
                if (!found || v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break; // trailing block is zero
        if (pi != s) { detail::swap_rows(D, s, pi); detail::swap_rows(r.U, s, pi); }
        if (pj != s) { detail::swap_cols(D, s, pj); detail::swap_cols(r.V, s, pj); }

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = s + 1; i < D.rows; ++i) {
                if (D(i, s) == 0) continue;
                Int q = D(i, s) / D(s, s);
                detail::add_row(D, i, s, -q);
                detail::add_row(r.U, i, s, -q);
                if (D(i, s) != 0) {
                    // remainder is smaller: promote it to the pivot and restart
                    detail::swap_rows(D, s, i);
                    detail::swap_rows(r.U, s, i);
                    clean = false;
                }
            }
            for (std::size_t j = s + 1; j < D.cols; ++j) {
                if (D(s, j) == 0) continue;
                Int q = D(s, j) / D(s, s);
                detail::add_col(D, j, s, -q);
                detail::add_col(r.V, j, s, -q);
                if (D(s, j) != 0) {
                    detail::swap_cols(D, s, j);
                    detail::swap_cols(r.V, s, j);
                    clean = false;
                }
            }
            if (clean) {
                // pivot must divide the whole trailing block
                for (std::size_t i = s + 1; i < D.rows && clean; ++i)
                    for (std::size_t j = s + 1; j < D.cols && clean; ++j)
                        if (D(i, j) % D(s, s) != 0) {
                            detail::add_row(D, s, i, Int(1));
                            detail::add_row(r.U, s, i, Int(1));
                            clean = false;
                        }
            }
        }
        if (D(s, s) < 0) { detail::negate_row(D, s); detail::negate_row(r.U, s); }
    }
    return r;
}

/// Index of the sublattice spanned by the generators inside the saturation of
/// their span: the product of the nonzero Smith diagonal entries. Equals 1
/// exactly when the generators are a basis of the saturated lattice.
inline Int sublattice_index(const std::vector<LatticeVector>& generators) {
    if (generators.empty()) throw std::invalid_argument("sublattice_index: empty generator list");
    bool any = false;
    for (const auto& g : generators) any = any || !is_zero(g);
    if (!any) throw std::invalid_argument("sublattice_index: all generators zero");
    SmithResult s = smith_normal_form(IntMatrix::from_rows(generators));
    Int idx = 1;
    const std::size_t nmin = std::min(s.D.rows, s.D.cols);
    for (std::size_t i = 0; i < nmin; ++i)
        if (s.D(i, i) != 0) idx *= s.D(i, i);
    return idx;
}

/// Basis of { x integer : A x = 0 }, as rows. Uses the Smith transform:
/// columns of V matching zero diagonal entries of D.
inline std::vector<LatticeVector> integer_kernel(const IntMatrix& A) {
    SmithResult s = smith_normal_form(A);
    std::vector<LatticeVector> basis;
    for (std::size_t j = 0; j < A.cols; ++j) {
        bool zero_col = j >= std::min(A.rows, A.cols) || s.D(j, j) == 0;
        if (!zero_col) continue;
        LatticeVector v(A.cols);
        for (std::size_t i = 0; i < A.cols; ++i) v[i] = s.V(i, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace tordeg
