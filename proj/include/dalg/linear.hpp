#ifndef DALG_LINEAR_HPP
#define DALG_LINEAR_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "dalg/ratfun.hpp"

namespace dalg {

/// Solution set of the affine system  sum_j A[i][j] y_j + b[i] = 0.
struct AffineSpace {
    std::size_t n = 0;
    std::size_t rank = 0;
    bool consistent = true;
    std::optional<std::vector<RatFun>> particular;
    std::vector<std::vector<RatFun>> kernel;

    std::size_t dimension() const noexcept { return n - rank; }
};

/// Field operations over Q(variables): fractions are already canonical.
struct RationalFunctionField {
    RatFun normalize(const RatFun& r) const { return r; }
    bool is_zero(const RatFun& r) const { return r.is_zero(); }
};

/// Exact Gauss-Jordan elimination. The field policy decides zero tests and
/// canonical forms, so the same routine runs over algebraic towers.
template <class Field = RationalFunctionField>
AffineSpace solve_affine(std::vector<std::vector<RatFun>> a, std::vector<RatFun> b, const Field& field = {}) {
    const std::size_t rows = a.size();
    if (b.size() != rows) detail::domain_fail("solve_affine: row count mismatch between A and b");
    std::size_t n = 0;
    if (rows > 0) n = a[0].size();
    for (const auto& row : a)
        if (row.size() != n) detail::domain_fail("solve_affine: ragged matrix");

    // Augmented matrix [A | -b].
    std::vector<std::vector<RatFun>> m(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        m[i].reserve(n + 1);
        for (auto& x : a[i]) m[i].push_back(field.normalize(x));
        m[i].push_back(field.normalize(-b[i]));
    }

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && field.is_zero(m[p][c])) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        RatFun inv = field.normalize(RatFun(1) / m[r][c]);
        for (std::size_t j = c; j <= n; ++j) m[r][j] = field.normalize(m[r][j] * inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || field.is_zero(m[i][c])) continue;
            RatFun f = m[i][c];
            for (std::size_t j = c; j <= n; ++j) m[i][j] = field.normalize(m[i][j] - f * m[r][j]);
        }
        pivot_col.push_back(c);
        ++r;
    }

    AffineSpace out;
    out.n = n;
    out.rank = r;
    for (std::size_t i = r; i < rows; ++i)
        if (!field.is_zero(m[i][n])) out.consistent = false;

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_col) is_pivot[c] = true;

    if (out.consistent) {
        std::vector<RatFun> x(n);
        for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = m[i][n];
        out.particular = std::move(x);
    }
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<RatFun> v(n);
        v[f] = RatFun(1);
        for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = field.normalize(-m[i][f]);
        out.kernel.push_back(std::move(v));
    }
    return out;
}

}  // namespace dalg

#endif
