// SPDX-License-Identifier: Apache-2.0
#include "stlab/linalg.hpp"

#include <stdexcept>

namespace stlab {

RrefResult rref(RationalMatrix m) {
    const int rows = m.rows(), cols = m.cols();
    RrefResult out;
    out.pivot_cols.clear();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        Rational inv = 1 / m.at(r, c);
        for (int j = c; j < cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            const Rational f = m.at(i, c);
            if (f == 0) continue;
            for (int j = c; j < cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.mat = std::move(m);
    return out;
}

int rank(const RationalMatrix& m) { return rref(m).rank; }

SubspaceBasis kernel(const RationalMatrix& m) {
    const int cols = m.cols();
    RrefResult rr = rref(m);
    SubspaceBasis basis;
    basis.ambient = cols;
    std::vector<bool> is_pivot(cols, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (int r = 0; r < rr.rank; ++r) v[rr.pivot_cols[r]] = -rr.mat.at(r, free);
        basis.vectors.push_back(std::move(v));
    }
    return basis;
}

Rational determinant(RationalMatrix m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: non-square matrix");
    const int n = m.rows();
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (m.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(c, j));
            det = -det;
        }
        det *= m.at(c, c);
        Rational inv = 1 / m.at(c, c);
        for (int i = c + 1; i < n; ++i) {
            const Rational f = m.at(i, c) * inv;
            if (f == 0) continue;
            for (int j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
        }
    }
    return det;
}

std::optional<std::vector<Rational>> solve_coordinates(
    const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& v) {
    const int k = static_cast<int>(basis.size());
    const int m = static_cast<int>(v.size());
    for (const auto& b : basis)
        if (static_cast<int>(b.size()) != m)
            throw std::invalid_argument("solve_coordinates: ambient mismatch");
    // Augmented system [B | v] with basis vectors as columns.
    RationalMatrix aug(m, k + 1);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < m; ++i) aug.at(i, j) = basis[j][i];
    for (int i = 0; i < m; ++i) aug.at(i, k) = v[i];
    RrefResult rr = rref(aug);
    std::vector<Rational> x(k, Rational(0));
    for (int r = 0; r < rr.rank; ++r) {
        int p = rr.pivot_cols[r];
        if (p == k) return std::nullopt;  // inconsistent
        x[p] = rr.mat.at(r, k);
    }
    return x;
}

bool spans_contain(const SubspaceBasis& space, const std::vector<Rational>& v) {
    return solve_coordinates(space.vectors, v).has_value();
}

int SpanTracker::reduce(std::vector<Rational>& v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
        const Rational& f = v[pivots_[r]];
        if (f == 0) continue;
        const Rational coef = f;  // pivot entries are 1
        for (int j = 0; j < ambient_; ++j)
            if (rows_[r][j] != 0) v[j] -= coef * rows_[r][j];
    }
    for (int j = 0; j < ambient_; ++j)
        if (v[j] != 0) return j;
    return -1;
}

bool SpanTracker::insert(std::vector<Rational> v) {
    if (static_cast<int>(v.size()) != ambient_)
        throw std::invalid_argument("span: ambient mismatch");
    int p = reduce(v);
    if (p < 0) return false;
    Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    // Back-substitute into existing rows to stay fully reduced.
    for (size_t r = 0; r < rows_.size(); ++r) {
        const Rational f = rows_[r][p];
        if (f == 0) continue;
        for (int j = 0; j < ambient_; ++j) rows_[r][j] -= f * v[j];
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

bool SpanTracker::contains(std::vector<Rational> v) const { return reduce(v) < 0; }

std::vector<RationalMatrix> algebra_closure(const std::vector<RationalMatrix>& generators, int n) {
    for (const auto& g : generators)
        if (g.rows() != n || g.cols() != n)
            throw std::invalid_argument("algebra_closure: generator shape mismatch");
    std::vector<RationalMatrix> basis;
    SpanTracker span(n * n);
    auto absorb = [&](const RationalMatrix& m) {
        if (span.insert(m.vec())) basis.push_back(m);
    };
    absorb(RationalMatrix::identity(n));
    for (const auto& g : generators) absorb(g);
    // Fixpoint over products; each pass re-scans all pairs of the current basis.
    size_t settled = 0;
    while (settled != basis.size()) {
        settled = basis.size();
        for (size_t i = 0; i < settled; ++i)
            for (size_t j = 0; j < settled; ++j) absorb(basis[i] * basis[j]);
    }
    return basis;
}

std::vector<RationalMatrix> common_kernel(
    const std::vector<std::function<RationalMatrix(const RationalMatrix&)>>& maps, int n) {
    const int nn = n * n;
    const int m = static_cast<int>(maps.size());
    RationalMatrix stacked(m * nn, nn);
    for (int q = 0; q < nn; ++q) {
        RationalMatrix e(n, n);
        e.at(q / n, q % n) = 1;
        for (int f = 0; f < m; ++f) {
            RationalMatrix img = maps[f](e);
            if (img.rows() != n || img.cols() != n)
                throw std::invalid_argument("common_kernel: map does not preserve shape");
            auto flat = img.vec();
            for (int r = 0; r < nn; ++r) stacked.at(f * nn + r, q) = flat[r];
        }
    }
    SubspaceBasis null = kernel(stacked);
    std::vector<RationalMatrix> out;
    out.reserve(null.vectors.size());
    for (const auto& v : null.vectors) out.push_back(RationalMatrix::from_vec(v, n, n));
    return out;
}

}  // namespace stlab
