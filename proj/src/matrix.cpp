// SPDX-License-Identifier: Apache-2.0
#include "stlab/matrix.hpp"

#include <stdexcept>

namespace stlab {

RationalMatrix::RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative dimension");
    data_.assign(static_cast<size_t>(rows) * cols, Rational(0));
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<long>> entries) {
    rows_ = static_cast<int>(entries.size());
    cols_ = rows_ ? static_cast<int>(entries.begin()->size()) : 0;
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != cols_)
            throw std::invalid_argument("matrix: ragged initializer");
        for (long v : row) data_.emplace_back(v);
    }
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool RationalMatrix::is_zero() const {
    for (const auto& v : data_)
        if (v != 0) return false;
    return true;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix: shape mismatch in +");
    RationalMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix: shape mismatch in -");
    RationalMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix: shape mismatch in *");
    RationalMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
    RationalMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

RationalMatrix RationalMatrix::operator-() const {
    RationalMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

RationalMatrix RationalMatrix::from_vec(const std::vector<Rational>& v, int rows, int cols) {
    if (static_cast<size_t>(rows) * cols != v.size())
        throw std::invalid_argument("matrix: from_vec size mismatch");
    RationalMatrix m(rows, cols);
    m.data_ = v;
    return m;
}

RationalMatrix RationalMatrix::kronecker(const RationalMatrix& o) const {
    RationalMatrix r(rows_ * o.rows_, cols_ * o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            const Rational& a = at(i, j);
            if (a == 0) continue;
            for (int p = 0; p < o.rows_; ++p)
                for (int q = 0; q < o.cols_; ++q)
                    r.at(i * o.rows_ + p, j * o.cols_ + q) = a * o.at(p, q);
        }
    return r;
}

}  // namespace stlab
