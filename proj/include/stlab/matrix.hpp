// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <vector>

#include "stlab/rational.hpp"

namespace stlab {

// Dense matrix over Q, row-major. All arithmetic is exact.
class RationalMatrix {
  public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols);
    RationalMatrix(std::initializer_list<std::initializer_list<long>> entries);

    static RationalMatrix identity(int n);
    static RationalMatrix zero(int rows, int cols) { return RationalMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    RationalMatrix transpose() const;
    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }

    RationalMatrix operator+(const RationalMatrix& o) const;
    RationalMatrix operator-(const RationalMatrix& o) const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix operator*(const Rational& s) const;
    RationalMatrix operator-() const;
    bool operator==(const RationalMatrix& o) const;
    bool operator!=(const RationalMatrix& o) const { return !(*this == o); }

    // Row-major flattening of an r x c matrix into a length r*c vector.
    std::vector<Rational> vec() const { return data_; }
    static RationalMatrix from_vec(const std::vector<Rational>& v, int rows, int cols);

    // Kronecker product (this  ⊗ o), row-major block convention.
    RationalMatrix kronecker(const RationalMatrix& o) const;

  private:
    int rows_, cols_;
    std::vector<Rational> data_;
};

}  // namespace stlab
