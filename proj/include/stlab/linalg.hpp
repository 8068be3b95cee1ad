// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "stlab/matrix.hpp"

namespace stlab {

// Basis of a linear subspace of Q^ambient. Vectors are kept in reduced
// row-echelon order, so equal subspaces produce equal bases.
struct SubspaceBasis {
    int ambient = 0;
    std::vector<std::vector<Rational>> vectors;

    int dim() const { return static_cast<int>(vectors.size()); }
};

struct RrefResult {
    RationalMatrix mat;
    std::vector<int> pivot_cols;
    int rank = 0;
};

// Reduced row echelon form with deterministic pivoting: columns are scanned
// left to right and the topmost unused row with a nonzero entry is chosen.
RrefResult rref(RationalMatrix m);

int rank(const RationalMatrix& m);

// Null space of m (viewed as a map Q^cols -> Q^rows), canonical free-column
// parameterization, vectors ordered by free column index.
SubspaceBasis kernel(const RationalMatrix& m);

// Exact determinant via fraction elimination with row swaps.
Rational determinant(RationalMatrix m);

// Coordinates of v in the span of basis, or nullopt when v lies outside.
std::optional<std::vector<Rational>> solve_coordinates(
    const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& v);

bool spans_contain(const SubspaceBasis& space, const std::vector<Rational>& v);

// Incrementally maintained echelonized span, used for closure computations.
class SpanTracker {
  public:
    explicit SpanTracker(int ambient) : ambient_(ambient) {}

    // Returns true when v enlarged the span.
    bool insert(std::vector<Rational> v);
    bool contains(std::vector<Rational> v) const;
    int dim() const { return static_cast<int>(rows_.size()); }

  private:
    // Reduces v against stored rows; returns pivot column or -1 when v reduces to zero.
    int reduce(std::vector<Rational>& v) const;

    int ambient_;
    std::vector<std::vector<Rational>> rows_;  // echelon rows, pivot = 1
    std::vector<int> pivots_;
};

// Smallest unital subalgebra of M_n(Q) containing the generators, returned as
// a basis with the identity first. Deterministic: generators are absorbed in
// the given order and products are explored in generation order.
std::vector<RationalMatrix> algebra_closure(const std::vector<RationalMatrix>& generators, int n);

// Joint kernel of linear maps M_n(Q) -> M_n(Q), elements returned as n x n
// matrices under the row-major flattening.
std::vector<RationalMatrix> common_kernel(
    const std::vector<std::function<RationalMatrix(const RationalMatrix&)>>& maps, int n);

}  // namespace stlab
