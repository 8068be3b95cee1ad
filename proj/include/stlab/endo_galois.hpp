// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stlab/linalg.hpp"
#include "stlab/matrix.hpp"

namespace stlab {

// Finite-dimensional unital subalgebra D of M_n(Q), stored as a Q-basis with
// the identity first, plus exact structure constants.
class EndAlgebra {
  public:
    static EndAlgebra from_generators(const std::vector<RationalMatrix>& generators, int n);
    static EndAlgebra scalars(int n) { return from_generators({}, n); }

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<RationalMatrix>& basis() const { return basis_; }

    // c(i,j,k): coefficient of basis[k] in basis[i] * basis[j].
    const Rational& structure_constant(int i, int j, int k) const;

    // Coordinates of m in the basis, when m lies in D.
    std::optional<std::vector<Rational>> coordinates(const RationalMatrix& m) const;
    RationalMatrix from_coordinates(const std::vector<Rational>& coords) const;

  private:
    EndAlgebra() = default;
    int n_ = 0;
    std::vector<RationalMatrix> basis_;
    std::vector<Rational> sc_;  // dim^3, index (i*dim + j)*dim + k
};

// Finite group acting on an endomorphism algebra by unital algebra
// automorphisms. Element 0 is the identity. Actions are matrices on D-basis
// coordinates (columns = images of basis elements). For Galois groups of
// multiquadratic fields, discs lists the defining squarefree integers and the
// group law is bitwise XOR on character-sign vectors.
struct GaloisTwistGroup {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> table;
    std::vector<RationalMatrix> actions;
    std::optional<std::vector<long long>> discs;

    int order() const { return static_cast<int>(table.size()); }

    static GaloisTwistGroup trivial(int algebra_dim);
    static GaloisTwistGroup multiquadratic(std::vector<long long> discs,
                                           std::vector<RationalMatrix> actions);
};

// Full consistency audit of (D, G): group axioms, homomorphism property of
// the action, automorphism property of each element, descriptor coherence.
// Returns a list of human-readable violations; empty means valid.
std::vector<std::string> validate_action(const EndAlgebra& algebra, const GaloisTwistGroup& group);

// Kronecker symbol (a|p) for an odd prime p, by Euler's criterion.
int kronecker_symbol(long long a, long long p);

bool is_prime(long long p);

// Conjugacy class (= element, the group being abelian) of Frobenius at p in
// the multiquadratic Galois group: bit i set iff d_i is a non-residue mod p.
// Throws std::domain_error when p ramifies (p | 2 * prod d_i) and
// std::invalid_argument when p is not an odd prime or no descriptor exists.
int frobenius_class(long long p, const GaloisTwistGroup& group);

}  // namespace stlab
