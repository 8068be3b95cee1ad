// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stlab/endo_galois.hpp"
#include "stlab/pairing.hpp"

namespace stlab {

// Solution space of the linearized twist equations
//   g * beta = rho(tau)(beta) * g   for all beta in the algebra basis.
// For tau = id this is the commutant of the algebra.
struct TwistSpace {
    int tau = 0;
    std::string tau_label;
    SubspaceBasis linear_basis;  // vectors in Q^{n^2}, row-major flattening
    int dim() const { return linear_basis.dim(); }
    std::vector<RationalMatrix> basis_matrices() const;
};

enum class SearchMode { Real, Complex };

struct SearchBudget {
    int restarts = 100;
    int max_iterations = 200;
    double tolerance = 1e-8;
    uint64_t seed = 0;
    int parallelism = 1;
};

// Numeric point of the twist component: g = sum coefficients[i] * basis[i].
// Exact twist-space membership holds by construction; residual measures the
// isometry condition ||g^T Psi g - Psi||_inf.
struct IsometryWitness {
    std::vector<std::complex<double>> coefficients;
    std::vector<std::complex<double>> matrix;  // row-major n x n
    double residual = 0.0;
    int restart_index = -1;
    bool exact = false;  // true when found by exact rational shortcut
};

struct TwistComponentReport {
    int tau = 0;
    std::string tau_label;
    int twist_dim = 0;
    int lie_dim_at_identity = 0;
    std::optional<IsometryWitness> real_representative;
    std::optional<IsometryWitness> complex_representative;
    bool real_empty_certified = false;
    std::string nonempty_over_C;  // "yes" | "no-evidence" | "undetermined"
};

struct SurjectionReport {
    std::vector<TwistComponentReport> components;
    std::string verdict;
};

struct PowerProductReport {
    bool pass = false;
    int tau = 0;
    std::string mode;  // "power" | "direct-sum"
    int s = 1;         // exponent (power) or number of factors (direct-sum)
    std::vector<std::pair<std::string, int>> dims;
};

// Lie algebra of the Lefschetz group: {X : X^T Psi + Psi X = 0, X beta = beta X}.
SubspaceBasis lefschetz_lie_algebra(const PolarizedSpace& space, const EndAlgebra& algebra);

// Solution space of {g * beta = image * g} over the given spanning pairs.
SubspaceBasis twist_space_from_pairs(
    int n, const std::vector<std::pair<RationalMatrix, RationalMatrix>>& beta_image_pairs);

TwistSpace twist_linear_space(const PolarizedSpace& space, const EndAlgebra& algebra,
                              const GaloisTwistGroup& group, int tau);

// Damped Gauss-Newton search for an isometry inside the twist space.
// Starting points are uniform in [-1,1] per coordinate (independently for
// real and imaginary parts in complex mode), seeded per restart index, so
// the outcome is identical for any parallelism.
std::optional<IsometryWitness> find_isometry_in_twist(const TwistSpace& twist,
                                                      const PolarizedSpace& space, SearchMode mode,
                                                      const SearchBudget& budget);

// Exact obstruction test for twist dimension <= 3: if some entry of
// g^T Psi g - Psi is a semidefinite quadratic form in the twist coordinates
// with the wrong sign against Psi, no real solution exists.
bool certify_real_empty(const TwistSpace& twist, const PolarizedSpace& space);

// Dimension identities for powers: dim L_tau(V^s, psi^s, M_s(D)) = dim L_tau(V, psi, D).
PowerProductReport power_product_check(const PolarizedSpace& space, const EndAlgebra& algebra,
                                       const GaloisTwistGroup& group, int tau, int s);

// Dimension identities for direct sums: dim L_tau(sum) = sum of factor dims.
// All factors must share the group structure (order and table) and weight.
struct SumFactor {
    const PolarizedSpace* space;
    const EndAlgebra* algebra;
    const GaloisTwistGroup* group;
};
PowerProductReport power_product_check(const std::vector<SumFactor>& factors, int tau);

SurjectionReport component_surjection_report(const PolarizedSpace& space,
                                             const EndAlgebra& algebra,
                                             const GaloisTwistGroup& group,
                                             const SearchBudget& budget);

}  // namespace stlab
