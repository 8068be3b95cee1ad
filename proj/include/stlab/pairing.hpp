// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "stlab/linalg.hpp"
#include "stlab/matrix.hpp"

namespace stlab {

// Rational vector space carrying a nondegenerate alternating pairing of odd
// weight. The isometry group of the pairing is the ambient group for all
// twist computations.
class PolarizedSpace {
  public:
    PolarizedSpace(int weight, RationalMatrix pairing);

    int dim() const { return pairing_.rows(); }
    int weight() const { return weight_; }
    const RationalMatrix& pairing() const { return pairing_; }

  private:
    int weight_;
    RationalMatrix pairing_;
};

// Scale factor chi with g^T Psi g = chi * Psi, when one exists. Nonsingular
// Psi forces chi != 0 for invertible g; singular g yields nullopt.
std::optional<Rational> similitude_factor(const RationalMatrix& g, const PolarizedSpace& space);

bool is_isometry(const RationalMatrix& g, const PolarizedSpace& space);

}  // namespace stlab
