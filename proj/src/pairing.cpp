// SPDX-License-Identifier: Apache-2.0
#include "stlab/pairing.hpp"

#include <stdexcept>

namespace stlab {

PolarizedSpace::PolarizedSpace(int weight, RationalMatrix pairing)
    : weight_(weight), pairing_(std::move(pairing)) {
    if (weight_ <= 0 || weight_ % 2 == 0)
        throw std::invalid_argument("polarized space: weight must be odd and positive");
    if (!pairing_.is_square())
        throw std::invalid_argument("polarized space: pairing matrix must be square");
    if (pairing_.rows() == 0)
        throw std::invalid_argument("polarized space: dimension must be positive");
    if (pairing_.transpose() != -pairing_)
        throw std::invalid_argument("polarized space: pairing must be alternating");
    if (determinant(pairing_) == 0)
        throw std::invalid_argument("polarized space: pairing must be nondegenerate");
}

std::optional<Rational> similitude_factor(const RationalMatrix& g, const PolarizedSpace& space) {
    const RationalMatrix& psi = space.pairing();
    const int n = space.dim();
    if (g.rows() != n || g.cols() != n)
        throw std::invalid_argument("similitude_factor: dimension mismatch");
    RationalMatrix lhs = g.transpose() * psi * g;
    // Nondegeneracy gives a nonzero reference entry for the candidate factor.
    int ri = -1, rj = -1;
    for (int i = 0; i < n && ri < 0; ++i)
        for (int j = 0; j < n; ++j)
            if (psi.at(i, j) != 0) {
                ri = i;
                rj = j;
                break;
            }
    Rational chi = lhs.at(ri, rj) / psi.at(ri, rj);
    if (chi == 0) return std::nullopt;
    if (lhs != psi * chi) return std::nullopt;
    return chi;
}

bool is_isometry(const RationalMatrix& g, const PolarizedSpace& space) {
    auto chi = similitude_factor(g, space);
    return chi.has_value() && *chi == 1;
}

}  // namespace stlab
