// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stlab/philox.hpp"

namespace stlab {

// Closed catalog of compact candidate groups, in canonical ranking order.
enum class CompactGroup { U1, NU1, SU2, SU2xSU2, USp4 };

// Component selector. Only NU1 has a nontrivial component; "mixture" is the
// full-group distribution (equals "identity" for the connected groups).
enum class Component { Identity, Nontrivial, Mixture };

struct MomentVector {
    int k_max = 0;
    std::vector<double> values;   // M_0 .. M_{k_max}
    std::vector<double> stderrs;  // 0 for quadrature
    std::string method;           // "quadrature" | "mc"
};

const char* compact_group_name(CompactGroup g);
const char* component_name(Component c);
CompactGroup parse_compact_group(const std::string& name);
Component parse_component(const std::string& name);

// Matrix size of the standard embedding (2 for U1/NU1/SU2, 4 otherwise);
// also the trace support bound.
int trace_dim(CompactGroup g);

// One Haar-distributed element. The stream fully determines the draw, so
// sample i of a run is regenerated from PhiloxStream(seed, i).
Eigen::MatrixXcd sample_element(CompactGroup g, Component component, PhiloxStream& rng);

// Trace moments by Weyl-measure quadrature (absolute error well under 1e-9:
// the integrands are trigonometric polynomials, integrated on refined
// periodic grids until exact).
MomentVector trace_moments_quadrature(CompactGroup g, Component component, int k_max);

// Monte Carlo trace moments; deterministic for fixed seed at any parallelism
// (fixed-size chunks, pairwise reduction in chunk order).
MomentVector trace_moments_mc(CompactGroup g, Component component, int k_max, long long n_samples,
                              uint64_t seed, int parallelism = 1);

// CDF of the trace on [-trace_dim, trace_dim]; absolute error < 1e-6.
std::function<double(double)> coset_trace_cdf(CompactGroup g, Component component);

}  // namespace stlab
