// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stlab/haar.hpp"

using namespace stlab;

namespace {
constexpr double kTol = 1e-8;

void check_even_moments(const MomentVector& mv, const std::vector<double>& even_ref) {
    REQUIRE(mv.values.size() == static_cast<size_t>(mv.k_max) + 1);
    CHECK(mv.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t i = 0; i < even_ref.size(); ++i)
        CHECK(mv.values[2 * (i + 1)] == doctest::Approx(even_ref[i]).epsilon(kTol));
    for (int k = 1; k <= mv.k_max; k += 2) CHECK(std::abs(mv.values[static_cast<size_t>(k)]) < 1e-9);
}
}  // namespace

TEST_CASE("names and parsing") {
    CHECK(parse_compact_group("U1") == CompactGroup::U1);
    CHECK(parse_compact_group("SU2xSU2") == CompactGroup::SU2xSU2);
    CHECK(parse_compact_group("USp4") == CompactGroup::USp4);
    CHECK_THROWS_AS(parse_compact_group("SO3"), std::invalid_argument);
    CHECK(parse_component("identity") == Component::Identity);
    CHECK(parse_component("nontrivial") == Component::Nontrivial);
    CHECK(parse_component("mixture") == Component::Mixture);
    CHECK_THROWS_AS(parse_component("half"), std::invalid_argument);
    CHECK(trace_dim(CompactGroup::U1) == 2);
    CHECK(trace_dim(CompactGroup::SU2xSU2) == 4);
    CHECK(trace_dim(CompactGroup::USp4) == 4);
}

TEST_CASE("quadrature moments match closed forms") {
    // Central binomials, Catalans, NU1 halving, SU2xSU2 binomial convolution,
    // and the USp4 values; all frozen against independent numerics.
    check_even_moments(trace_moments_quadrature(CompactGroup::U1, Component::Identity, 8),
                       {2, 6, 20, 70});
    check_even_moments(trace_moments_quadrature(CompactGroup::SU2, Component::Identity, 8),
                       {1, 2, 5, 14});
    check_even_moments(trace_moments_quadrature(CompactGroup::NU1, Component::Mixture, 8),
                       {1, 3, 10, 35});
    check_even_moments(trace_moments_quadrature(CompactGroup::SU2xSU2, Component::Identity, 8),
                       {2, 10, 70, 588});
    check_even_moments(trace_moments_quadrature(CompactGroup::USp4, Component::Identity, 8),
                       {1, 3, 14, 84});
}

TEST_CASE("NU1 component split") {
    auto id = trace_moments_quadrature(CompactGroup::NU1, Component::Identity, 8);
    auto u1 = trace_moments_quadrature(CompactGroup::U1, Component::Identity, 8);
    for (int k = 0; k <= 8; ++k)
        CHECK(id.values[static_cast<size_t>(k)] ==
              doctest::Approx(u1.values[static_cast<size_t>(k)]).epsilon(1e-12));

    auto nt = trace_moments_quadrature(CompactGroup::NU1, Component::Nontrivial, 8);
    CHECK(nt.values[0] == doctest::Approx(1.0));
    for (int k = 1; k <= 8; ++k) CHECK(nt.values[static_cast<size_t>(k)] == doctest::Approx(0.0));

    auto mix = trace_moments_quadrature(CompactGroup::NU1, Component::Mixture, 8);
    for (int k = 1; k <= 8; ++k)
        CHECK(mix.values[static_cast<size_t>(k)] ==
              doctest::Approx(0.5 * id.values[static_cast<size_t>(k)]).epsilon(1e-10));
}

TEST_CASE("moment order limits") {
    CHECK_NOTHROW(trace_moments_quadrature(CompactGroup::U1, Component::Identity, 0));
    CHECK_NOTHROW(trace_moments_quadrature(CompactGroup::SU2, Component::Identity, 32));
    CHECK_THROWS_AS(trace_moments_quadrature(CompactGroup::U1, Component::Identity, -1),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_moments_quadrature(CompactGroup::U1, Component::Identity, 33),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_moments_mc(CompactGroup::U1, Component::Identity, 4, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        trace_moments_quadrature(CompactGroup::SU2, Component::Nontrivial, 4),
        std::invalid_argument);
}

TEST_CASE("samplers land in the right sets") {
    for (int i = 0; i < 500; ++i) {
        PhiloxStream rng(5, static_cast<uint64_t>(i));
        auto u = sample_element(CompactGroup::U1, Component::Identity, rng);
        REQUIRE(u.rows() == 2);
        CHECK(std::abs(u(0, 1)) == 0.0);
        CHECK(std::abs(u(0, 0) * u(1, 1) - 1.0) < 1e-12);  // det 1, diagonal
        CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);

        PhiloxStream rng2(5, static_cast<uint64_t>(i));
        auto nt = sample_element(CompactGroup::NU1, Component::Nontrivial, rng2);
        CHECK(std::abs(nt(0, 0)) == 0.0);
        CHECK(std::abs(nt(1, 1)) == 0.0);
        CHECK(std::abs(nt.trace()) < 1e-15);
        CHECK((nt.adjoint() * nt - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
              1e-12);

        PhiloxStream rng3(5, static_cast<uint64_t>(i));
        auto s = sample_element(CompactGroup::SU2, Component::Identity, rng3);
        CHECK((s.adjoint() * s - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0) - 1.0) < 1e-12);
        CHECK(std::abs(s.trace().imag()) < 1e-14);

        PhiloxStream rng4(5, static_cast<uint64_t>(i));
        auto q = sample_element(CompactGroup::SU2xSU2, Component::Identity, rng4);
        REQUIRE(q.rows() == 4);
        CHECK(std::abs(q.trace().real()) <= 4.0 + 1e-12);
        CHECK((q.adjoint() * q - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    }

    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(4, 4);
    j(0, 1) = 1;
    j(1, 0) = -1;
    j(2, 3) = 1;
    j(3, 2) = -1;
    for (int i = 0; i < 500; ++i) {
        PhiloxStream rng(6, static_cast<uint64_t>(i));
        auto g = sample_element(CompactGroup::USp4, Component::Identity, rng);
        CHECK((g.adjoint() * g - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((g.transpose() * j * g - j).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(g.trace().imag()) < 1e-12);
    }
}

TEST_CASE("sampling is a pure function of (seed, index)") {
    PhiloxStream a(9, 123), b(9, 123);
    auto ga = sample_element(CompactGroup::USp4, Component::Identity, a);
    auto gb = sample_element(CompactGroup::USp4, Component::Identity, b);
    CHECK((ga - gb).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(
        [&] {
            PhiloxStream r(1, 0);
            return sample_element(CompactGroup::SU2, Component::Nontrivial, r);
        }(),
        std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with quadrature and is thread-invariant") {
    auto quad = trace_moments_quadrature(CompactGroup::SU2, Component::Identity, 6);
    auto mc = trace_moments_mc(CompactGroup::SU2, Component::Identity, 6, 50000, 11, 2);
    CHECK(mc.method == "mc");
    CHECK(quad.method == "quadrature");
    for (int k = 2; k <= 6; k += 2) {
        const auto i = static_cast<size_t>(k);
        CHECK(mc.stderrs[i] > 0.0);
        CHECK(std::abs(mc.values[i] - quad.values[i]) < 4.0 * mc.stderrs[i]);
    }

    auto m1 = trace_moments_mc(CompactGroup::NU1, Component::Mixture, 4, 30000, 17, 1);
    auto m8 = trace_moments_mc(CompactGroup::NU1, Component::Mixture, 4, 30000, 17, 8);
    CHECK(m1.values == m8.values);
    CHECK(m1.stderrs == m8.stderrs);

    auto r1 = trace_moments_mc(CompactGroup::SU2, Component::Identity, 4, 20000, 17, 1);
    auto r2 = trace_moments_mc(CompactGroup::SU2, Component::Identity, 4, 20000, 17, 1);
    CHECK(r1.values == r2.values);
}

TEST_CASE("trace CDFs") {
    auto u1 = coset_trace_cdf(CompactGroup::U1, Component::Identity);
    CHECK(u1(-2.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(u1(2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(u1(0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(u1(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    auto su2 = coset_trace_cdf(CompactGroup::SU2, Component::Identity);
    CHECK(su2(0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(su2(2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(su2(-2.0) == doctest::Approx(0.0).epsilon(1e-9));
    // Density at 0 is sqrt(4 - 0)/(2 pi) = 1/pi; check a symmetric difference.
    CHECK((su2(0.1) - su2(-0.1)) / 0.2 == doctest::Approx(1.0 / 3.14159265358979).epsilon(1e-3));

    auto nt = coset_trace_cdf(CompactGroup::NU1, Component::Nontrivial);
    CHECK(nt(-0.001) == doctest::Approx(0.0));
    CHECK(nt(0.0) == doctest::Approx(1.0));  // point mass at zero trace

    auto mix = coset_trace_cdf(CompactGroup::NU1, Component::Mixture);
    CHECK(mix(0.0) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(mix(-0.0001) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(mix(2.0) == doctest::Approx(1.0).epsilon(1e-9));

    auto pair = coset_trace_cdf(CompactGroup::SU2xSU2, Component::Identity);
    CHECK(pair(-4.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pair(0.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(pair(4.0) == doctest::Approx(1.0).epsilon(1e-7));

    auto usp4 = coset_trace_cdf(CompactGroup::USp4, Component::Identity);
    CHECK(usp4(-4.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(usp4(0.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(usp4(4.0) == doctest::Approx(1.0).epsilon(1e-7));

    for (auto g : {CompactGroup::U1, CompactGroup::SU2, CompactGroup::SU2xSU2, CompactGroup::USp4}) {
        auto cdf = coset_trace_cdf(g, Component::Identity);
        const double d = trace_dim(g);
        double prev = -1e-12;
        for (int i = 0; i <= 64; ++i) {
            const double x = -d + 2 * d * i / 64.0;
            const double v = cdf(x);
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("CDF matches Monte Carlo empirically") {
    for (auto g : {CompactGroup::SU2, CompactGroup::USp4}) {
        auto cdf = coset_trace_cdf(g, Component::Identity);
        const int n = 20000;
        std::vector<double> traces(n);
        for (int i = 0; i < n; ++i) {
            PhiloxStream rng(13, static_cast<uint64_t>(i));
            traces[static_cast<size_t>(i)] =
                sample_element(g, Component::Identity, rng).trace().real();
        }
        std::sort(traces.begin(), traces.end());
        double worst = 0.0;
        for (int i = 0; i < n; i += 37) {
            const double x = traces[static_cast<size_t>(i)];
            const double emp = static_cast<double>(i + 1) / n;
            worst = std::max(worst, std::abs(emp - cdf(x)));
        }
        CHECK(worst < 0.02);
    }
}
