// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "stlab/linalg.hpp"
#include "stlab/philox.hpp"

using namespace stlab;

TEST_CASE("rref pivots and rank") {
    RationalMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 1, 1}};
    auto r = rref(m);
    CHECK(r.rank == 2);
    CHECK(r.pivot_cols == std::vector<int>{0, 1});
    // Fully reduced: pivot columns are unit vectors.
    CHECK(r.mat.at(0, 0) == 1);
    CHECK(r.mat.at(0, 1) == 0);
    CHECK(r.mat.at(1, 1) == 1);
    CHECK(rank(RationalMatrix::identity(4)) == 4);
    CHECK(rank(RationalMatrix::zero(3, 5)) == 0);
}

TEST_CASE("kernel canonical parameterization") {
    auto k = kernel(RationalMatrix{{1, 2}, {2, 4}});
    REQUIRE(k.dim() == 1);
    CHECK(k.ambient == 2);
    CHECK(k.vectors[0][0] == -2);
    CHECK(k.vectors[0][1] == 1);

    CHECK(kernel(RationalMatrix::identity(3)).dim() == 0);
    CHECK(kernel(RationalMatrix::zero(2, 3)).dim() == 3);

    // Kernel vectors actually annihilate the matrix.
    RationalMatrix m{{1, -3, 2, 0}, {0, 1, 1, -1}};
    auto kb = kernel(m);
    REQUIRE(kb.dim() == 2);
    for (const auto& v : kb.vectors)
        for (int i = 0; i < m.rows(); ++i) {
            Rational acc = 0;
            for (int j = 0; j < m.cols(); ++j) acc += m.at(i, j) * v[static_cast<size_t>(j)];
            CHECK(acc == 0);
        }
}

TEST_CASE("rank-nullity on pseudorandom matrices") {
    PhiloxStream rng(2024, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = 1 + static_cast<int>(rng.next_u64() % 6);
        const int cols = 1 + static_cast<int>(rng.next_u64() % 6);
        RationalMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m.at(i, j) = make_rational(static_cast<long>(rng.next_u64() % 5) - 2);
        CHECK(rank(m) + kernel(m).dim() == cols);
    }
}

TEST_CASE("determinant exact values") {
    CHECK(determinant(RationalMatrix{{2}}) == 2);
    CHECK(determinant(RationalMatrix{{0, 1}, {-1, 0}}) == 1);
    CHECK(determinant(RationalMatrix{{1, 2}, {2, 4}}) == 0);
    RationalMatrix f(2, 2);
    f.at(0, 0) = make_rational(1, 2);
    f.at(0, 1) = make_rational(1, 3);
    f.at(1, 0) = make_rational(1, 4);
    f.at(1, 1) = make_rational(1, 5);
    CHECK(determinant(f) == make_rational(1, 60));
    CHECK(determinant(RationalMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
}

TEST_CASE("solve_coordinates consistency") {
    std::vector<std::vector<Rational>> basis = {{1, 0, 1}, {0, 1, 1}};
    auto c = solve_coordinates(basis, {2, 3, 5});
    REQUIRE(c.has_value());
    CHECK((*c)[0] == 2);
    CHECK((*c)[1] == 3);
    CHECK(!solve_coordinates(basis, {1, 0, 0}).has_value());
    SubspaceBasis sb{3, basis};
    CHECK(spans_contain(sb, {2, 3, 5}));
    CHECK(!spans_contain(sb, {0, 0, 1}));
}

TEST_CASE("SpanTracker incremental echelon") {
    SpanTracker t(3);
    CHECK(t.insert({1, 1, 0}));
    CHECK(t.insert({0, 1, 1}));
    CHECK(!t.insert({1, 2, 1}));  // dependent
    CHECK(t.dim() == 2);
    CHECK(t.contains({2, 3, 1}));
    CHECK(!t.contains({0, 0, 1}));
}

TEST_CASE("algebra_closure") {
    // Unital closure always contains the identity.
    auto scalars = algebra_closure({}, 2);
    REQUIRE(scalars.size() == 1);
    CHECK(scalars[0] == RationalMatrix::identity(2));

    auto qi = algebra_closure({RationalMatrix{{0, -1}, {1, 0}}}, 2);
    CHECK(qi.size() == 2);
    CHECK(qi[0] == RationalMatrix::identity(2));

    auto full = algebra_closure({RationalMatrix{{0, 1}, {0, 0}}, RationalMatrix{{0, 0}, {1, 0}}}, 2);
    CHECK(full.size() == 4);

    auto dual = algebra_closure({RationalMatrix{{0, 1}, {0, 0}}}, 2);
    CHECK(dual.size() == 2);  // Q[eps], eps^2 = 0
}

TEST_CASE("common_kernel matches commutant") {
    RationalMatrix j{{0, -1}, {1, 0}};
    auto maps = std::vector<std::function<RationalMatrix(const RationalMatrix&)>>{
        [&](const RationalMatrix& x) { return x * j - j * x; }};
    auto comm = common_kernel(maps, 2);
    CHECK(comm.size() == 2);  // commutant of J in M_2(Q) is Q(i)
    for (const auto& m : comm) CHECK(m * j == j * m);
}
