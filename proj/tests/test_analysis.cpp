// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "stlab/analysis.hpp"

using namespace stlab;

namespace {

std::vector<TraceRecord> records_from_traces(const std::vector<double>& ts) {
    std::vector<TraceRecord> out(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        out[i].p = 3 + 2 * static_cast<long long>(i);
        out[i].t = ts[i];
    }
    return out;
}

std::vector<TraceRecord> sampled_records(CompactGroup g, int n, uint64_t seed) {
    std::vector<TraceRecord> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        PhiloxStream rng(seed, static_cast<uint64_t>(i));
        out[static_cast<size_t>(i)].t = sample_element(g, Component::Identity, rng).trace().real();
        out[static_cast<size_t>(i)].p = i + 3;
    }
    return out;
}

}  // namespace

TEST_CASE("empirical moments") {
    auto m = empirical_moments(records_from_traces({0, 0}), 2);
    CHECK(m.values[2] == 0.0);

    auto m2 = empirical_moments(records_from_traces({2, -2}), 2);
    CHECK(m2.values[1] == 0.0);
    CHECK(m2.values[2] == 4.0);
    CHECK(m2.values[0] == 1.0);

    CHECK_THROWS_AS(empirical_moments({}, 4), std::invalid_argument);

    // Class filtering.
    auto recs = records_from_traces({1, -1, 0, 0});
    recs[0].class_index = 0;
    recs[1].class_index = 0;
    recs[2].class_index = 1;
    recs[3].class_index = 1;
    CHECK(empirical_moments(recs, 2, 0).values[2] == 1.0);
    CHECK(empirical_moments(recs, 2, 1).values[2] == 0.0);
    CHECK_THROWS_AS(empirical_moments(recs, 2, 7), std::invalid_argument);
}

TEST_CASE("compare_to_group policies") {
    MomentPolicy policy;

    // emp == reference exactly -> all z = 0, pass.
    auto ref = trace_moments_quadrature(CompactGroup::SU2, Component::Identity, 6);
    MomentVector emp = ref;
    emp.method = "empirical";
    emp.stderrs.assign(emp.values.size(), 0.01);
    auto rep = compare_to_group(emp, CompactGroup::SU2, Component::Identity, policy);
    CHECK(rep.pass);
    CHECK(rep.verdict == "pass");
    for (int k = 2; k <= 6; k += 2) CHECK(rep.z[static_cast<size_t>(k)] == 0.0);
    CHECK(rep.passing_moments == 3);

    // NU1-shaped moments pass against NU1 and fail against SU2.
    MomentVector nu;
    nu.k_max = 4;
    nu.values = {1.0, 0.0, 1.0, 0.0, 3.0};
    nu.stderrs = {0.0, 0.01, 0.02, 0.05, 0.1};
    CHECK(compare_to_group(nu, CompactGroup::NU1, Component::Mixture, policy).pass);
    auto vs_su2 = compare_to_group(nu, CompactGroup::SU2, Component::Identity, policy);
    CHECK(!vs_su2.pass);
    CHECK(vs_su2.verdict == "fail");
    CHECK(std::abs(vs_su2.z[4]) == doctest::Approx(10.0));  // (3-2)/0.1

    // Zero stderr with nonzero difference produces the finite sentinel.
    MomentVector degenerate;
    degenerate.k_max = 2;
    degenerate.values = {1.0, 0.0, 2.0};
    degenerate.stderrs = {0.0, 0.0, 0.0};
    auto z = compare_to_group(degenerate, CompactGroup::SU2, Component::Identity, policy);
    CHECK(std::abs(z.z[2]) == 1e12);
    CHECK(!z.pass);
    MomentVector exact;
    exact.k_max = 2;
    exact.values = {1.0, 0.0, 1.0};
    exact.stderrs = {0.0, 0.0, 0.0};
    CHECK(compare_to_group(exact, CompactGroup::SU2, Component::Identity, policy).pass);

    // Only even moments gate the verdict; a large odd-moment deviation is ignored.
    MomentVector odd;
    odd.k_max = 2;
    odd.values = {1.0, 0.9, 1.0};
    odd.stderrs = {0.0, 0.001, 0.02};
    CHECK(compare_to_group(odd, CompactGroup::SU2, Component::Identity, policy).pass);
}

TEST_CASE("discrepancy") {
    CHECK_THROWS_AS(discrepancy(records_from_traces({0, 0, 0}), CompactGroup::SU2,
                                Component::Identity),
                    std::invalid_argument);

    auto zeros = records_from_traces(std::vector<double>(300, 0.0));
    CHECK(discrepancy(zeros, CompactGroup::SU2, Component::Identity) ==
          doctest::Approx(0.5).epsilon(2e-3));

    auto su2 = sampled_records(CompactGroup::SU2, 100000, 21);
    CHECK(discrepancy(su2, CompactGroup::SU2, Component::Identity) < 0.01);

    // Permutation invariance.
    auto shuffled = su2;
    std::mt19937 rng(5);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(discrepancy(shuffled, CompactGroup::SU2, Component::Identity) ==
          discrepancy(su2, CompactGroup::SU2, Component::Identity));
}

TEST_CASE("component-conditional analysis on CM data") {
    auto cm = CurveSpec::make(1, {0, 1, 0, 1});
    auto gi = GaloisTwistGroup::multiquadratic(
        {-1}, {RationalMatrix::identity(1), RationalMatrix::identity(1)});
    auto records = scan_primes(cm, 4000, &gi, 2);
    MomentPolicy policy;

    std::map<int, std::pair<CompactGroup, Component>> good{
        {0, {CompactGroup::U1, Component::Identity}},
        {1, {CompactGroup::NU1, Component::Nontrivial}}};
    auto res = component_conditional_test(records, gi, good, policy, 4);
    CHECK(res.pass);
    CHECK(res.verdict == "pass");
    CHECK(res.frequencies_uniform);
    REQUIRE(res.classes.size() == 2);
    CHECK(res.classes[0].status == "ok");
    REQUIRE(res.classes[1].report.has_value());
    // The nontrivial class is a literal point mass at zero.
    CHECK(res.classes[1].report->emp[2] == 0.0);
    CHECK(res.classes[1].report->discrepancy.has_value());
    CHECK(*res.classes[1].report->discrepancy < 1e-9);

    // A deliberately wrong identity-class hypothesis fails on M4.
    std::map<int, std::pair<CompactGroup, Component>> wrong{
        {0, {CompactGroup::SU2, Component::Identity}},
        {1, {CompactGroup::NU1, Component::Nontrivial}}};
    auto bad = component_conditional_test(records, gi, wrong, policy, 4);
    CHECK(!bad.pass);
    CHECK(bad.verdict == "fail");
    REQUIRE(bad.classes[0].report.has_value());
    CHECK(std::abs(bad.classes[0].report->z[4]) > 4.0);

    // Missing hypothesis for an observed class is a hard error.
    std::map<int, std::pair<CompactGroup, Component>> partial{
        {0, {CompactGroup::U1, Component::Identity}}};
    CHECK_THROWS_AS(component_conditional_test(records, gi, partial, policy, 4),
                    std::invalid_argument);

    // A hypothesis class with no records reports "insufficient data".
    std::vector<TraceRecord> only_id;
    for (const auto& r : records)
        if (r.class_index == 0) only_id.push_back(r);
    auto sparse = component_conditional_test(only_id, gi, good, policy, 4);
    REQUIRE(sparse.classes.size() == 2);
    CHECK(sparse.classes[1].status == "insufficient data");
    CHECK(!sparse.classes[1].report.has_value());
    CHECK(!sparse.frequencies_uniform);  // all mass on one class
}

TEST_CASE("trivial group reduces to compare_to_group") {
    auto cm = CurveSpec::make(1, {0, 1, 0, 1});
    auto records = scan_primes(cm, 4000, nullptr, 1);
    MomentPolicy policy;
    auto triv = GaloisTwistGroup::trivial(1);
    auto cond = component_conditional_test(
        records, triv, {{0, {CompactGroup::NU1, Component::Mixture}}}, policy, 6);
    auto direct = compare_to_group(empirical_moments(records, 6), CompactGroup::NU1,
                                   Component::Mixture, policy);
    REQUIRE(cond.classes.size() == 1);
    REQUIRE(cond.classes[0].report.has_value());
    const auto& nested = *cond.classes[0].report;
    CHECK(nested.emp == direct.emp);
    CHECK(nested.stderrs == direct.stderrs);
    CHECK(nested.z == direct.z);
    CHECK(nested.pass == direct.pass);
    CHECK(cond.pass == direct.pass);
    CHECK(cond.frequencies_uniform);
}

TEST_CASE("identify") {
    MomentPolicy policy;
    auto su2 = sampled_records(CompactGroup::SU2, 4000, 31);
    auto ranked = identify(su2, {CompactGroup::U1, CompactGroup::NU1, CompactGroup::SU2}, policy, 8);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].group == CompactGroup::SU2);
    CHECK(ranked[0].report.pass);

    auto u1 = sampled_records(CompactGroup::U1, 4000, 33);
    auto ranked_u1 =
        identify(u1, {CompactGroup::U1, CompactGroup::NU1, CompactGroup::SU2}, policy, 8);
    CHECK(ranked_u1[0].group == CompactGroup::U1);

    // Deterministic given identical inputs.
    auto again =
        identify(su2, {CompactGroup::U1, CompactGroup::NU1, CompactGroup::SU2}, policy, 8);
    for (size_t i = 0; i < ranked.size(); ++i) {
        CHECK(ranked[i].group == again[i].group);
        CHECK(ranked[i].report.discrepancy == again[i].report.discrepancy);
    }

    CHECK_THROWS_AS(identify(su2, {}, policy, 8), std::invalid_argument);
    auto tiny = sampled_records(CompactGroup::SU2, 99, 1);
    CHECK_THROWS_AS(identify(tiny, {CompactGroup::SU2}, policy, 8), std::invalid_argument);
}

TEST_CASE("resolve_class_indices") {
    auto gi = GaloisTwistGroup::multiquadratic(
        {-1}, {RationalMatrix::identity(1), RationalMatrix::identity(1)});
    std::vector<TraceRecord> recs(2);
    recs[0].class_label = "id";
    recs[1].class_label = "g1";
    resolve_class_indices(recs, gi);
    CHECK(recs[0].class_index == 0);
    CHECK(recs[1].class_index == 1);

    std::vector<TraceRecord> bad(1);
    bad[0].class_label = "g7";
    CHECK_THROWS_AS(resolve_class_indices(bad, gi), std::invalid_argument);
}
