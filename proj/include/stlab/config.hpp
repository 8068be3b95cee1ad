// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlab/analysis.hpp"
#include "stlab/curves.hpp"
#include "stlab/twist.hpp"

namespace stlab {

// Fully validated run description. Invariants of every referenced domain
// object are checked eagerly at parse time with pointer-anchored messages.
struct RunConfig {
    std::string command;
    nlohmann::json doc;  // effective config (volatile keys stripped)
    uint64_t config_hash = 0;
    uint64_t seed = 0;
    int parallelism = 0;  // 0 = hardware concurrency; never part of the hash
    std::string out_path;
    std::string traces_path;
    std::ostream* sink = nullptr;  // overrides out_path/stdout (in-process callers)

    // count / analyze
    std::optional<CurveSpec> curve;
    std::optional<GaloisTwistGroup> galois;
    long long p_max = 0;
    int k_max = 8;
    std::vector<CompactGroup> catalog;
    std::map<int, std::pair<CompactGroup, Component>> hypothesis;
    MomentPolicy policy;

    // lefschetz
    std::optional<PolarizedSpace> space;
    std::optional<EndAlgebra> algebra;
    std::optional<GaloisTwistGroup> twist_group;
    SearchBudget budget;
    std::vector<int> power_check_s;
    int direct_sum_copies = 0;

    // haar-moments
    CompactGroup haar_group = CompactGroup::U1;
    Component haar_component = Component::Identity;
    std::string haar_method = "quad";
    long long n_samples = 1000000;
};

// Parses and validates a JSON config. Throws std::invalid_argument with a
// JSON-pointer anchor (e.g. "config /curve/f: ...") on any violation.
RunConfig parse_config(const std::string& text);

uint64_t fnv1a64(const std::string& data);
std::string hash_hex(uint64_t h);

int run(const RunConfig& config);

// Module invariant battery; returns the number of failures (0 = pass).
int selftest(std::ostream& out);

}  // namespace stlab
