// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlab/curves.hpp"
#include "stlab/haar.hpp"

namespace stlab {

struct MomentPolicy {
    double z_threshold = 4.0;  // even moments only; odd moments vanish for the catalog
};

// Self-contained comparison of empirical trace moments against one catalog
// candidate: the verdict is derivable from the recorded numbers.
struct AnalysisReport {
    CompactGroup candidate = CompactGroup::U1;
    Component component = Component::Identity;
    size_t n_records = 0;
    int k_max = 0;
    std::vector<double> emp;      // M_0..M_k
    std::vector<double> ref;
    std::vector<double> stderrs;  // of the empirical moments
    std::vector<double> z;        // finite by construction
    std::optional<double> discrepancy;  // sup |F_emp - F_ref| when computed
    int passing_moments = 0;            // even k in [2, k_max] with |z| <= threshold
    bool pass = false;
    std::string verdict;  // "pass" | "fail"
};

MomentVector empirical_moments(const std::vector<TraceRecord>& records, int k_max,
                               std::optional<int> class_filter = std::nullopt);

AnalysisReport compare_to_group(const MomentVector& emp, CompactGroup g, Component component,
                                const MomentPolicy& policy);

// Sup over a 10^4-point grid on [-d, d] of |F_emp - F_ref|.
double discrepancy(const std::vector<TraceRecord>& records, CompactGroup g, Component component);

struct ClassReport {
    int class_index = 0;
    std::string label;
    size_t n_records = 0;
    std::string status;  // "ok" | "insufficient data"
    std::optional<AnalysisReport> report;
};

struct ConditionalResult {
    std::vector<ClassReport> classes;
    bool frequencies_uniform = true;
    bool pass = false;
    std::string verdict;  // "pass" | "fail"
};

// Partitions records by Frobenius class and tests each class against the
// hypothesized coset distribution; the combined verdict additionally gates on
// class frequencies being uniform within 3 sigma.
ConditionalResult component_conditional_test(
    const std::vector<TraceRecord>& records, const GaloisTwistGroup& group,
    const std::map<int, std::pair<CompactGroup, Component>>& hypothesis, const MomentPolicy& policy,
    int k_max);

struct RankedCandidate {
    CompactGroup group = CompactGroup::U1;
    Component component = Component::Identity;
    AnalysisReport report;
};

// Candidates ranked by (passing moments desc, discrepancy asc), ties broken
// by catalog order U1 < NU1 < SU2 < SU2xSU2 < USp4. NU1 is tested as the
// full-group mixture; connected groups as their identity component.
std::vector<RankedCandidate> identify(const std::vector<TraceRecord>& records,
                                      const std::vector<CompactGroup>& catalog,
                                      const MomentPolicy& policy, int k_max);

// Fill class indices on CSV-loaded records from their labels.
void resolve_class_indices(std::vector<TraceRecord>& records, const GaloisTwistGroup& group);

}  // namespace stlab
