// SPDX-License-Identifier: Apache-2.0
#include "stlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stlab {

namespace {

// Large finite sentinel: keeps z-scores finite when stderr is zero but the
// moments genuinely differ.
constexpr double kZSentinel = 1e12;

std::vector<double> filtered_traces(const std::vector<TraceRecord>& records,
                                    std::optional<int> class_filter) {
    std::vector<double> t;
    t.reserve(records.size());
    for (const auto& r : records) {
        if (class_filter && (!r.class_index || *r.class_index != *class_filter)) continue;
        t.push_back(r.t);
    }
    return t;
}

}  // namespace

MomentVector empirical_moments(const std::vector<TraceRecord>& records, int k_max,
                               std::optional<int> class_filter) {
    if (k_max < 0) throw std::invalid_argument("empirical_moments: negative k_max");
    const auto t = filtered_traces(records, class_filter);
    if (t.empty()) throw std::invalid_argument("empirical_moments: no records after filtering");
    const double n = static_cast<double>(t.size());
    MomentVector out;
    out.k_max = k_max;
    out.method = "empirical";
    out.values.assign(k_max + 1, 0.0);
    out.stderrs.assign(k_max + 1, 0.0);
    std::vector<double> sums(k_max + 1, 0.0), sq(k_max + 1, 0.0);
    for (double v : t) {
        double pw = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            sums[k] += pw;
            sq[k] += pw * pw;
            pw *= v;
        }
    }
    for (int k = 0; k <= k_max; ++k) {
        const double mean = sums[k] / n;
        out.values[k] = mean;
        if (t.size() > 1) {
            const double var = std::max(0.0, (sq[k] - n * mean * mean) / (n - 1.0));
            out.stderrs[k] = std::sqrt(var / n);
        }
    }
    return out;
}

AnalysisReport compare_to_group(const MomentVector& emp, CompactGroup g, Component component,
                                const MomentPolicy& policy) {
    if (emp.values.empty()) throw std::invalid_argument("compare_to_group: empty moment vector");
    const MomentVector ref = trace_moments_quadrature(g, component, emp.k_max);
    AnalysisReport rep;
    rep.candidate = g;
    rep.component = component;
    rep.k_max = emp.k_max;
    rep.emp = emp.values;
    rep.ref = ref.values;
    rep.stderrs = emp.stderrs;
    rep.z.resize(emp.values.size());
    rep.pass = true;
    for (int k = 0; k <= emp.k_max; ++k) {
        const double diff = emp.values[k] - ref.values[k];
        double zk = 0.0;
        if (diff != 0.0)
            zk = emp.stderrs[k] > 0.0 ? diff / emp.stderrs[k] : std::copysign(kZSentinel, diff);
        rep.z[k] = zk;
        if (k >= 2 && k % 2 == 0) {
            if (std::abs(zk) <= policy.z_threshold)
                ++rep.passing_moments;
            else
                rep.pass = false;
        }
    }
    rep.verdict = rep.pass ? "pass" : "fail";
    return rep;
}

double discrepancy(const std::vector<TraceRecord>& records, CompactGroup g, Component component) {
    std::vector<double> t = filtered_traces(records, std::nullopt);
    if (t.size() < 10) throw std::invalid_argument("discrepancy: need at least 10 records");
    std::sort(t.begin(), t.end());
    const auto cdf = coset_trace_cdf(g, component);
    const double d = static_cast<double>(trace_dim(g));
    const int grid = 10000;
    const double n = static_cast<double>(t.size());
    double sup = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = -d + 2.0 * d * i / (grid - 1);
        const double femp =
            static_cast<double>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) / n;
        sup = std::max(sup, std::abs(femp - cdf(x)));
    }
    return sup;
}

ConditionalResult component_conditional_test(
    const std::vector<TraceRecord>& records, const GaloisTwistGroup& group,
    const std::map<int, std::pair<CompactGroup, Component>>& hypothesis, const MomentPolicy& policy,
    int k_max) {
    const int m = group.order();
    if (hypothesis.empty())
        throw std::invalid_argument("component_conditional_test: empty hypothesis");
    for (const auto& [cls, hyp] : hypothesis)
        if (cls < 0 || cls >= m)
            throw std::invalid_argument("component_conditional_test: hypothesis class out of range");

    // Partition; a trivial group treats unlabeled records as the identity class.
    std::vector<std::vector<TraceRecord>> buckets(static_cast<size_t>(m));
    for (const auto& r : records) {
        int cls = 0;
        if (r.class_index)
            cls = *r.class_index;
        else if (m > 1)
            throw std::invalid_argument(
                "component_conditional_test: records lack class labels for a nontrivial group");
        if (cls < 0 || cls >= m)
            throw std::invalid_argument("component_conditional_test: record class out of range");
        if (!hypothesis.count(cls))
            throw std::invalid_argument("component_conditional_test: no hypothesis for class '" +
                                        group.labels[static_cast<size_t>(cls)] + "'");
        buckets[static_cast<size_t>(cls)].push_back(r);
    }

    ConditionalResult result;
    bool all_pass = true;
    for (const auto& [cls, hyp] : hypothesis) {
        ClassReport cr;
        cr.class_index = cls;
        cr.label = group.labels[static_cast<size_t>(cls)];
        const auto& bucket = buckets[static_cast<size_t>(cls)];
        cr.n_records = bucket.size();
        if (bucket.empty()) {
            cr.status = "insufficient data";  // reported, not a failure
        } else {
            cr.status = "ok";
            AnalysisReport rep =
                compare_to_group(empirical_moments(bucket, k_max), hyp.first, hyp.second, policy);
            rep.n_records = bucket.size();
            if (bucket.size() >= 10) rep.discrepancy = discrepancy(bucket, hyp.first, hyp.second);
            if (!rep.pass) all_pass = false;
            cr.report = std::move(rep);
        }
        result.classes.push_back(std::move(cr));
    }

    // Chebotarev sanity gate: equal class densities for the (Z/2)^r quotients.
    const double n = static_cast<double>(records.size());
    if (m > 1 && n > 0) {
        const double q = 1.0 / m;
        const double sigma = std::sqrt(n * q * (1.0 - q));
        for (int cls = 0; cls < m; ++cls) {
            const double observed = static_cast<double>(buckets[static_cast<size_t>(cls)].size());
            if (std::abs(observed - n * q) > 3.0 * sigma) result.frequencies_uniform = false;
        }
    }
    result.pass = all_pass && result.frequencies_uniform;
    result.verdict = result.pass ? "pass" : "fail";
    return result;
}

std::vector<RankedCandidate> identify(const std::vector<TraceRecord>& records,
                                      const std::vector<CompactGroup>& catalog,
                                      const MomentPolicy& policy, int k_max) {
    if (catalog.empty()) throw std::invalid_argument("identify: empty catalog");
    if (records.size() < 100) throw std::invalid_argument("identify: need at least 100 records");
    const MomentVector emp = empirical_moments(records, k_max);
    std::vector<RankedCandidate> out;
    out.reserve(catalog.size());
    for (CompactGroup g : catalog) {
        RankedCandidate c;
        c.group = g;
        c.component = g == CompactGroup::NU1 ? Component::Mixture : Component::Identity;
        c.report = compare_to_group(emp, g, c.component, policy);
        c.report.n_records = records.size();
        c.report.discrepancy = discrepancy(records, g, c.component);
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.report.passing_moments != b.report.passing_moments)
            return a.report.passing_moments > b.report.passing_moments;
        if (*a.report.discrepancy != *b.report.discrepancy)
            return *a.report.discrepancy < *b.report.discrepancy;
        return static_cast<int>(a.group) < static_cast<int>(b.group);
    });
    return out;
}

void resolve_class_indices(std::vector<TraceRecord>& records, const GaloisTwistGroup& group) {
    for (auto& r : records) {
        if (r.class_label.empty()) continue;
        auto it = std::find(group.labels.begin(), group.labels.end(), r.class_label);
        if (it == group.labels.end())
            throw std::invalid_argument("unknown class label '" + r.class_label + "' in records");
        r.class_index = static_cast<int>(it - group.labels.begin());
    }
}

}  // namespace stlab
