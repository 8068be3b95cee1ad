// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stlab/config.hpp"
#include "stlab/version.hpp"

namespace stlab {

using nlohmann::json;

namespace {

json header_json(const RunConfig& cfg) {
    return json{{"tool", "stlab"},
                {"version", kVersion},
                {"command", cfg.command},
                {"seed", cfg.seed},
                {"config_hash", hash_hex(cfg.config_hash)}};
}

void emit(const RunConfig& cfg, const std::string& payload) {
    if (cfg.sink) {
        *cfg.sink << payload;
        return;
    }
    if (cfg.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    out << payload;
}

int resolved_parallelism(const RunConfig& cfg) {
    if (cfg.parallelism > 0) return cfg.parallelism;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

json witness_json(const IsometryWitness& w) {
    json coeff_re = json::array(), coeff_im = json::array();
    for (const auto& c : w.coefficients) {
        coeff_re.push_back(c.real());
        coeff_im.push_back(c.imag());
    }
    json mat_re = json::array(), mat_im = json::array();
    for (const auto& c : w.matrix) {
        mat_re.push_back(c.real());
        mat_im.push_back(c.imag());
    }
    return json{{"coefficients_re", coeff_re}, {"coefficients_im", coeff_im},
                {"matrix_re", mat_re},         {"matrix_im", mat_im},
                {"residual", w.residual},      {"restart_index", w.restart_index},
                {"exact", w.exact}};
}

json power_report_json(const PowerProductReport& rep, const GaloisTwistGroup& group) {
    json dims = json::object();
    for (const auto& [name, value] : rep.dims) dims[name] = value;
    return json{{"mode", rep.mode},
                {"tau", group.labels[static_cast<size_t>(rep.tau)]},
                {"s", rep.s},
                {"pass", rep.pass},
                {"dims", dims}};
}

int run_lefschetz(const RunConfig& cfg) {
    const PolarizedSpace& space = *cfg.space;
    const EndAlgebra& algebra = *cfg.algebra;
    const GaloisTwistGroup& group = *cfg.twist_group;
    SearchBudget budget = cfg.budget;
    budget.parallelism = resolved_parallelism(cfg);

    SurjectionReport surj = component_surjection_report(space, algebra, group, budget);

    json components = json::array();
    for (const auto& comp : surj.components) {
        json c{{"tau", comp.tau_label},
               {"twist_dim", comp.twist_dim},
               {"lie_dim_at_identity", comp.lie_dim_at_identity},
               {"real_empty_certified", comp.real_empty_certified},
               {"nonempty_over_C", comp.nonempty_over_C}};
        c["real_representative"] =
            comp.real_representative ? witness_json(*comp.real_representative) : json(nullptr);
        c["complex_representative"] = comp.complex_representative
                                          ? witness_json(*comp.complex_representative)
                                          : json(nullptr);
        components.push_back(std::move(c));
    }

    json report{{"header", header_json(cfg)},
                {"space_dim", space.dim()},
                {"weight", space.weight()},
                {"algebra_dim", algebra.dim()},
                {"lie_dim", lefschetz_lie_algebra(space, algebra).dim()},
                {"components", components},
                {"verdict", surj.verdict}};

    if (!cfg.power_check_s.empty() || cfg.direct_sum_copies > 1) {
        json checks = json::array();
        for (int tau = 0; tau < group.order(); ++tau) {
            for (int s : cfg.power_check_s)
                checks.push_back(power_report_json(power_product_check(space, algebra, group, tau, s),
                                                   group));
            if (cfg.direct_sum_copies > 1) {
                std::vector<SumFactor> factors(static_cast<size_t>(cfg.direct_sum_copies),
                                               SumFactor{&space, &algebra, &group});
                checks.push_back(power_report_json(power_product_check(factors, tau), group));
            }
        }
        report["power_checks"] = std::move(checks);
    }
    emit(cfg, report.dump(2) + "\n");
    return 0;
}

int run_haar(const RunConfig& cfg) {
    MomentVector mv;
    if (cfg.haar_method == "quad") {
        mv = trace_moments_quadrature(cfg.haar_group, cfg.haar_component, cfg.k_max);
    } else {
        mv = trace_moments_mc(cfg.haar_group, cfg.haar_component, cfg.k_max, cfg.n_samples, cfg.seed,
                              resolved_parallelism(cfg));
    }
    json k = json::array(), m = json::array(), se = json::array();
    for (int i = 0; i <= mv.k_max; ++i) {
        k.push_back(i);
        m.push_back(mv.values[static_cast<size_t>(i)]);
        se.push_back(mv.stderrs[static_cast<size_t>(i)]);
    }
    json report{{"header", header_json(cfg)},
                {"group", compact_group_name(cfg.haar_group)},
                {"component", component_name(cfg.haar_component)},
                {"k", k},
                {"M", m},
                {"stderr", se},
                {"method", mv.method == "quadrature" ? "quadrature" : "mc"}};
    emit(cfg, report.dump(2) + "\n");
    return 0;
}

int run_count(const RunConfig& cfg) {
    const auto records = scan_primes(*cfg.curve, cfg.p_max,
                                     cfg.galois ? &*cfg.galois : nullptr, resolved_parallelism(cfg));
    CsvHeader header{kVersion, cfg.command, cfg.seed, hash_hex(cfg.config_hash)};
    std::ostringstream out;
    write_trace_csv(out, records, header);
    emit(cfg, out.str());
    return 0;
}

json moments_json(const AnalysisReport& rep) {
    json k = json::array(), emp = json::array(), ref = json::array(), z = json::array(),
         se = json::array();
    for (int i = 0; i <= rep.k_max; ++i) {
        k.push_back(i);
        emp.push_back(rep.emp[static_cast<size_t>(i)]);
        ref.push_back(rep.ref[static_cast<size_t>(i)]);
        z.push_back(rep.z[static_cast<size_t>(i)]);
        se.push_back(rep.stderrs[static_cast<size_t>(i)]);
    }
    return json{{"k", k}, {"emp", emp}, {"ref", ref}, {"z", z}, {"stderr", se}};
}

int run_analyze(const RunConfig& cfg) {
    std::vector<TraceRecord> records;
    if (!cfg.traces_path.empty()) {
        std::ifstream in(cfg.traces_path);
        if (!in) throw std::runtime_error("cannot open traces file '" + cfg.traces_path + "'");
        records = read_trace_csv(in);
        if (cfg.galois) resolve_class_indices(records, *cfg.galois);
    } else {
        records = scan_primes(*cfg.curve, cfg.p_max, cfg.galois ? &*cfg.galois : nullptr,
                              resolved_parallelism(cfg));
    }
    if (records.empty()) throw std::runtime_error("analyze: no usable records");

    json report{{"header", header_json(cfg)}, {"n_records", records.size()}, {"k_max", cfg.k_max}};

    auto ranked = identify(records, cfg.catalog, cfg.policy, cfg.k_max);
    const RankedCandidate& top = ranked.front();
    json ranking = json::array();
    for (const auto& c : ranked)
        ranking.push_back(json{{"candidate", compact_group_name(c.group)},
                               {"component", component_name(c.component)},
                               {"passing_moments", c.report.passing_moments},
                               {"discrepancy", *c.report.discrepancy},
                               {"verdict", c.report.verdict}});
    report["ranking"] = std::move(ranking);
    report["candidate"] = compact_group_name(top.group);
    report["component"] = component_name(top.component);
    report["moments"] = moments_json(top.report);
    report["discrepancy"] = *top.report.discrepancy;

    std::string verdict = top.report.verdict;
    if (!cfg.hypothesis.empty()) {
        ConditionalResult cond =
            component_conditional_test(records, *cfg.galois, cfg.hypothesis, cfg.policy, cfg.k_max);
        json classes = json::array();
        for (const auto& cls : cond.classes) {
            json c{{"class", cls.label}, {"n_records", cls.n_records}, {"status", cls.status}};
            if (cls.report) {
                c["candidate"] = compact_group_name(cls.report->candidate);
                c["component"] = component_name(cls.report->component);
                c["moments"] = moments_json(*cls.report);
                c["discrepancy"] =
                    cls.report->discrepancy ? json(*cls.report->discrepancy) : json(nullptr);
                c["verdict"] = cls.report->verdict;
            }
            classes.push_back(std::move(c));
        }
        report["classes"] = std::move(classes);
        report["class_frequencies_uniform"] = cond.frequencies_uniform;
        verdict = cond.verdict;  // the conditional test is the stricter claim
    }
    report["verdict"] = verdict;
    emit(cfg, report.dump(2) + "\n");
    return 0;  // analysis outcomes are data, not tool errors
}

}  // namespace

int run(const RunConfig& cfg) {
    if (cfg.command == "lefschetz") return run_lefschetz(cfg);
    if (cfg.command == "haar-moments") return run_haar(cfg);
    if (cfg.command == "count") return run_count(cfg);
    if (cfg.command == "analyze") return run_analyze(cfg);
    if (cfg.command == "selftest") return selftest(std::cout) == 0 ? 0 : 1;
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace stlab
