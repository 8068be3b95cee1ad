// SPDX-License-Identifier: Apache-2.0
//
// stlab: exact twisted-Lefschetz computations, Haar trace moments for the
// compact candidate catalog, hyperelliptic Frobenius trace scans, and
// equidistribution analysis. All runs are reproducible: every report embeds
// the tool version, command, seed, and a hash of the effective config, and
// outputs are byte-identical at any parallelism setting.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "stlab/config.hpp"
#include "stlab/version.hpp"

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return json::parse(buf.str());
}

// Effective config = file config (when given) overlaid with explicit flags.
// The flags shown in --help mirror the config keys one-to-one, so a pure-flag
// invocation and the equivalent config file hash identically.
struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<long long> seed;
    std::optional<int> parallelism;

    void attach(CLI::App* cmd, bool config_required) {
        auto* c = cmd->add_option("--config", config_path, "JSON config file");
        if (config_required) c->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--seed", seed, "RNG seed recorded in the report header");
        cmd->add_option("--parallelism", parallelism,
                        "worker threads (0 = all cores); never affects output bytes");
    }

    json doc(const std::string& command) const {
        json d = config_path.empty() ? json::object() : load_config_file(config_path);
        d["command"] = command;
        if (!out_path.empty()) d["out"] = out_path;
        if (seed) d["seed"] = *seed;
        if (parallelism) d["parallelism"] = *parallelism;
        return d;
    }
};

int dispatch(const json& doc) { return stlab::run(stlab::parse_config(doc.dump())); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stlab: Sato-Tate candidate laboratory"};
    app.set_version_flag("--version", std::string("stlab ") + stlab::kVersion);
    app.require_subcommand(1);

    CommonFlags lef_flags, haar_flags, count_flags, analyze_flags;

    auto* lef = app.add_subcommand(
        "lefschetz", "twisted Lefschetz dimensions, isometry search, surjection verdict");
    lef_flags.attach(lef, true);
    std::optional<int> budget;
    lef->add_option("--budget", budget, "random restarts for the isometry search");

    auto* haar = app.add_subcommand("haar-moments",
                                    "trace moments of a compact catalog group");
    haar_flags.attach(haar, false);
    std::optional<std::string> group, component, method;
    std::optional<int> k;
    std::optional<long long> n;
    haar->add_option("--group", group, "U1 | NU1 | SU2 | SU2xSU2 | USp4");
    haar->add_option("--component", component, "identity | nontrivial | mixture");
    haar->add_option("--method", method, "quad | mc")
        ->check(CLI::IsMember({"quad", "mc"}));
    haar->add_option("--k", k, "highest moment order (2..32)");
    haar->add_option("--n", n, "Monte Carlo sample count (method=mc)");

    auto* count =
        app.add_subcommand("count", "Frobenius trace records for a hyperelliptic curve (CSV)");
    count_flags.attach(count, true);

    auto* analyze = app.add_subcommand(
        "analyze", "equidistribution tests against the compact catalog (JSON)");
    analyze_flags.attach(analyze, true);
    std::string traces_path;
    analyze->add_option("--traces", traces_path, "pre-computed trace CSV (skips counting)")
        ->check(CLI::ExistingFile);

    auto* self = app.add_subcommand("selftest", "run the module invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (self->parsed()) {
            json doc{{"command", "selftest"}};
            return dispatch(doc);
        }
        if (lef->parsed()) {
            json doc = lef_flags.doc("lefschetz");
            if (budget) doc["budget"]["restarts"] = *budget;
            return dispatch(doc);
        }
        if (haar->parsed()) {
            json doc = haar_flags.doc("haar-moments");
            if (group) doc["group"] = *group;
            if (component) doc["component"] = *component;
            if (method) doc["method"] = *method;
            if (k) doc["k_max"] = *k;
            if (n) doc["n_samples"] = *n;
            return dispatch(doc);
        }
        if (count->parsed()) return dispatch(count_flags.doc("count"));
        if (analyze->parsed()) {
            json doc = analyze_flags.doc("analyze");
            if (!traces_path.empty()) doc["traces"] = traces_path;
            return dispatch(doc);
        }
    } catch (const json::parse_error& e) {
        std::cerr << "stlab: config is not valid JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stlab: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
