// SPDX-License-Identifier: Apache-2.0
#include "stlab/config.hpp"

#include <set>
#include <stdexcept>

namespace stlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw std::invalid_argument("config " + (pointer.empty() ? "/" : pointer) + ": " + what);
}

const json* find(const json& doc, const std::string& pointer) {
    const json* cur = &doc;
    if (pointer.empty()) return cur;
    std::string tok;
    std::string rest = pointer.substr(1) + "/";
    for (char c : rest) {
        if (c != '/') {
            tok.push_back(c);
            continue;
        }
        if (!cur->is_object() || !cur->contains(tok)) return nullptr;
        cur = &(*cur)[tok];
        tok.clear();
    }
    return cur;
}

const json& require(const json& doc, const std::string& pointer) {
    const json* v = find(doc, pointer);
    if (!v) fail(pointer, "missing required field");
    return *v;
}

long long get_int(const json& doc, const std::string& pointer, long long fallback,
                  bool required = false) {
    const json* v = find(doc, pointer);
    if (!v) {
        if (required) fail(pointer, "missing required field");
        return fallback;
    }
    if (!v->is_number_integer()) fail(pointer, "expected an integer");
    return v->get<long long>();
}

double get_double(const json& doc, const std::string& pointer, double fallback) {
    const json* v = find(doc, pointer);
    if (!v) return fallback;
    if (!v->is_number()) fail(pointer, "expected a number");
    return v->get<double>();
}

std::string get_string(const json& doc, const std::string& pointer, const std::string& fallback,
                       bool required = false) {
    const json* v = find(doc, pointer);
    if (!v) {
        if (required) fail(pointer, "missing required field");
        return fallback;
    }
    if (!v->is_string()) fail(pointer, "expected a string");
    return v->get<std::string>();
}

// Rationals in JSON: integers directly, non-integers as "a/b" strings.
Rational parse_rational_entry(const json& v, const std::string& pointer) {
    try {
        if (v.is_number_integer()) return make_rational(v.get<long long>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        fail(pointer, e.what());
    }
    fail(pointer, "expected an integer or a rational string \"a/b\"");
}

RationalMatrix parse_matrix(const json& v, const std::string& pointer) {
    if (!v.is_array() || v.empty()) fail(pointer, "expected a nonempty array of rows");
    const int rows = static_cast<int>(v.size());
    if (!v[0].is_array() || v[0].empty()) fail(pointer, "expected rows to be arrays");
    const int cols = static_cast<int>(v[0].size());
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string row_ptr = pointer + "/" + std::to_string(i);
        if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols) fail(row_ptr, "ragged matrix");
        for (int j = 0; j < cols; ++j)
            m.at(i, j) = parse_rational_entry(v[i][j], row_ptr + "/" + std::to_string(j));
    }
    return m;
}

GaloisTwistGroup parse_galois(const json& g, const std::string& pointer, int algebra_dim) {
    if (g.contains("table")) {
        GaloisTwistGroup grp;
        const json& table = require(g, "/table");
        if (!table.is_array()) fail(pointer + "/table", "expected an array of rows");
        for (const auto& row : table) {
            grp.table.emplace_back();
            for (const auto& e : row) grp.table.back().push_back(e.get<int>());
        }
        const int m = grp.order();
        if (g.contains("labels"))
            for (const auto& l : g["labels"]) grp.labels.push_back(l.get<std::string>());
        else {
            grp.labels.push_back("id");
            for (int s = 1; s < m; ++s) grp.labels.push_back("g" + std::to_string(s));
        }
        if (static_cast<int>(grp.labels.size()) != m) fail(pointer + "/labels", "label count mismatch");
        if (g.contains("discs")) {
            grp.discs = std::vector<long long>();
            for (const auto& d : g["discs"]) grp.discs->push_back(d.get<long long>());
        }
        const json* acts = find(g, "/actions");
        if (acts) {
            int idx = 0;
            for (const auto& a : *acts)
                grp.actions.push_back(parse_matrix(a, pointer + "/actions/" + std::to_string(idx++)));
        } else {
            for (int s = 0; s < m; ++s) grp.actions.push_back(RationalMatrix::identity(algebra_dim));
        }
        return grp;
    }
    if (!g.contains("discs")) fail(pointer, "expected 'discs' or a full group ('table')");
    std::vector<long long> discs;
    for (const auto& d : g["discs"]) {
        if (!d.is_number_integer()) fail(pointer + "/discs", "expected integers");
        discs.push_back(d.get<long long>());
    }
    std::vector<RationalMatrix> actions;
    const json* acts = find(g, "/actions");
    if (acts) {
        int idx = 0;
        for (const auto& a : *acts)
            actions.push_back(parse_matrix(a, pointer + "/actions/" + std::to_string(idx++)));
    } else {
        for (size_t s = 0; s < (size_t{1} << discs.size()); ++s)
            actions.push_back(RationalMatrix::identity(algebra_dim));
    }
    try {
        return GaloisTwistGroup::multiquadratic(std::move(discs), std::move(actions));
    } catch (const std::exception& e) {
        fail(pointer, e.what());
    }
}

CompactGroup parse_group_name(const json& v, const std::string& pointer) {
    if (!v.is_string()) fail(pointer, "expected a group name string");
    try {
        return parse_compact_group(v.get<std::string>());
    } catch (const std::exception& e) {
        fail(pointer, e.what());
    }
}

}  // namespace

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config /: expected a JSON object");

    RunConfig cfg;
    cfg.command = get_string(doc, "/command", "", true);
    static const std::set<std::string> kCommands = {"lefschetz", "haar-moments", "count", "analyze",
                                                    "selftest"};
    if (!kCommands.count(cfg.command)) fail("/command", "unknown command '" + cfg.command + "'");

    cfg.seed = static_cast<uint64_t>(get_int(doc, "/seed", 0));
    cfg.parallelism = static_cast<int>(get_int(doc, "/parallelism", 0));
    cfg.out_path = get_string(doc, "/out", "");
    cfg.traces_path = get_string(doc, "/traces", "");
    cfg.k_max = static_cast<int>(get_int(doc, "/k_max", 8));
    if (cfg.k_max < 2 || cfg.k_max > 32) fail("/k_max", "expected k_max in [2, 32]");
    cfg.policy.z_threshold = get_double(doc, "/z_threshold", 4.0);

    if (cfg.command == "count" || cfg.command == "analyze") {
        const bool from_traces = cfg.command == "analyze" && !cfg.traces_path.empty();
        if (doc.contains("curve")) {
            const json& cj = require(doc, "/curve");
            const int genus = static_cast<int>(get_int(cj, "/genus", 0, true));
            const json& fj = require(cj, "/f");
            if (!fj.is_array() || fj.empty()) fail("/curve/f", "expected coefficient array");
            std::vector<long long> coeffs;
            for (const auto& c : fj) {
                if (!c.is_number_integer()) fail("/curve/f", "expected integer coefficients");
                coeffs.push_back(c.get<long long>());
            }
            try {
                cfg.curve = CurveSpec::make(genus, std::move(coeffs));
            } catch (const std::exception& e) {
                fail("/curve", e.what());
            }
        } else if (!from_traces) {
            fail("/curve", "missing required field");
        }
        if (doc.contains("galois")) cfg.galois = parse_galois(doc["galois"], "/galois", 1);
        cfg.p_max = get_int(doc, "/p_max", 0, !from_traces);
        if (!from_traces) {
            if (cfg.p_max < 3) fail("/p_max", "expected p_max >= 3");
            if (cfg.curve && cfg.curve->genus == 2 && cfg.p_max > 1024 &&
                !doc.value("allow_slow_genus2", false))
                fail("/p_max", "genus-2 scans cost O(p^2) per prime; p_max > 1024 requires "
                               "\"allow_slow_genus2\": true");
        }
        if (doc.contains("catalog")) {
            const json& cat = doc["catalog"];
            if (!cat.is_array() || cat.empty()) fail("/catalog", "expected a nonempty array");
            int idx = 0;
            for (const auto& g : cat)
                cfg.catalog.push_back(parse_group_name(g, "/catalog/" + std::to_string(idx++)));
        } else if (cfg.curve) {
            cfg.catalog = cfg.curve->genus == 1
                              ? std::vector<CompactGroup>{CompactGroup::U1, CompactGroup::NU1,
                                                          CompactGroup::SU2}
                              : std::vector<CompactGroup>{CompactGroup::U1, CompactGroup::NU1,
                                                          CompactGroup::SU2, CompactGroup::SU2xSU2,
                                                          CompactGroup::USp4};
        } else {
            cfg.catalog = {CompactGroup::U1, CompactGroup::NU1, CompactGroup::SU2,
                           CompactGroup::SU2xSU2, CompactGroup::USp4};
        }
        if (doc.contains("hypothesis")) {
            if (!cfg.galois) fail("/hypothesis", "requires a 'galois' group for class labels");
            const json& hyp = doc["hypothesis"];
            if (!hyp.is_object()) fail("/hypothesis", "expected an object class->[group, component]");
            for (const auto& [label, val] : hyp.items()) {
                auto it = std::find(cfg.galois->labels.begin(), cfg.galois->labels.end(), label);
                if (it == cfg.galois->labels.end())
                    fail("/hypothesis", "unknown class label '" + label + "'");
                if (!val.is_array() || val.size() != 2)
                    fail("/hypothesis/" + label, "expected [group, component]");
                CompactGroup g = parse_group_name(val[0], "/hypothesis/" + label);
                Component comp;
                try {
                    comp = parse_component(val[1].get<std::string>());
                } catch (const std::exception& e) {
                    fail("/hypothesis/" + label, e.what());
                }
                cfg.hypothesis[static_cast<int>(it - cfg.galois->labels.begin())] = {g, comp};
            }
        }
    }

    if (cfg.command == "lefschetz") {
        const int weight = static_cast<int>(get_int(doc, "/weight", 1));
        RationalMatrix pairing = parse_matrix(require(doc, "/pairing"), "/pairing");
        try {
            cfg.space = PolarizedSpace(weight, std::move(pairing));
        } catch (const std::exception& e) {
            fail("/pairing", e.what());
        }
        std::vector<RationalMatrix> gens;
        if (doc.contains("algebra_generators")) {
            int idx = 0;
            for (const auto& g : doc["algebra_generators"])
                gens.push_back(parse_matrix(g, "/algebra_generators/" + std::to_string(idx++)));
        }
        try {
            cfg.algebra = EndAlgebra::from_generators(gens, cfg.space->dim());
        } catch (const std::exception& e) {
            fail("/algebra_generators", e.what());
        }
        if (doc.contains("galois"))
            cfg.twist_group = parse_galois(doc["galois"], "/galois", cfg.algebra->dim());
        else
            cfg.twist_group = GaloisTwistGroup::trivial(cfg.algebra->dim());
        auto issues = validate_action(*cfg.algebra, *cfg.twist_group);
        if (!issues.empty()) fail("/galois", issues.front());
        cfg.budget.restarts = static_cast<int>(get_int(doc, "/budget/restarts", 100));
        cfg.budget.max_iterations = static_cast<int>(get_int(doc, "/budget/max_iterations", 200));
        cfg.budget.tolerance = get_double(doc, "/budget/tolerance", 1e-8);
        cfg.budget.seed = static_cast<uint64_t>(get_int(doc, "/budget/seed", 0));
        if (cfg.budget.restarts < 1) fail("/budget/restarts", "expected a positive restart budget");
        if (doc.contains("power_check"))
            for (const auto& s : require(doc, "/power_check/s"))
                cfg.power_check_s.push_back(s.get<int>());
        cfg.direct_sum_copies = static_cast<int>(get_int(doc, "/direct_sum_copies", 0));
    }

    if (cfg.command == "haar-moments") {
        cfg.haar_group = parse_group_name(require(doc, "/group"), "/group");
        const std::string comp = get_string(
            doc, "/component", cfg.haar_group == CompactGroup::NU1 ? "mixture" : "identity");
        try {
            cfg.haar_component = parse_component(comp);
        } catch (const std::exception& e) {
            fail("/component", e.what());
        }
        if (cfg.haar_component == Component::Nontrivial && cfg.haar_group != CompactGroup::NU1)
            fail("/component", "'nontrivial' is only defined for NU1");
        cfg.haar_method = get_string(doc, "/method", "quad");
        if (cfg.haar_method != "quad" && cfg.haar_method != "mc")
            fail("/method", "expected 'quad' or 'mc'");
        cfg.n_samples = get_int(doc, "/n_samples", 1000000);
        if (cfg.haar_method == "mc" && cfg.n_samples < 1000)
            fail("/n_samples", "expected at least 1000 samples");
    }

    // Volatile keys are excluded from the hash: they cannot affect output bytes.
    json hashed = doc;
    hashed.erase("parallelism");
    hashed.erase("out");
    cfg.doc = hashed;
    cfg.config_hash = fnv1a64(hashed.dump());
    return cfg;
}

}  // namespace stlab
