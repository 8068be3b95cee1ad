// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stlab/config.hpp"
#include "stlab/version.hpp"

using namespace stlab;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

std::string run_to_string(const std::string& text) {
    RunConfig cfg = parse_config(text);
    std::ostringstream sink;
    cfg.sink = &sink;
    REQUIRE(run(cfg) == 0);
    return sink.str();
}

const char* kLefschetzConfig = R"({
  "command": "lefschetz",
  "weight": 1,
  "pairing": [[0, 1], [-1, 0]],
  "algebra_generators": [[[0, -1], [1, 0]]],
  "galois": {
    "discs": [-1],
    "actions": [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]
  },
  "budget": {"restarts": 40, "seed": 3}
})";

}  // namespace

TEST_CASE("parse_config validates count configs") {
    auto cfg = parse_config(R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100})");
    CHECK(cfg.command == "count");
    REQUIRE(cfg.curve.has_value());
    CHECK(cfg.curve->degree() == 3);
    CHECK(cfg.p_max == 100);
    CHECK(cfg.seed == 0);

    CHECK(error_of(R"({"command":"count","curve":{"genus":1,"f":[0,0,0,1]},"p_max":100})")
              .find("singular") != std::string::npos);
    CHECK(error_of(R"({"command":"fly"})").find("unknown command") != std::string::npos);
    CHECK(error_of(R"({"command":"count","p_max":50})").find("/curve") != std::string::npos);
    CHECK(error_of(R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]}})")
              .find("/p_max") != std::string::npos);
    CHECK(error_of(R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},"p_max":2})")
              .find("/p_max") != std::string::npos);
    CHECK_THROWS(parse_config("not json"));

    // Genus-2 scans beyond the threshold need an explicit opt-in.
    const char* big = R"({"command":"count","curve":{"genus":2,"f":[1,1,0,0,0,1]},"p_max":2000%s})";
    char buf[256];
    std::snprintf(buf, sizeof(buf), big, "");
    CHECK(error_of(buf).find("allow_slow_genus2") != std::string::npos);
    std::snprintf(buf, sizeof(buf), big, R"(,"allow_slow_genus2":true)");
    CHECK_NOTHROW(parse_config(buf));
}

TEST_CASE("parse_config validates analysis configs") {
    auto cfg = parse_config(R"({
      "command": "analyze",
      "curve": {"genus": 1, "f": [0, 1, 0, 1]},
      "p_max": 500,
      "galois": {"discs": [-1]},
      "hypothesis": {"id": ["U1", "identity"], "g1": ["NU1", "nontrivial"]},
      "k_max": 6
    })");
    CHECK(cfg.k_max == 6);
    REQUIRE(cfg.galois.has_value());
    CHECK(cfg.galois->order() == 2);
    CHECK(cfg.hypothesis.at(0).first == CompactGroup::U1);
    CHECK(cfg.hypothesis.at(1).second == Component::Nontrivial);
    CHECK(cfg.catalog.size() == 3);  // genus-1 default catalog

    CHECK(error_of(R"({"command":"analyze","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,
                       "hypothesis":{"id":["U1","identity"]}})")
              .find("/hypothesis") != std::string::npos);
    CHECK(error_of(R"({"command":"analyze","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,
                       "galois":{"discs":[-1]},"hypothesis":{"gX":["U1","identity"]}})")
              .find("gX") != std::string::npos);
    CHECK(error_of(R"({"command":"analyze","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,
                       "k_max":1})")
              .find("/k_max") != std::string::npos);
    CHECK(error_of(R"({"command":"analyze","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,
                       "catalog":[]})")
              .find("/catalog") != std::string::npos);

    // Traces path lifts the curve requirement.
    CHECK_NOTHROW(parse_config(R"({"command":"analyze","traces":"some.csv"})"));
}

TEST_CASE("parse_config validates lefschetz configs") {
    auto cfg = parse_config(kLefschetzConfig);
    REQUIRE(cfg.space.has_value());
    REQUIRE(cfg.algebra.has_value());
    CHECK(cfg.algebra->dim() == 2);
    REQUIRE(cfg.twist_group.has_value());
    CHECK(cfg.budget.restarts == 40);
    CHECK(cfg.budget.seed == 3);

    CHECK(error_of(R"({"command":"lefschetz"})").find("/pairing") != std::string::npos);
    CHECK(error_of(R"({"command":"lefschetz","pairing":[[0,1],[1,0]]})")
              .find("/pairing") != std::string::npos);
    CHECK(error_of(R"({"command":"lefschetz","weight":2,"pairing":[[0,1],[-1,0]]})")
              .find("weight") != std::string::npos);

    // Rationals as "a/b" strings.
    auto frac = parse_config(R"({"command":"lefschetz","pairing":[[0,"1/2"],["-1/2",0]]})");
    CHECK(frac.space->pairing().at(0, 1) == make_rational(1, 2));
    CHECK(error_of(R"({"command":"lefschetz","pairing":[[0,0.5],[-0.5,0]]})")
              .find("/pairing") != std::string::npos);

    // An invalid Galois action is rejected eagerly with its reason.
    json bad = json::parse(kLefschetzConfig);
    bad["galois"]["actions"][1] = {{1, 0}, {0, -2}};
    CHECK(error_of(bad.dump()).find("/galois") != std::string::npos);
}

TEST_CASE("parse_config validates haar configs") {
    auto cfg = parse_config(R"({"command":"haar-moments","group":"SU2"})");
    CHECK(cfg.haar_group == CompactGroup::SU2);
    CHECK(cfg.haar_component == Component::Identity);
    CHECK(cfg.haar_method == "quad");

    auto nu1 = parse_config(R"({"command":"haar-moments","group":"NU1"})");
    CHECK(nu1.haar_component == Component::Mixture);

    CHECK(error_of(R"({"command":"haar-moments"})").find("/group") != std::string::npos);
    CHECK(error_of(R"({"command":"haar-moments","group":"E8"})").find("/group") !=
          std::string::npos);
    CHECK(error_of(R"({"command":"haar-moments","group":"SU2","component":"nontrivial"})")
              .find("nontrivial") != std::string::npos);
    CHECK(error_of(R"({"command":"haar-moments","group":"SU2","method":"exact"})")
              .find("/method") != std::string::npos);
    CHECK(error_of(R"({"command":"haar-moments","group":"SU2","method":"mc","n_samples":10})")
              .find("/n_samples") != std::string::npos);
}

TEST_CASE("config hash ignores volatile keys and key order") {
    auto a = parse_config(R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100})");
    auto b = parse_config(
        R"({"p_max":100,"curve":{"f":[0,1,0,1],"genus":1},"command":"count","parallelism":8,
            "out":"x.csv"})");
    CHECK(a.config_hash == b.config_hash);

    auto c = parse_config(
        R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,"seed":1})");
    CHECK(a.config_hash != c.config_hash);

    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(hash_hex(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("run: haar-moments report schema") {
    const std::string text =
        run_to_string(R"({"command":"haar-moments","group":"SU2","k_max":8})");
    json rep = json::parse(text);
    CHECK(rep["header"]["tool"] == "stlab");
    CHECK(rep["header"]["version"] == kVersion);
    CHECK(rep["header"]["command"] == "haar-moments");
    CHECK(rep["header"]["seed"] == 0);
    CHECK(rep["header"]["config_hash"].is_string());
    CHECK(rep["group"] == "SU2");
    CHECK(rep["component"] == "identity");
    CHECK(rep["method"] == "quadrature");
    CHECK(rep["k"].size() == 9);
    CHECK(rep["M"][0].get<double>() == doctest::Approx(1.0));
    CHECK(rep["M"][2].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep["M"][4].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep["M"][6].get<double>() == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(rep["M"][8].get<double>() == doctest::Approx(14.0).epsilon(1e-9));
    CHECK(rep["stderr"][2].get<double>() == 0.0);
}

TEST_CASE("run: count emits the exact CSV layout") {
    const std::string text = run_to_string(
        R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},"p_max":100,
            "galois":{"discs":[-1]}})");
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("# stlab " + std::string(kVersion) + " command=count seed=0 config_hash=",
                     0) == 0);
    REQUIRE(std::getline(in, line));
    CHECK(line == "p,class,N1,N2,s1,e2,t,u");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 24);
}

TEST_CASE("run: lefschetz report") {
    const std::string text = run_to_string(kLefschetzConfig);
    json rep = json::parse(text);
    CHECK(rep["verdict"] == "surjective (complex points)");
    CHECK(rep["lie_dim"] == 1);
    REQUIRE(rep["components"].size() == 2);
    CHECK(rep["components"][0]["tau"] == "id");
    CHECK(rep["components"][0]["twist_dim"] == 2);
    CHECK(rep["components"][0]["nonempty_over_C"] == "yes");
    CHECK(rep["components"][1]["real_empty_certified"] == true);
    CHECK(rep["components"][1]["nonempty_over_C"] == "yes");
    CHECK(rep["components"][1]["real_representative"].is_null());
    CHECK(!rep["components"][1]["complex_representative"].is_null());

    // Power/direct-sum identities on request.
    json doc = json::parse(kLefschetzConfig);
    doc["power_check"] = {{"s", {1, 2}}};
    doc["direct_sum_copies"] = 2;
    RunConfig cfg = parse_config(doc.dump());
    std::ostringstream sink;
    cfg.sink = &sink;
    REQUIRE(run(cfg) == 0);
    json rep2 = json::parse(sink.str());
    REQUIRE(rep2.contains("power_checks"));
    for (const auto& chk : rep2["power_checks"]) CHECK(chk["pass"] == true);
}

TEST_CASE("run: analyze with hypothesis and from traces") {
    const char* base = R"({
      "command": "analyze",
      "curve": {"genus": 1, "f": [0, 1, 0, 1]},
      "p_max": 2000,
      "galois": {"discs": [-1]},
      "hypothesis": {"id": ["U1", "identity"], "g1": ["NU1", "nontrivial"]},
      "k_max": 4
    })";
    json rep = json::parse(run_to_string(base));
    CHECK(rep["header"]["command"] == "analyze");
    CHECK(rep["verdict"] == "pass");
    CHECK(rep["n_records"].get<int>() > 100);
    REQUIRE(rep["classes"].size() == 2);
    CHECK(rep["classes"][1]["class"] == "g1");
    CHECK(rep["classes"][1]["moments"]["emp"][2].get<double>() == 0.0);
    CHECK(rep["class_frequencies_uniform"] == true);
    CHECK(rep["ranking"].is_array());
    CHECK(rep["ranking"][0]["candidate"] == "NU1");

    // Chained flow: count to CSV, analyze from the CSV, same records.
    json count_doc = json::parse(R"({"command":"count","curve":{"genus":1,"f":[0,1,0,1]},
                                     "p_max":2000,"galois":{"discs":[-1]}})");
    RunConfig count_cfg = parse_config(count_doc.dump());
    std::ostringstream csv;
    count_cfg.sink = &csv;
    REQUIRE(run(count_cfg) == 0);
    const std::string csv_path = "stlab_test_traces.csv";
    {
        std::ofstream f(csv_path, std::ios::binary);
        f << csv.str();
    }
    json from_traces = json::parse(base);
    from_traces.erase("curve");
    from_traces.erase("p_max");
    from_traces["traces"] = csv_path;
    RunConfig az = parse_config(from_traces.dump());
    std::ostringstream sink;
    az.sink = &sink;
    REQUIRE(run(az) == 0);
    json rep2 = json::parse(sink.str());
    CHECK(rep2["n_records"] == rep["n_records"]);
    CHECK(rep2["verdict"] == "pass");
    // The CSV stores 12 significant digits, so the re-read traces agree with
    // the in-memory ones only to that precision.
    auto za = rep["classes"][0]["moments"]["z"].get<std::vector<double>>();
    auto zb = rep2["classes"][0]["moments"]["z"].get<std::vector<double>>();
    REQUIRE(za.size() == zb.size());
    for (size_t i = 0; i < za.size(); ++i) CHECK(zb[i] == doctest::Approx(za[i]).epsilon(1e-6));
    std::remove(csv_path.c_str());

    // Analysis failure is data, not a tool error: exit status stays 0.
    json wrong = json::parse(base);
    wrong["hypothesis"]["id"] = {"SU2", "identity"};
    RunConfig wcfg = parse_config(wrong.dump());
    std::ostringstream wsink;
    wcfg.sink = &wsink;
    CHECK(run(wcfg) == 0);
    CHECK(json::parse(wsink.str())["verdict"] == "fail");
}
