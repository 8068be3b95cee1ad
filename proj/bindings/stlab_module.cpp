// SPDX-License-Identifier: Apache-2.0
//
// Python bindings. `run` drives the same validated config -> report pipeline
// as the CLI and returns the report text; the remaining functions expose the
// individual operations for interactive use.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <vector>

#include "stlab/config.hpp"
#include "stlab/philox.hpp"
#include "stlab/version.hpp"

namespace py = pybind11;

namespace {

std::string run_config_text(const std::string& config_text) {
    stlab::RunConfig cfg = stlab::parse_config(config_text);
    std::ostringstream sink;
    cfg.sink = &sink;
    if (stlab::run(cfg) != 0) throw std::runtime_error("run failed: " + sink.str());
    return sink.str();
}

std::vector<uint64_t> philox_raw(uint64_t seed, uint64_t stream, int count) {
    if (count < 0) throw std::invalid_argument("count must be nonnegative");
    stlab::PhiloxStream rng(seed, stream);
    std::vector<uint64_t> out(static_cast<size_t>(count));
    for (auto& v : out) v = rng.next_u64();
    return out;
}

py::dict moment_dict(const stlab::MomentVector& mv, stlab::CompactGroup g,
                     stlab::Component component) {
    py::list ks, ms, ses;
    for (int k = 0; k <= mv.k_max; ++k) {
        ks.append(k);
        ms.append(mv.values[static_cast<size_t>(k)]);
        ses.append(mv.stderrs[static_cast<size_t>(k)]);
    }
    py::dict d;
    d["group"] = stlab::compact_group_name(g);
    d["component"] = stlab::component_name(component);
    d["k"] = ks;
    d["M"] = ms;
    d["stderr"] = ses;
    d["method"] = mv.method;
    return d;
}

py::dict haar_moments(const std::string& group, const std::string& component, int k_max,
                      const std::string& method, long long n_samples, uint64_t seed,
                      int parallelism) {
    const auto g = stlab::parse_compact_group(group);
    const auto comp = stlab::parse_component(component);
    const stlab::MomentVector mv =
        method == "mc" ? stlab::trace_moments_mc(g, comp, k_max, n_samples, seed, parallelism)
                       : stlab::trace_moments_quadrature(g, comp, k_max);
    return moment_dict(mv, g, comp);
}

std::vector<double> sample_traces(const std::string& group, const std::string& component,
                                  int count, uint64_t seed) {
    const auto g = stlab::parse_compact_group(group);
    const auto comp = stlab::parse_component(component);
    std::vector<double> out(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        stlab::PhiloxStream rng(seed, static_cast<uint64_t>(i));
        out[static_cast<size_t>(i)] = stlab::sample_element(g, comp, rng).trace().real();
    }
    return out;
}

double trace_cdf(const std::string& group, const std::string& component, double x) {
    return stlab::coset_trace_cdf(stlab::parse_compact_group(group),
                                  stlab::parse_component(component))(x);
}

stlab::GaloisTwistGroup group_from_discs(const std::vector<long long>& discs) {
    const size_t order = size_t{1} << discs.size();
    std::vector<stlab::RationalMatrix> actions(order, stlab::RationalMatrix::identity(1));
    return stlab::GaloisTwistGroup::multiquadratic(discs, std::move(actions));
}

py::list count_curve(int genus, const std::vector<long long>& f, long long p_max,
                     std::optional<std::vector<long long>> discs, int parallelism) {
    const auto curve = stlab::CurveSpec::make(genus, f);
    std::optional<stlab::GaloisTwistGroup> group;
    if (discs) group = group_from_discs(*discs);
    const auto records =
        stlab::scan_primes(curve, p_max, group ? &*group : nullptr, parallelism);
    py::list out;
    for (const auto& r : records) {
        py::dict d;
        d["p"] = r.p;
        d["class"] = r.class_label.empty() ? py::object(py::none()) : py::str(r.class_label);
        d["N1"] = r.n1;
        d["N2"] = r.n2 ? py::object(py::int_(*r.n2)) : py::none();
        d["s1"] = r.s1;
        d["e2"] = r.e2 ? py::object(py::int_(*r.e2)) : py::none();
        d["t"] = r.t;
        d["u"] = r.u ? py::object(py::float_(*r.u)) : py::none();
        d["weil_ok"] = r.weil_ok;
        out.append(d);
    }
    return out;
}

int frobenius_class_py(long long p, const std::vector<long long>& discs) {
    return stlab::frobenius_class(p, group_from_discs(discs));
}

}  // namespace

PYBIND11_MODULE(_stlab, m) {
    m.doc() = "Sato-Tate candidate laboratory (C++ core)";
    m.attr("__version__") = stlab::kVersion;

    m.def("run", &run_config_text, py::arg("config"),
          "Validate a JSON config and run it; returns the report text (JSON or CSV).");
    m.def("selftest", [] { return stlab::selftest(std::cout); },
          "Run the module invariant suites; returns the failure count.");

    m.def("philox_raw", &philox_raw, py::arg("seed"), py::arg("stream"), py::arg("count"),
          "First `count` raw 64-bit outputs of the counter-based stream (seed, stream).");

    m.def("haar_moments", &haar_moments, py::arg("group"), py::arg("component") = "identity",
          py::arg("k_max") = 8, py::arg("method") = "quad", py::arg("n_samples") = 1000000,
          py::arg("seed") = 0, py::arg("parallelism") = 1,
          "Trace moments M_0..M_k of a compact catalog group (quadrature or Monte Carlo).");
    m.def("sample_traces", &sample_traces, py::arg("group"), py::arg("component"),
          py::arg("count"), py::arg("seed") = 0,
          "Traces of Haar samples; sample i is drawn from stream (seed, i).");
    m.def("trace_cdf", &trace_cdf, py::arg("group"), py::arg("component"), py::arg("x"),
          "CDF of the trace distribution at x.");

    m.def("count_curve", &count_curve, py::arg("genus"), py::arg("f"), py::arg("p_max"),
          py::arg("discs") = py::none(), py::arg("parallelism") = 1,
          "Frobenius trace records for y^2 = f(x) at good odd primes <= p_max.");
    m.def("kronecker", &stlab::kronecker_symbol, py::arg("a"), py::arg("p"),
          "Kronecker symbol (a|p) for an odd prime p.");
    m.def("frobenius_class", &frobenius_class_py, py::arg("p"), py::arg("discs"),
          "Index of Frobenius at p in the multiquadratic group defined by discs.");
}
