/*
   Copyright 2026 The recdel Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "recdel/asymptotics.hpp"
#include "recdel/equiprob.hpp"
#include "recdel/exact.hpp"
#include "recdel/process.hpp"
#include "recdel/series.hpp"
#include "recdel/tree.hpp"

namespace py = pybind11;
using namespace recdel;

namespace {

// p arrives as text ("1/2", "0.3"); the Python layer converts Fractions and floats.
ProcessParams params_from(const std::string& p, bool exact)
{
    const Rational value = parse_rational(p);
    return exact ? ProcessParams::exact(value) : ProcessParams::floating(value);
}

template <Scalar T>
py::object cell(const T& v)
{
    if constexpr (std::is_same_v<T, double>) {
        return py::float_(v);
    } else {
        return py::str(to_string(v));
    }
}

template <Scalar T>
py::dict moment_dict(const MomentTable<T>& m)
{
    py::dict d;
    d["n"] = m.n;
    d["mean_stratum"] = cell(m.mean_stratum);
    d["second_factorial"] = cell(m.second_factorial);
    d["variance"] = cell(m.variance);
    d["harmonic"] = cell(m.harmonic);
    d["reciprocal_size"] = cell(m.reciprocal_size);
    d["harmonic_size"] = cell(m.harmonic_size);
    d["leaf_mean"] = cell(m.leaf_mean);
    d["root_degree_mean"] = cell(m.root_degree_mean);
    d["root_prob"] = cell(m.root_prob);
    return d;
}

template <Scalar T>
py::list stratum_list(std::size_t n, const ProcessParams& params)
{
    py::list out;
    for (const auto& v : stratum_recurrence<T>(n, params).probs) {
        out.append(cell(v));
    }
    return out;
}

template <Scalar T>
py::list series_list(const std::string& name, const ProcessParams& params, std::size_t order)
{
    py::list out;
    const auto s = series_gf<T>(parse_gf_name(name), params, order);
    for (const auto& v : s.coefficients()) {
        out.append(cell(v));
    }
    return out;
}

template <Scalar T>
py::dict verify_dict(const std::string& rule, const ProcessParams& params, std::size_t K, std::size_t n)
{
    const auto report = verify_rule<T>(*make_rule(rule), params, K, n, 1e-12);
    py::list uniformity;
    for (const auto& e : report.uniformity) {
        py::dict d;
        d["n"] = e.n;
        d["k"] = e.k;
        d["mass"] = cell(e.mass);
        d["max_deviation"] = cell(e.max_deviation);
        d["uniform"] = e.uniform;
        uniformity.append(d);
    }
    py::dict d;
    d["column_sum_condition"] = report.column_sum_condition;
    d["uniform"] = report.uniform;
    d["uniformity"] = uniformity;
    return d;
}

} // namespace

PYBIND11_MODULE(_recdel, m)
{
    m.doc() = "Insert/delete random recursive trees: exact laws, series, asymptotics and simulation.";

    py::register_exception<resource_error>(m, "ResourceError");
    py::register_exception<unsupported_operation>(m, "UnsupportedOperation");

    m.def("canonical_index", [](const std::vector<Label>& parents) {
        const auto ix = canonical_index(RecursiveTree(parents));
        return py::make_tuple(ix.k, ix.idx);
    }, py::arg("parents"));
    m.def("tree_from_index", [](std::size_t k, std::uint64_t idx) {
        const auto t = tree_from_index({k, idx});
        return std::vector<Label>(t.parents().begin(), t.parents().end());
    }, py::arg("k"), py::arg("idx"));
    m.def("enumerate_stratum", [](std::size_t k, std::size_t cap) {
        std::vector<std::vector<Label>> out;
        for (const auto& t : enumerate_stratum(k, cap)) {
            out.emplace_back(t.parents().begin(), t.parents().end());
        }
        return out;
    }, py::arg("k"), py::arg("cap") = kDefaultEnumerationCap);
    m.def("leaf_count", [](const std::vector<Label>& parents) { return leaf_count(RecursiveTree(parents)); });
    m.def("root_degree", [](const std::vector<Label>& parents) { return root_degree(RecursiveTree(parents)); });

    m.def("stratum_distribution", [](std::size_t n, const std::string& p, bool exact) {
        const auto params = params_from(p, exact);
        return exact ? stratum_list<Rational>(n, params) : stratum_list<double>(n, params);
    }, py::arg("n"), py::arg("p"), py::arg("exact"));

    m.def("moments", [](std::size_t n, const std::string& p, bool exact) {
        const auto params = params_from(p, exact);
        return exact ? moment_dict(moments(stratum_recurrence<Rational>(n, params)))
                     : moment_dict(moments(stratum_recurrence<double>(n, params)));
    }, py::arg("n"), py::arg("p"), py::arg("exact"));

    m.def("series", [](const std::string& name, const std::string& p, std::size_t order, bool exact) {
        const auto params = params_from(p, exact);
        return exact ? series_list<Rational>(name, params, order) : series_list<double>(name, params, order);
    }, py::arg("name"), py::arg("p"), py::arg("order"), py::arg("exact"));

    m.def("bivariate_check", [](const std::string& p, double z, double u, std::size_t order) {
        return bivariate_check(params_from(p, false), z, u, order);
    }, py::arg("p"), py::arg("z"), py::arg("u"), py::arg("order"));

    m.def("asym", [](const std::string& functional, const std::string& p, std::size_t n, bool refined) {
        const auto e = asym_estimate(parse_asym_functional(functional), params_from(p, false), n, refined);
        py::dict d;
        d["functional"] = std::string(to_string(e.functional));
        d["regime"] = std::string(to_string(e.regime));
        d["value"] = e.value;
        d["error_order"] = e.error_order;
        d["bound_only"] = e.bound_only;
        return d;
    }, py::arg("functional"), py::arg("p"), py::arg("n"), py::arg("refined") = false);

    m.def("simulate", [](const std::string& p, std::size_t n, std::size_t reps, std::uint64_t seed,
                         const std::string& rule, const std::vector<std::string>& functionals, unsigned threads) {
        MonteCarloConfig config;
        config.n = n;
        config.reps = reps;
        config.master_seed = seed;
        config.threads = threads;
        if (!functionals.empty()) {
            config.functionals.clear();
            for (const auto& f : functionals) {
                config.functionals.push_back(parse_functional(f));
            }
        }
        std::vector<FunctionalSummary> summary;
        {
            py::gil_scoped_release release;
            summary = monte_carlo(config, params_from(p, false), *make_rule(rule));
        }
        py::list out;
        for (const auto& s : summary) {
            py::dict d;
            d["functional"] = std::string(to_string(s.functional));
            d["mean"] = s.mean;
            d["variance"] = s.variance ? py::object(py::float_(*s.variance)) : py::none();
            d["std_error"] = s.std_error ? py::object(py::float_(*s.std_error)) : py::none();
            d["reps"] = s.reps;
            out.append(d);
        }
        return out;
    }, py::arg("p"), py::arg("n"), py::arg("reps"), py::arg("seed"), py::arg("rule") = "lifo",
       py::arg("functionals") = std::vector<std::string>{}, py::arg("threads") = 0u);

    m.def("verify", [](const std::string& rule, const std::string& p, std::size_t K, std::size_t n, bool exact) {
        const auto params = params_from(p, exact);
        return exact ? verify_dict<Rational>(rule, params, K, n) : verify_dict<double>(rule, params, K, n);
    }, py::arg("rule"), py::arg("p"), py::arg("K"), py::arg("n"), py::arg("exact"));
}
