// Thin binding: JSON documents cross the boundary as strings and are parsed
// on the Python side.

#include "pwlab/finite_geometry.hpp"
#include "pwlab/pipeline.hpp"
#include "pwlab/scheme.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

std::string run(std::uint32_t q, std::optional<std::string> scheme_file, std::vector<std::string> stages,
                unsigned threads, bool sample, std::uint64_t seed, std::size_t per_item, std::uint32_t q_bound)
{
    pwlab::RunConfig c;
    c.q = q;
    if (scheme_file)
        c.scheme_file = *scheme_file;
    c.stages = {stages.begin(), stages.end()};
    c.threads = threads;
    c.sample = sample;
    c.seed = seed;
    c.per_item = per_item;
    c.q_bound = q_bound;
    py::gil_scoped_release release;
    return pwlab::run_pipeline(c).to_json().dump();
}

std::string triple(long long r, std::array<int, 3> t, bool krein, bool symmetry, bool zero_sums)
{
    pwlab::TripleRequest req;
    req.triple = t;
    req.krein = krein;
    req.symmetry = symmetry;
    req.zero_sums = zero_sums;
    return pwlab::solve_triple_request(r, req).dump();
}

std::string scheme_json(std::uint32_t q)
{
    auto model = pwlab::QuadrangleModel::build(q);
    return pwlab::build_pw_scheme(model).to_json().dump();
}

std::string parameters_json(std::uint32_t q)
{
    auto model = pwlab::QuadrangleModel::build(q);
    return pwlab::intersection_numbers(pwlab::build_pw_scheme(model)).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_pwlab, m)
{
    m.doc() = "four-class scheme lab for Q(5,q) with the subquadrangle Q(4,q)";

    py::register_exception<pwlab::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<pwlab::CharacterizationFailure>(m, "CharacterizationFailure", PyExc_RuntimeError);

    m.def("is_prime", &pwlab::is_prime, py::arg("n"));
    m.def("pipeline_stages", &pwlab::pipeline_stages);
    m.def("run_pipeline_json", &run, py::arg("q") = 3, py::arg("scheme_file") = py::none(),
          py::arg("stages") = std::vector<std::string>{}, py::arg("threads") = 1, py::arg("sample") = false,
          py::arg("seed") = 1, py::arg("per_item") = 32, py::arg("q_bound") = pwlab::kDefaultQBound);
    m.def("solve_triple_json", &triple, py::arg("r"), py::arg("triple") = std::array<int, 3>{3, 3, 3},
          py::arg("krein") = false, py::arg("symmetry") = false, py::arg("zero_sums") = false);
    m.def("scheme_json", &scheme_json, py::arg("q"));
    m.def("parameters_json", &parameters_json, py::arg("q"));
}
