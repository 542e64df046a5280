#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "tbent/errors.hpp"
#include "tbent/io.hpp"

namespace py = pybind11;
using namespace tbent;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::string config_from(const py::dict& params) {
  std::string text;
  for (const auto& [k, v] : params) text += py::str(k).cast<std::string>() + " = " + py::str(v).cast<std::string>() + "\n";
  return text;
}

SquareMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ConfigError("expected a square 2-d array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  SquareMatrix m(n);
  std::copy(a.data(), a.data() + n * n, m.data().begin());
  return m;
}

Array dense(const SquareMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.size());
  Array out({n, n});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::tuple spectrum_arrays(const Spectrum& s) {
  const auto n = static_cast<py::ssize_t>(s.size());
  Array energies(n);
  std::copy(s.energies().begin(), s.energies().end(), energies.mutable_data());
  // rows are eigenvectors
  Array states({n, n});
  std::copy(s.states().begin(), s.states().end(), states.mutable_data());
  return py::make_tuple(energies, states);
}

std::vector<double> as_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

ModelParams model_from(const py::dict& params) {
  py::dict full;
  full["command"] = "spectrum";
  for (const auto& [k, v] : params) full[k] = v;
  return parse_config(config_from(full)).model;
}

}  // namespace

PYBIND11_MODULE(_tbent, m) {
  m.doc() = "Mode-entanglement concurrence of one-dimensional tight-binding chains";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.attr("RNG_VERSION") = std::string(kRngVersion);

  m.def(
      "hamiltonian",
      [](const py::dict& params, std::uint64_t realization) {
        return dense(build_hamiltonian(model_from(params), realization).to_dense());
      },
      py::arg("params"), py::arg("realization") = 0,
      "Dense Hamiltonian of one realization. `params` holds config keys (family, N, ...).");

  m.def(
      "potential",
      [](const py::dict& params, std::uint64_t realization) {
        return build_potential(model_from(params), realization).values;
      },
      py::arg("params"), py::arg("realization") = 0);

  m.def(
      "diagonalize",
      [](const Array& h, const std::string& method) {
        if (method != "ql" && method != "inverse_iteration")
          throw ConfigError("method: expected 'inverse_iteration' or 'ql'");
        const auto em = method == "ql" ? EigenMethod::QlAccumulate : EigenMethod::InverseIteration;
        const auto matrix = to_matrix(h);
        Spectrum s;
        {
          py::gil_scoped_release release;
          s = diagonalize(matrix, {em, false});
        }
        return spectrum_arrays(s);
      },
      py::arg("h"), py::arg("method") = "inverse_iteration",
      "Energies (ascending) and eigenvectors (one per row) of a real symmetric matrix.");

  m.def("state_concurrence", [](const Array& psi) { return state_concurrence(as_vector(psi)); }, py::arg("psi"));
  m.def(
      "pairwise_concurrence",
      [](const Array& psi, std::size_t i, std::size_t j) { return pairwise_concurrence(as_vector(psi), i, j); },
      py::arg("psi"), py::arg("i"), py::arg("j"));
  m.def("participation_ratio", [](const Array& psi) { return participation_ratio(as_vector(psi)); }, py::arg("psi"));

  m.def(
      "detect_transition",
      [](const Array& grid, const Array& values) {
        const auto r = detect_transition(as_vector(grid), as_vector(values));
        py::dict out;
        auto put = [&](const char* name, const std::optional<TransitionEstimate>& e) {
          if (!e) {
            out[name] = py::none();
            return;
          }
          py::dict d;
          d["location"] = e->location;
          d["method"] = std::string(to_string(e->method));
          d["uncertainty"] = e->uncertainty;
          d["strength"] = e->strength;
          out[name] = d;
        };
        put("headline", r.headline);
        put("max_slope", r.max_slope);
        put("max_curvature", r.max_curvature);
        put("jump", r.jump);
        return out;
      },
      py::arg("grid"), py::arg("values"));

  m.def(
      "resolve_config", [](const std::string& text) { return config_text(parse_config(text)); }, py::arg("text"),
      "Validated, fully resolved config text.");

  m.def(
      "run",
      [](const std::string& text) {
        const auto config = parse_config(text);
        RunOutput out;
        {
          py::gil_scoped_release release;
          out = execute(config);
        }
        return render(config, out);
      },
      py::arg("text"), "Runs a config and returns the output file contents (CSV or JSON, per `format`).");
}
