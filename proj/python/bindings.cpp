/*
 Copyright 2026 The tdsplit Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
// Python bindings for the model builders, solvers and checks.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "tdsplit/diagnostics.hpp"
#include "tdsplit/experiment.hpp"
#include "tdsplit/pde.hpp"
#include "tdsplit/solver.hpp"

namespace py = pybind11;
using namespace tdsplit;

namespace {

py::dict solution_dict(const Solution& s) {
  py::dict d;
  d["x"] = s.trajectories.x;
  d["lambda"] = s.trajectories.lambda;
  d["u"] = s.control;
  d["cost"] = s.cost;
  return d;
}

py::dict check_dict(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["residual"] = r.residual;
  d["tolerance"] = r.tolerance;
  d["context"] = r.context;
  d["seed"] = r.seed;
  return d;
}

py::dict history_dict(const std::vector<IterationRecord>& history) {
  std::vector<int> iter;
  std::vector<double> dz, cost, ex, el, eu, df;
  for (const auto& r : history) {
    iter.push_back(r.iteration);
    dz.push_back(r.delta_z);
    cost.push_back(r.cost);
    if (r.errors) {
      ex.push_back(r.errors->state);
      el.push_back(r.errors->adjoint);
      eu.push_back(r.errors->control);
    }
    if (r.delta_f) df.push_back(*r.delta_f);
  }
  py::dict d;
  d["iter"] = iter;
  d["delta_z"] = dz;
  d["cost"] = cost;
  if (!eu.empty()) {
    d["err_state"] = ex;
    d["err_adjoint"] = el;
    d["err_control"] = eu;
  }
  if (!df.empty()) d["delta_f"] = df;
  return d;
}

SubdomainMask mask_or_full(const GridSpec& g, const std::optional<std::vector<bool>>& m) {
  return m ? *m : full_mask(g);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-domain splitting for linear-quadratic optimal control";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<PartitionError>(m, "PartitionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<LtiModel>(m, "LtiModel")
      .def_readonly("A", &LtiModel::A)
      .def_readonly("B", &LtiModel::B)
      .def_readonly("C", &LtiModel::C)
      .def_readonly("alpha", &LtiModel::alpha)
      .def_readonly("x0", &LtiModel::x0)
      .def_property_readonly("state_dim", &LtiModel::state_dim)
      .def_property_readonly("control_dim", &LtiModel::control_dim)
      .def_property_readonly("output_dim", &LtiModel::output_dim)
      .def("__repr__", [](const LtiModel& s) {
        std::ostringstream o;
        o << "LtiModel(n=" << s.state_dim() << ", m=" << s.control_dim() << ", p=" << s.output_dim()
          << ", alpha=" << s.alpha << ")";
        return o.str();
      });

  py::class_<TimePartition>(m, "TimePartition")
      .def_readonly("horizon", &TimePartition::horizon)
      .def_readonly("total_steps", &TimePartition::total_steps)
      .def_readonly("intervals", &TimePartition::intervals)
      .def_readonly("tau", &TimePartition::tau)
      .def_readonly("steps", &TimePartition::steps)
      .def_readonly("boundaries", &TimePartition::boundaries);

  m.def("make_model",
        [](SparseMatrix A, SparseMatrix B, SparseMatrix C, double alpha, Vector x0) {
          return make_model(std::move(A), std::move(B), std::move(C), alpha, std::move(x0));
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("alpha"), py::arg("x0"));

  m.def("make_partition", &make_partition, py::arg("T"), py::arg("L"), py::arg("K"));

  m.def("heat_split_masks",
        [](const std::vector<int>& cells) { return heat_split_masks(GridSpec::make(cells)); },
        py::arg("cells"));

  m.def("build_heat",
        [](const std::vector<int>& cells, double alpha, const std::optional<std::vector<bool>>& control,
           const std::optional<std::vector<bool>>& observation, const std::string& scaling) {
          if (scaling != "volume" && scaling != "unit") throw ModelError("scaling must be volume or unit");
          const GridSpec g = GridSpec::make(cells);
          return build_heat(g, mask_or_full(g, control), mask_or_full(g, observation), alpha,
                            scaling == "unit" ? HeatScaling::Unit : HeatScaling::CellVolume);
        },
        py::arg("cells"), py::arg("alpha"), py::arg("control_mask") = py::none(),
        py::arg("observation_mask") = py::none(), py::arg("scaling") = "volume",
        "Neumann heat model; masks default to the full domain.");

  m.def("build_wave",
        [](const std::vector<int>& cells, double rho, int setting, double alpha) {
          if (setting != 1 && setting != 2) throw ModelError("setting must be 1 or 2");
          return build_wave(GridSpec::make(cells), rho, static_cast<WaveSetting>(setting), alpha);
        },
        py::arg("cells"), py::arg("rho") = 0.0, py::arg("setting") = 1, py::arg("alpha") = 0.1);

  m.def("validate_model", [](const LtiModel& model, int samples, std::uint64_t seed) {
        const auto f = validate_model(model, samples, seed);
        py::dict d;
        d["dimensions_consistent"] = f.dimensions_consistent;
        d["dimension_issues"] = f.dimension_issues;
        d["symmetry"] = to_string(f.symmetry);
        d["symmetric_residual"] = f.symmetric_residual;
        d["skew_residual"] = f.skew_residual;
        d["symmetric_part"] = to_string(f.symmetric_part);
        d["min_rayleigh"] = f.min_rayleigh;
        d["max_rayleigh"] = f.max_rayleigh;
        return d;
      },
      py::arg("model"), py::arg("samples") = 32, py::arg("seed") = kDefaultSeed);

  m.def("direct_solve", [](const LtiModel& model, double T, int L) {
        DirectSolution d;
        {
          py::gil_scoped_release release;
          d = direct_solve(model, T, L);
        }
        py::dict out = solution_dict(d.solution);
        out["seconds"] = d.seconds;
        return out;
      },
      py::arg("model"), py::arg("T"), py::arg("L"));

  m.def("pr_solve",
        [](const LtiModel& model, double T, int L, int K, double mu, double tol, int maxit,
           unsigned threads, bool baseline) {
          SolverParams p;
          p.mu = mu;
          p.tol = tol;
          p.maxit = maxit;
          p.threads = threads;
          p.compute_baseline = baseline;
          SolveReport r;
          {
            py::gil_scoped_release release;
            r = pr_solve(model, make_partition(T, L, K), p);
          }
          py::dict out = solution_dict(r.solution);
          out["converged"] = r.converged;
          out["iterations"] = r.iterations;
          out["iterations_to_1pct"] = r.iterations_to_1pct;
          out["block_factorizations"] = r.block_factorizations;
          out["factorization_seconds"] = r.factorization_seconds;
          out["mean_iteration_seconds"] = r.mean_iteration_seconds;
          out["history"] = history_dict(r.history);
          if (r.baseline) out["baseline"] = solution_dict(r.baseline->solution);
          return out;
        },
        py::arg("model"), py::arg("T"), py::arg("L"), py::arg("K"), py::arg("mu") = 1.0,
        py::arg("tol") = 1e-8, py::arg("maxit") = 10000, py::arg("threads") = 1,
        py::arg("baseline") = true);

  m.def("dissipation_check",
        [](const LtiModel& model, double T, int L, int K, int samples, std::uint64_t seed) {
          return check_dict(dissipation_check(assemble_system(model, make_partition(T, L, K)), samples, seed));
        },
        py::arg("model"), py::arg("T"), py::arg("L"), py::arg("K"), py::arg("samples") = 100,
        py::arg("seed") = kDefaultSeed);

  m.def("skew_check",
        [](double T, int L, int K, Index n) {
          return check_dict(skew_check(assemble_coupling(make_partition(T, L, K), n)));
        },
        py::arg("T"), py::arg("L"), py::arg("K"), py::arg("n"));

  m.def("run_config",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output) {
          RunConfig c = load_config(config);
          if (output) c.output_dir = *output;
          std::ostringstream log;
          int code = 0;
          {
            py::gil_scoped_release release;
            code = run(c, log);
          }
          return py::make_tuple(code, log.str());
        },
        py::arg("config"), py::arg("output") = py::none(),
        "Runs a JSON configuration; returns (exit code, log text).");
}
