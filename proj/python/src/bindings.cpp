#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "adcons/config.hpp"
#include "adcons/error.hpp"
#include "adcons/experiment.hpp"
#include "adcons/graph.hpp"
#include "adcons/riccati.hpp"

namespace py = pybind11;
using namespace adcons;

namespace {

py::dict run(const std::filesystem::path& config, std::optional<std::filesystem::path> out, int threads, bool force) {
  RunOptions opt;
  opt.out = std::move(out);
  opt.threads = threads;
  opt.force = force;
  opt.write_files = opt.out.has_value();
  std::ostringstream log;
  RunResult res;
  {
    py::gil_scoped_release release;
    res = run_experiment(load_config(config), opt, log);
  }
  py::dict d;
  d["exit_code"] = res.exit_code;
  d["message"] = res.message;
  d["overridden"] = res.overridden;
  d["x0"] = res.x0;
  d["blowup_paths"] = res.blowup_paths;
  d["paths"] = res.ensemble.size();
  if (res.sol) {
    d["P"] = res.sol->P;
    d["K"] = res.sol->K;
    d["Gamma"] = res.sol->Gamma;
  }
  if (res.curves) {
    d["times"] = res.curves->times;
    d["theta_ms"] = res.curves->theta_ms;
    d["max_pair_ms"] = res.curves->max_pair_ms;
  }
  if (res.rate) {
    d["delta_hat"] = res.rate->delta_hat;
    d["r_squared"] = res.rate->r_squared;
  }
  d["time_to_threshold"] = res.time_to_threshold;
  if (opt.out) d["directory"] = res.directory;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adaptive consensus for stochastic multi-agent systems";

  py::register_exception<Error>(m, "AdconsError", PyExc_RuntimeError);

  m.def(
      "solve_sare",
      [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
        SystemModel model{A, B, C};
        const auto sol = solve_sare(model);
        py::dict d;
        d["P"] = sol.P;
        d["K"] = sol.K;
        d["Gamma"] = sol.Gamma;
        d["residual"] = sol.residual;
        d["lambda_max_P"] = sol.lambda_max_P;
        d["iterations"] = sol.iterations;
        return d;
      },
      py::arg("A"), py::arg("B"), py::arg("C"));
  m.def(
      "sare_residual",
      [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C, const Eigen::MatrixXd& P) {
        return sare_residual(SystemModel{A, B, C}, P);
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("P"));

  m.def(
      "build_laplacian", [](const Eigen::MatrixXd& a) { return build_laplacian(WeightedDigraph(a)); },
      py::arg("adjacency"));
  m.def(
      "has_spanning_tree", [](const Eigen::MatrixXd& a) { return has_spanning_tree(WeightedDigraph(a)); },
      py::arg("adjacency"));
  m.def(
      "decompose",
      [](const Eigen::MatrixXd& a) {
        const auto d = decompose_leader_follower(WeightedDigraph(a));
        py::dict out;
        out["leaders"] = d.leader_indices;
        out["followers"] = d.follower_indices;
        out["L11"] = d.L11;
        out["L21"] = d.L21;
        out["L22"] = d.L22;
        out["r"] = d.r;
        out["s"] = d.s;
        return out;
      },
      py::arg("adjacency"));

  m.def(
      "load_config", [](const std::filesystem::path& p) { return to_json(load_config(p)).dump(); }, py::arg("path"));
  m.def("run", &run, py::arg("config"), py::arg("out") = py::none(), py::arg("threads") = 1,
        py::arg("force") = false);
}
