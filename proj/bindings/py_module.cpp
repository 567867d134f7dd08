#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gelfand/branch.hpp"
#include "gelfand/cli.hpp"
#include "gelfand/corpus.hpp"
#include "gelfand/io.hpp"
#include "gelfand/lambert.hpp"
#include "gelfand/spectral.hpp"

namespace py = pybind11;
using namespace gelfand;

namespace {

WeightedGraph graph_from_pairs(const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
  return build_graph(es);
}

py::dict solution_dict(const Solution& s) {
  py::dict d;
  d["lambda"] = s.lambda;
  d["values"] = s.values;
  d["residual"] = s.residual;
  d["mu1"] = s.mu1;
  d["stable"] = s.stable;
  d["minimal"] = s.minimal;
  return d;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["converged"] = r.converged();
  d["iterations"] = r.iterations;
  d["message"] = r.message;
  d["fold_suspected"] = r.fold_suspected;
  if (r.converged()) d["solution"] = solution_dict(r.solution);
  return d;
}

py::list branch_list(const Branch& b) {
  py::list out;
  for (const auto& p : b.points) {
    py::dict d;
    d["lambda"] = p.lambda;
    d["values"] = p.values;
    d["norm_inf"] = p.norm_inf;
    d["mu1"] = p.mu1;
    d["arc"] = p.arc;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gelfand-type problems on finite weighted graphs";

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def("__len__", &WeightedGraph::size)
      .def("degree", &WeightedGraph::degree)
      .def("weight", &WeightedGraph::weight)
      .def("labels", &WeightedGraph::labels);

  py::class_<DirichletDomain>(m, "DirichletDomain")
      .def_property_readonly("omega_labels", &DirichletDomain::omega_labels)
      .def_property_readonly("boundary_labels", &DirichletDomain::boundary_labels)
      .def_property_readonly("leak", &DirichletDomain::leak)
      .def_property_readonly("nu", &DirichletDomain::nu)
      .def_property_readonly("interior_size", &DirichletDomain::interior_size)
      .def("p_omega",
           [](const DirichletDomain& d) {
             std::vector<std::vector<double>> rows(d.interior_size());
             for (std::size_t i = 0; i < d.interior_size(); ++i) {
               rows[i].resize(d.interior_size());
               for (std::size_t j = 0; j < d.interior_size(); ++j) rows[i][j] = d.p_omega()(i, j);
             }
             return rows;
           });

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def("__call__", [](const Nonlinearity& f, double s) { return f.value(s); })
      .def("derivative", [](const Nonlinearity& f, double s) { return f.derivative(s); })
      .def("primitive", &Nonlinearity::primitive)
      .def_property_readonly("admissible", &Nonlinearity::admissible)
      .def_property_readonly("superlinear", &Nonlinearity::superlinear)
      .def_property_readonly("spec", &Nonlinearity::spec_string)
      .def("truncated", &Nonlinearity::truncated);

  m.def("build_graph", &graph_from_pairs, py::arg("edges"),
        "Build a weighted graph from (label, label, weight) triples.");
  m.def("parse_graph_file", [](const std::string& path) {
    GraphFile gf = parse_graph_file(path);
    return py::make_tuple(gf.graph, gf.omega);
  });
  m.def("build_domain",
        [](const WeightedGraph& g, const std::vector<std::string>& omega) {
          return build_domain(g, omega);
        },
        py::arg("graph"), py::arg("omega"));
  m.def("build_kernel_space",
        [](const std::function<double(double)>& kernel, double radius, double h, double lo,
           double hi) {
          KernelSpace ks = build_kernel_space(kernel, radius, h, lo, hi);
          return py::make_tuple(ks.domain, ks.omega_points, ks.boundary_points);
        },
        py::arg("kernel"), py::arg("support_radius"), py::arg("grid_step"), py::arg("lo"),
        py::arg("hi"));

  m.def("nonlinearity", &parse_nonlinearity, py::arg("spec"),
        "exp | power:P | affine | allen-cahn | poly:c0,c1,... | piecewise:FILE | log1p");

  m.def("lambert_w0", &lambert_w0);
  m.def("lambert_wm1", &lambert_wm1);

  m.def("dirichlet_eigenpair", [](const DirichletDomain& d) {
    const EigenPair p = dirichlet_eigenpair(d);
    py::dict out;
    out["value"] = p.value;
    out["vector"] = p.vector;
    out["alpha"] = p.alpha;
    out["max"] = p.max;
    return out;
  });
  m.def("lambda_via_moments", &lambda_via_moments, py::arg("domain"), py::arg("n_max"));
  m.def("apply_laplacian", &apply_laplacian, py::arg("domain"), py::arg("u_closure"));

  m.def("linear_dirichlet_solve", &linear_dirichlet_solve);
  m.def("minimal_solve",
        [](const DirichletDomain& d, const Nonlinearity& f, double lambda, double tol,
           int max_iter) {
          SolverOptions opt;
          opt.tol = tol;
          opt.max_iter = max_iter;
          return report_dict(minimal_solve(d, f, lambda, opt));
        },
        py::arg("domain"), py::arg("f"), py::arg("lambda"), py::arg("tol") = 1e-12,
        py::arg("max_iter") = 100000);
  m.def("newton_solve",
        [](const DirichletDomain& d, const Nonlinearity& f, double lambda, const Vector& init,
           double tol) { return report_dict(newton_solve(d, f, lambda, init, tol)); },
        py::arg("domain"), py::arg("f"), py::arg("lambda"), py::arg("init"),
        py::arg("tol") = 1e-12);
  m.def("stability_mu1",
        [](const DirichletDomain& d, const Nonlinearity& f, double lambda, const Vector& u) {
          return stability_mu1(d, f, lambda, u);
        });
  m.def("energy", &energy);

  m.def("lambda_star",
        [](const DirichletDomain& d, const Nonlinearity& f, double tol) {
          const LambdaStarResult ls = lambda_star_bisect(d, f, tol);
          py::dict out;
          out["lambda_star"] = ls.lambda_star;
          out["bracket"] = py::make_tuple(ls.bracket_lo, ls.bracket_hi);
          out["fold_refined"] = ls.fold_refined;
          if (ls.extremal) out["extremal"] = solution_dict(*ls.extremal);
          return out;
        },
        py::arg("domain"), py::arg("f"), py::arg("tol") = 1e-7);
  m.def("sweep_minimal",
        [](const DirichletDomain& d, const Nonlinearity& f, const Vector& grid, bool warm,
           bool parallel) { return branch_list(sweep_minimal(d, f, grid, warm, parallel)); },
        py::arg("domain"), py::arg("f"), py::arg("grid"), py::arg("warm_start") = true,
        py::arg("parallel") = false);
  m.def("continue_branch",
        [](const DirichletDomain& d, const Nonlinearity& f, double start_lambda, int direction,
           double step, int max_points) {
          SolveReport rep = minimal_solve(d, f, start_lambda);
          if (!rep.converged())
            throw std::runtime_error("continue_branch: " + rep.message);
          ContinuationOptions opt;
          opt.step = step;
          opt.max_points = max_points;
          Branch b =
              continue_branch(d, f, make_branch_point(d, f, rep.solution), direction, opt);
          py::dict out;
          out["points"] = branch_list(b);
          out["folds"] = b.folds;
          out["diagnostic"] = b.diagnostic;
          return out;
        },
        py::arg("domain"), py::arg("f"), py::arg("start_lambda"), py::arg("direction") = 1,
        py::arg("step") = 0.05, py::arg("max_points") = 1500);
  m.def("find_solutions",
        [](const DirichletDomain& d, const Nonlinearity& f, double lambda) {
          py::list out;
          for (const auto& s : find_solutions(d, f, lambda)) out.append(solution_dict(s));
          return out;
        });

  m.def("builtin_names", &builtin_names);
  m.def("builtin",
        [](const std::string& name) {
          BuiltinExample ex = make_builtin(name);
          py::dict out;
          out["name"] = ex.name;
          out["description"] = ex.description;
          out["graph"] = ex.graph;
          out["omega"] = ex.omega;
          out["f"] = ex.f;
          return out;
        },
        py::arg("name"));
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
