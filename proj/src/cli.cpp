#include "gelfand/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "gelfand/io.hpp"
#include "gelfand/lambert.hpp"
#include "gelfand/spectral.hpp"

namespace gelfand {

namespace {

struct CommonArgs {
  std::string graph_file;
  std::string builtin;
  std::string f_spec;
  double lambda = 0.0;
  double from = 0.0, to = 0.0;
  int points = 50;
  double tol = 1e-6;
  double solve_tol = 1e-12;
  std::string out_path;
  bool parallel = false;
  bool use_newton = false;
  bool truncate = false;
  std::string init_spec;
  double start_lambda = 0.01;
  double step = 0.05;
  int max_points = 1500;
  int direction = 1;
  double ref_lambda = -1.0;
  std::string demo_name;
};

struct Problem {
  DirichletDomain domain;
  Nonlinearity f;
};

Problem resolve_problem(const CommonArgs& a) {
  if (!a.builtin.empty()) {
    BuiltinExample ex = make_builtin(a.builtin);
    Nonlinearity f = a.f_spec.empty() ? ex.f : parse_nonlinearity(a.f_spec);
    return {build_domain(ex.graph, ex.omega), std::move(f)};
  }
  if (a.graph_file.empty())
    throw CLI::ValidationError("either --graph or --builtin is required");
  GraphFile gf = parse_graph_file(a.graph_file);
  if (gf.omega.empty())
    throw std::invalid_argument(a.graph_file + ": no omega directive in graph file");
  Nonlinearity f =
      a.f_spec.empty() ? Nonlinearity::exponential() : parse_nonlinearity(a.f_spec);
  return {build_domain(gf.graph, gf.omega), std::move(f)};
}

Vector parse_init(const std::string& spec, std::size_t n) {
  if (spec.empty()) return Vector(n, 0.0);
  Vector vals;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (vals.size() == 1) return Vector(n, vals[0]);
  if (vals.size() != n)
    throw std::invalid_argument("--init needs 1 value or one per interior vertex");
  return vals;
}

void write_rows(const std::vector<CsvRow>& rows, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    emit_csv(rows, out);
  else
    emit_csv(rows, out_path);
}

std::vector<CsvRow> branch_rows(const DirichletDomain& d,
                                const std::vector<std::pair<std::string, Branch>>& branches) {
  std::vector<CsvRow> rows;
  CsvRow header = {"branch", "arc", "lambda", "norm_inf", "mu1", "stable"};
  for (const auto& label : d.omega_labels()) header.push_back("u_" + label);
  rows.push_back(header);
  for (const auto& r : assemble_diagram(branches)) {
    CsvRow row = {r.branch,
                  format_double(r.arc),
                  format_double(r.lambda),
                  format_double(r.norm_inf),
                  format_double(r.mu1),
                  r.stable ? "1" : "0"};
    for (double v : r.values) row.push_back(format_double(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_line(const Solution& s) {
  std::ostringstream os;
  os << "{\"lambda\": " << format_double(s.lambda) << ", \"residual\": " << format_double(s.residual)
     << ", \"mu1\": " << format_double(s.mu1) << ", \"stable\": " << (s.stable ? "true" : "false")
     << ", \"minimal\": " << (s.minimal ? "true" : "false") << "}";
  return os.str();
}

int cmd_eig(const CommonArgs& a, std::ostream& out) {
  Problem p = resolve_problem(a);
  const EigenPair pair = dirichlet_eigenpair(p.domain);
  std::vector<CsvRow> rows = {{"quantity", "value"},
                              {"lambda_m", format_double(pair.value)},
                              {"alpha", format_double(pair.alpha)},
                              {"M", format_double(pair.max)}};
  const auto labels = p.domain.omega_labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    rows.push_back({"phi_" + labels[i], format_double(pair.vector[i])});
  write_rows(rows, a.out_path, out);
  return 0;
}

int cmd_solve(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  Problem p = resolve_problem(a);
  SolveReport rep;
  if (a.use_newton || !p.f.admissible()) {
    Nonlinearity f = a.truncate ? p.f.truncated(0.0, 1.0) : p.f;
    Vector init = parse_init(a.init_spec, p.domain.interior_size());
    rep = newton_solve(p.domain, f, a.lambda, init, a.solve_tol, 200);
  } else {
    SolverOptions opt;
    opt.tol = a.solve_tol;
    rep = minimal_solve(p.domain, p.f, a.lambda, opt);
  }
  if (!rep.converged()) {
    err << (rep.message.empty() ? "solve failed" : rep.message) << "\n";
    return 3;
  }
  stability_mu1(p.domain, p.f, rep.solution);
  std::vector<CsvRow> rows = {{"vertex", "value"}};
  const auto labels = p.domain.omega_labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    rows.push_back({labels[i], format_double(rep.solution.values[i])});
  write_rows(rows, a.out_path, out);
  out << summary_line(rep.solution) << "\n";
  return 0;
}

int cmd_lambda_star(const CommonArgs& a, std::ostream& out) {
  Problem p = resolve_problem(a);
  const LambdaStarResult ls = lambda_star_bisect(p.domain, p.f, a.tol);
  std::vector<CsvRow> rows = {{"quantity", "value"},
                              {"lambda_star", format_double(ls.lambda_star)},
                              {"bracket_lo", format_double(ls.bracket_lo)},
                              {"bracket_hi", format_double(ls.bracket_hi)},
                              {"fold_refined", ls.fold_refined ? "1" : "0"}};
  if (ls.extremal) {
    const auto labels = p.domain.omega_labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
      rows.push_back({"u_star_" + labels[i], format_double(ls.extremal->values[i])});
  } else {
    rows.push_back({"extremal", "absent"});
  }
  write_rows(rows, a.out_path, out);
  return 0;
}

int cmd_sweep(const CommonArgs& a, std::ostream& out) {
  Problem p = resolve_problem(a);
  if (a.points < 2) throw CLI::ValidationError("--points must be at least 2");
  Vector grid(a.points);
  for (int i = 0; i < a.points; ++i)
    grid[i] = a.from + (a.to - a.from) * i / static_cast<double>(a.points - 1);
  Branch b = sweep_minimal(p.domain, p.f, grid, /*warm_start=*/!a.parallel, a.parallel);
  write_rows(branch_rows(p.domain, {{"minimal", b}}), a.out_path, out);
  return 0;
}

int cmd_continue(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  Problem p = resolve_problem(a);
  SolveReport rep = minimal_solve(p.domain, p.f, a.start_lambda);
  if (!rep.converged()) {
    err << "continue: no minimal solution at start lambda (" << rep.message << ")\n";
    return 3;
  }
  ContinuationOptions opt;
  opt.step = a.step;
  opt.max_points = a.max_points;
  Branch b = continue_branch(p.domain, p.f, make_branch_point(p.domain, p.f, rep.solution),
                             a.direction, opt);
  for (const auto& fr : detect_fold(p.domain, p.f, b))
    err << "fold at lambda=" << format_double(fr.lambda) << " norm=" << format_double(inf_norm(fr.values))
        << " mu1=" << format_double(fr.mu1) << (fr.refined ? " (refined)" : "") << "\n";
  if (!b.diagnostic.empty()) err << b.diagnostic << "\n";
  write_rows(branch_rows(p.domain, {{"continued", b}}), a.out_path, out);
  return 0;
}

int cmd_diagram(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  Problem p = resolve_problem(a);
  const LambdaStarResult ls = lambda_star_bisect(p.domain, p.f, 1e-7);
  if (!std::isfinite(ls.lambda_star)) {
    err << "diagram: lambda_star is infinite; use sweep over a finite range instead\n";
    return 3;
  }
  const double lambda0 = std::min(0.01, 0.05 * ls.lambda_star);
  SolveReport base = minimal_solve(p.domain, p.f, lambda0);
  if (!base.converged()) {
    err << "diagram: no minimal solution at lambda = " << lambda0 << "\n";
    return 3;
  }
  ContinuationOptions opt;
  opt.step = a.step;
  opt.max_points = a.max_points;
  Branch main = continue_branch(p.domain, p.f, make_branch_point(p.domain, p.f, base.solution),
                                +1, opt);

  std::vector<std::pair<std::string, Branch>> branches;
  if (!main.folds.empty()) {
    const std::size_t cut = main.folds.front();
    Branch lower, upper;
    lower.label = BranchLabel::Minimal;
    upper.label = BranchLabel::Upper;
    lower.points.assign(main.points.begin(), main.points.begin() + cut + 1);
    upper.points.assign(main.points.begin() + cut, main.points.end());
    branches.emplace_back("minimal", std::move(lower));
    branches.emplace_back("upper", std::move(upper));
  } else {
    main.label = BranchLabel::Minimal;
    branches.emplace_back("minimal", std::move(main));
  }

  // extra branches through solutions off the main curve
  const double ref = a.ref_lambda > 0.0 ? a.ref_lambda : 0.25 * ls.lambda_star;
  std::vector<Solution> extras;
  try {
    extras = find_solutions(p.domain, p.f, ref);
  } catch (const std::invalid_argument&) {
    // no envelope (not strictly convex): the main curve is the diagram
  }
  if (!extras.empty()) {
    std::vector<Vector> known;
    if (SolveReport m = minimal_solve(p.domain, p.f, ref); m.converged())
      known.push_back(m.solution.values);
    for (const auto& [lbl, br] : branches) {
      (void)lbl;
      for (std::size_t i = 1; i < br.points.size(); ++i) {
        const auto& p0 = br.points[i - 1];
        const auto& p1 = br.points[i];
        if ((p0.lambda - ref) * (p1.lambda - ref) <= 0.0 && std::abs(p1.lambda - p0.lambda) > 0) {
          const double w = (ref - p0.lambda) / (p1.lambda - p0.lambda);
          Vector guess(p0.values.size());
          for (std::size_t c = 0; c < guess.size(); ++c)
            guess[c] = (1 - w) * p0.values[c] + w * p1.values[c];
          if (SolveReport r = newton_solve(p.domain, p.f, ref, guess, 1e-11, 100); r.converged())
            known.push_back(r.solution.values);
        }
      }
    }
    int counter = 0;
    for (const auto& s : extras) {
      bool fresh = true;
      for (const auto& k : known)
        if (inf_norm_diff(k, s.values) <= 1e-6) fresh = false;
      if (!fresh) continue;
      BranchPoint start = make_branch_point(p.domain, p.f, s);
      Branch fwd = continue_branch(p.domain, p.f, start, +1, opt);
      Branch bwd = continue_branch(p.domain, p.f, start, -1, opt);
      Branch merged;
      merged.points.assign(bwd.points.rbegin(), bwd.points.rend());
      merged.points.insert(merged.points.end(), fwd.points.begin() + 1, fwd.points.end());
      double arc = 0.0;
      for (std::size_t i = 0; i < merged.points.size(); ++i) {
        if (i) {
          double d2 = std::pow(merged.points[i].lambda - merged.points[i - 1].lambda, 2);
          for (std::size_t c = 0; c < merged.points[i].values.size(); ++c)
            d2 += std::pow(merged.points[i].values[c] - merged.points[i - 1].values[c], 2);
          arc += std::sqrt(d2);
        }
        merged.points[i].arc = arc;
      }
      branches.emplace_back("other-" + std::to_string(++counter), std::move(merged));
    }
  }
  write_rows(branch_rows(p.domain, branches), a.out_path, out);
  return 0;
}

int cmd_stability(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  Problem p = resolve_problem(a);
  SolveReport rep;
  if (a.use_newton || a.truncate || !p.f.admissible()) {
    Nonlinearity f = a.truncate ? p.f.truncated(0.0, 1.0) : p.f;
    Vector init = a.init_spec.empty() && a.truncate
                      ? Vector(p.domain.interior_size(), 1.0)
                      : parse_init(a.init_spec, p.domain.interior_size());
    rep = newton_solve(p.domain, f, a.lambda, init, 1e-12, 200);
  } else {
    rep = minimal_solve(p.domain, p.f, a.lambda);
  }
  if (!rep.converged()) {
    err << "stability: " << rep.message << "\n";
    return 3;
  }
  stability_mu1(p.domain, p.f, rep.solution);
  std::vector<CsvRow> rows = {{"quantity", "value"},
                              {"lambda", format_double(a.lambda)},
                              {"norm_inf", format_double(rep.solution.norm_inf())},
                              {"mu1", format_double(rep.solution.mu1)},
                              {"stable", rep.solution.stable ? "1" : "0"}};
  write_rows(rows, a.out_path, out);
  return 0;
}

int cmd_verify(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  Problem p = resolve_problem(a);
  SolveReport rep;
  if (a.use_newton) {
    Vector init = parse_init(a.init_spec, p.domain.interior_size());
    rep = newton_solve(p.domain, p.f, a.lambda, init, a.solve_tol, 200);
  } else {
    rep = minimal_solve(p.domain, p.f, a.lambda);
  }
  if (!rep.converged()) {
    err << "verify: " << rep.message << "\n";
    return 3;
  }
  const VerifyReport vr = verify_solution(p.domain, p.f, rep.solution);
  std::vector<CsvRow> rows = {{"check", "result"},
                              {"residual", format_double(vr.residual)},
                              {"nonnegative", vr.nonnegative ? "pass" : "fail"},
                              {"envelope", !vr.envelope_checked  ? "skipped"
                                           : vr.envelope_ok      ? "pass"
                                                                 : "fail"},
                              {"stability_form", vr.stability_consistent ? "pass" : "fail"},
                              {"mu1", format_double(vr.mu1)},
                              {"verdict", vr.ok() ? "pass" : "fail"}};
  write_rows(rows, a.out_path, out);
  for (const auto& v : vr.violations) err << "violation: " << v << "\n";
  return vr.ok() ? 0 : 3;
}

int cmd_demo(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  BuiltinEvaluator eval(make_builtin(a.demo_name));
  std::vector<CsvRow> rows = {{"quantity", "computed", "expected", "tolerance", "provenance",
                               "status"}};
  bool all_ok = true;
  for (const auto& e : eval.example().expected) {
    double computed = std::numeric_limits<double>::quiet_NaN();
    std::string status;
    try {
      computed = eval.quantity(e.quantity);
      status = std::abs(computed - e.value) <= e.tolerance ? "pass" : "fail";
    } catch (const std::exception& exn) {
      status = "fail";
      err << "demo: " << e.quantity << ": " << exn.what() << "\n";
    }
    all_ok = all_ok && status == "pass";
    rows.push_back({e.quantity, format_double(computed), format_double(e.value),
                    format_double(e.tolerance), e.provenance, status});
  }
  write_rows(rows, a.out_path, out);
  return all_ok ? 0 : 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gelfand-type problems on finite weighted graphs"};
  app.require_subcommand(1);
  CommonArgs a;

  auto add_common = [&a](CLI::App* cmd) {
    cmd->add_option("--graph", a.graph_file, "graph description file");
    cmd->add_option("--builtin", a.builtin, "builtin example name (see `gelfand list`)");
    cmd->add_option("--f", a.f_spec, "nonlinearity spec (exp, power:P, affine, allen-cahn, "
                                     "poly:c0,c1,..., piecewise:FILE, log1p)");
    cmd->add_option("--out", a.out_path, "write CSV here instead of stdout");
    cmd->add_option("--solve-tol", a.solve_tol, "iteration stop tolerance");
  };

  CLI::App* eig = app.add_subcommand("eig", "first Dirichlet eigenpair of -Delta_m");
  add_common(eig);

  CLI::App* solve = app.add_subcommand("solve", "solve -Delta_m u = lambda f(u) at fixed lambda");
  add_common(solve);
  solve->add_option("--lambda", a.lambda, "parameter value")->required();
  solve->add_flag("--newton", a.use_newton, "damped Newton instead of the monotone iteration");
  solve->add_flag("--truncate", a.truncate, "clamp f to [0,1] (sub/supersolution search)");
  solve->add_option("--init", a.init_spec, "Newton start: one value or comma list");

  CLI::App* star = app.add_subcommand("lambda-star", "extremal parameter by bisection");
  add_common(star);
  star->add_option("--tol", a.tol, "bisection bracket width");

  CLI::App* sweep = app.add_subcommand("sweep", "minimal branch over a lambda grid");
  add_common(sweep);
  sweep->add_option("--from", a.from, "first lambda")->required();
  sweep->add_option("--to", a.to, "last lambda")->required();
  sweep->add_option("--points", a.points, "grid size");
  sweep->add_flag("--parallel", a.parallel, "solve grid points concurrently (cold starts)");

  CLI::App* cont = app.add_subcommand("continue", "pseudo-arclength continuation through folds");
  add_common(cont);
  cont->add_option("--start-lambda", a.start_lambda, "start on the minimal branch here");
  cont->add_option("--step", a.step, "max arclength step");
  cont->add_option("--max-points", a.max_points, "point budget");
  cont->add_option("--direction", a.direction, "+1 towards larger lambda, -1 towards smaller");

  CLI::App* diagram = app.add_subcommand("diagram", "bifurcation diagram data (all branches)");
  add_common(diagram);
  diagram->add_option("--step", a.step, "max arclength step");
  diagram->add_option("--max-points", a.max_points, "point budget per branch");
  diagram->add_option("--ref-lambda", a.ref_lambda,
                      "lambda at which extra solutions are searched (default lambda*/4)");

  CLI::App* stab = app.add_subcommand("stability", "mu1 and the stability verdict of a solution");
  add_common(stab);
  stab->add_option("--lambda", a.lambda, "parameter value")->required();
  stab->add_flag("--newton", a.use_newton, "solve by Newton (required for Allen-Cahn states)");
  stab->add_flag("--truncate", a.truncate, "Newton on f clamped to [0,1], started from 1");
  stab->add_option("--init", a.init_spec, "Newton start");

  CLI::App* verify = app.add_subcommand("verify", "residual/positivity/envelope/stability report");
  add_common(verify);
  verify->add_option("--lambda", a.lambda, "parameter value")->required();
  verify->add_flag("--newton", a.use_newton, "verify a Newton solution instead of the minimal one");
  verify->add_option("--init", a.init_spec, "Newton start");

  CLI::App* demo = app.add_subcommand("demo", "run a builtin and check its expected table");
  demo->add_option("name", a.demo_name, "builtin name")->required();
  demo->add_option("--out", a.out_path, "write CSV here instead of stdout");

  CLI::App* list = app.add_subcommand("list", "list builtin examples");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (list->parsed()) {
      for (const auto& ex : builtin_corpus()) out << ex.name << ": " << ex.description << "\n";
      return 0;
    }
    if (eig->parsed()) return cmd_eig(a, out);
    if (solve->parsed()) return cmd_solve(a, out, err);
    if (star->parsed()) return cmd_lambda_star(a, out);
    if (sweep->parsed()) return cmd_sweep(a, out);
    if (cont->parsed()) return cmd_continue(a, out, err);
    if (diagram->parsed()) return cmd_diagram(a, out, err);
    if (stab->parsed()) return cmd_stability(a, out, err);
    if (verify->parsed()) return cmd_verify(a, out, err);
    if (demo->parsed()) return cmd_demo(a, out, err);
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace gelfand
