#include "gelfand/branch.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gelfand/spectral.hpp"

namespace gelfand {

namespace {

double residual_inf(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                    const Vector& u) {
  const std::size_t n = d.interior_size();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = u[i];
    for (std::size_t j = 0; j < n; ++j) row -= d.p_omega()(i, j) * u[j];
    row -= lambda * f.value_extended(u[i]);
    r = std::max(r, std::abs(row));
  }
  return r;
}

Matrix jacobian(const DirichletDomain& d, const Nonlinearity& f, double lambda, const Vector& u) {
  Matrix jac = d.dirichlet_matrix();
  for (std::size_t i = 0; i < u.size(); ++i) jac(i, i) -= lambda * f.derivative_extended(u[i]);
  return jac;
}

}  // namespace

BranchPoint make_branch_point(const DirichletDomain& d, const Nonlinearity& f,
                              const Solution& sol) {
  BranchPoint p;
  p.lambda = sol.lambda;
  p.values = sol.values;
  p.norm_inf = sol.norm_inf();
  p.mu1 = stability_mu1(d, f, sol.lambda, sol.values);
  p.arc = 0.0;
  return p;
}

std::optional<FoldPoint> refine_fold(const DirichletDomain& d, const Nonlinearity& f,
                                     const Vector& u0, double lambda0) {
  const std::size_t n = d.interior_size();
  if (u0.size() != n) throw std::invalid_argument("refine_fold: dimension mismatch");

  // null-direction seed from the symmetrized linearization
  Vector shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = lambda0 * f.derivative_extended(u0[i]);
  Matrix sym = symmetrized_dirichlet_matrix(d);
  for (std::size_t i = 0; i < n; ++i) sym(i, i) -= shift[i];
  const EigenDecomposition eig = jacobi_eigensolver(sym, 1e-13);
  Vector phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = eig.vectors(i, 0) / std::sqrt(d.nu()[i]);

  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(phi[i]) > std::abs(phi[k])) k = i;
  const double pivot = phi[k];
  for (auto& x : phi) x /= pivot;

  Vector u = u0;
  double lambda = lambda0;

  for (int it = 0; it < 60; ++it) {
    const Matrix jac = jacobian(d, f, lambda, u);
    Vector res(2 * n + 1, 0.0);
    double rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r1 = u[i] - lambda * f.value_extended(u[i]);
      double r2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        r1 -= d.p_omega()(i, j) * u[j];
        r2 += jac(i, j) * phi[j];
      }
      res[i] = r1;
      res[n + i] = r2;
      rnorm = std::max({rnorm, std::abs(r1), std::abs(r2)});
    }
    res[2 * n] = phi[k] - 1.0;
    rnorm = std::max(rnorm, std::abs(res[2 * n]));
    if (!std::isfinite(rnorm)) return std::nullopt;
    if (rnorm <= 1e-12) {
      FoldPoint fp;
      fp.lambda = lambda;
      fp.values = std::move(u);
      fp.null_direction = std::move(phi);
      return fp;
    }

    Matrix m(2 * n + 1, 2 * n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = jac(i, j);
        m(n + i, n + j) = jac(i, j);
      }
      m(i, 2 * n) = -f.value_extended(u[i]);
      m(n + i, i) = -lambda * f.second_derivative_extended(u[i]) * phi[i];
      m(n + i, 2 * n) = -f.derivative_extended(u[i]) * phi[i];
    }
    m(2 * n, n + k) = 1.0;

    LuDecomposition lu(std::move(m));
    if (lu.singular()) return std::nullopt;
    for (auto& r : res) r = -r;
    const Vector delta = lu.solve(res);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += delta[i];
      phi[i] += delta[n + i];
    }
    lambda += delta[2 * n];
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return std::nullopt;
  }
  return std::nullopt;
}

LambdaStarResult lambda_star_bisect(const DirichletDomain& d, const Nonlinearity& f,
                                    double tol_lambda) {
  if (!f.admissible())
    throw std::invalid_argument("lambda_star_bisect: nonlinearity does not satisfy (H)");
  if (!(tol_lambda > 0.0)) throw std::invalid_argument("lambda_star_bisect: tol must be positive");

  const double lambda_m = dirichlet_eigenpair(d).value;
  const double supg = f.sup_g();
  LambdaStarResult out;
  if (!std::isfinite(supg) || supg > 1e6) {
    // sublinear growth: solutions exist for every lambda
    out.lambda_star = std::numeric_limits<double>::infinity();
    out.bracket_lo = out.bracket_hi = out.lambda_star;
    return out;
  }

  SolverOptions opt;
  auto solvable = [&](double lambda, int iter_scale) {
    SolverOptions o = opt;
    o.max_iter *= iter_scale;
    return minimal_solve(d, f, lambda, o);
  };

  double lo = 0.0;
  double hi = lambda_m * supg;
  SolveReport top = solvable(hi, 1);
  if (top.converged()) {
    // the theoretical upper bound is attained and numerically reachable
    out.lambda_star = hi;
    out.bracket_lo = out.bracket_hi = hi;
    out.extremal = top.solution;
    return out;
  }

  std::optional<Solution> last_good;
  const int total_levels = static_cast<int>(std::ceil(std::log2(std::max(hi / tol_lambda, 2.0))));
  int level = 0;
  while (hi - lo > tol_lambda) {
    ++level;
    const int scale = (total_levels - level < 3) ? 10 : 1;  // near-lambda* slowdown
    const double mid = 0.5 * (lo + hi);
    SolveReport rep = solvable(mid, scale);
    if (rep.converged()) {
      lo = mid;
      last_good = std::move(rep.solution);
    } else {
      hi = mid;
    }
  }

  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.lambda_star = 0.5 * (lo + hi);

  // extremal solution: try the estimate itself, then the solvable endpoint
  SolveReport at_mid = solvable(out.lambda_star, 10);
  if (at_mid.converged())
    out.extremal = at_mid.solution;
  else if (last_good)
    out.extremal = last_good;

  if (out.extremal) {
    if (auto fold = refine_fold(d, f, out.extremal->values, out.extremal->lambda)) {
      if (std::abs(fold->lambda - out.lambda_star) <= std::max(10.0 * tol_lambda, 1e-9)) {
        out.lambda_star = fold->lambda;
        Solution star;
        star.lambda = fold->lambda;
        star.values = fold->values;
        star.residual = residual_inf(d, f, fold->lambda, fold->values);
        star.minimal = true;
        out.extremal = std::move(star);
        out.fold_refined = true;
      }
    }
    // when sup g is only approached at infinity the minimal family blows up
    // towards lambda* and there is no extremal solution (affine case)
    if (!out.fold_refined && !f.sup_g_attained()) out.extremal.reset();
    if (out.extremal) stability_mu1(d, f, *out.extremal);
  }
  return out;
}

Branch sweep_minimal(const DirichletDomain& d, const Nonlinearity& f, const Vector& lambda_grid,
                     bool warm_start, bool parallel) {
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("sweep_minimal: lambda grid must be ascending");

  Branch branch;
  branch.label = BranchLabel::Minimal;
  branch.points.reserve(lambda_grid.size());

  auto solve_at = [&](double lambda, const Vector& init) {
    SolverOptions o;
    o.init = init;
    SolveReport rep = minimal_solve(d, f, lambda, o);
    if (!rep.converged()) {
      std::ostringstream os;
      os << "sweep_minimal: divergence at lambda = " << lambda << " (" << rep.message << ")";
      throw std::runtime_error(os.str());
    }
    return rep.solution;
  };

  std::vector<Solution> sols(lambda_grid.size());
  if (parallel) {
    std::vector<std::future<Solution>> futs;
    futs.reserve(lambda_grid.size());
    for (double lambda : lambda_grid)
      futs.push_back(std::async(std::launch::async, [&, lambda] { return solve_at(lambda, {}); }));
    for (std::size_t i = 0; i < futs.size(); ++i) sols[i] = futs[i].get();
  } else {
    Vector init;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      sols[i] = solve_at(lambda_grid[i], warm_start ? init : Vector{});
      init = sols[i].values;
    }
  }

  double arc = 0.0;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    BranchPoint p = make_branch_point(d, f, sols[i]);
    if (i > 0) {
      double step2 = 0.0;
      for (std::size_t c = 0; c < p.values.size(); ++c) {
        const double dv = p.values[c] - sols[i - 1].values[c];
        step2 += dv * dv;
      }
      const double dl = lambda_grid[i] - lambda_grid[i - 1];
      arc += std::sqrt(step2 + dl * dl);
    }
    p.arc = arc;
    branch.points.push_back(std::move(p));
  }
  return branch;
}

Branch continue_branch(const DirichletDomain& d, const Nonlinearity& f, const BranchPoint& start,
                       int direction, const ContinuationOptions& opt) {
  const std::size_t n = d.interior_size();
  if (start.values.size() != n) throw std::invalid_argument("continue_branch: bad start point");
  if (residual_inf(d, f, start.lambda, start.values) > 1e-8)
    throw std::invalid_argument("continue_branch: start point is not on the solution set");

  Branch branch;
  branch.points.push_back(start);
  branch.points.front().arc = 0.0;

  // initial tangent: J du = f(u), dlambda = 1, oriented by `direction`
  Vector u = start.values;
  double lambda = start.lambda;
  Vector tan_u(n, 0.0);
  double tan_l = 0.0;
  {
    LuDecomposition lu(jacobian(d, f, lambda, u));
    if (lu.singular())
      throw std::invalid_argument("continue_branch: start lies on a fold (singular Jacobian)");
    Vector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = f.value_extended(u[i]);
    tan_u = lu.solve(rhs);
    tan_l = 1.0;
    double norm = tan_l * tan_l;
    for (double x : tan_u) norm += x * x;
    norm = std::sqrt(norm) * (direction >= 0 ? 1.0 : -1.0);
    for (auto& x : tan_u) x /= norm;
    tan_l /= norm;
  }

  double h = opt.step;
  double arc = 0.0;
  while (static_cast<int>(branch.points.size()) < opt.max_points) {
    // predictor
    Vector up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = u[i] + h * tan_u[i];
    double lp = lambda + h * tan_l;

    // corrector: F(u,lambda) = 0 plus the arclength plane
    bool corrected = false;
    int used_iters = 0;
    for (int it = 0; it < opt.corrector_max_iter; ++it) {
      Vector res(n + 1, 0.0);
      double rnorm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double row = up[i] - lp * f.value_extended(up[i]);
        for (std::size_t j = 0; j < n; ++j) row -= d.p_omega()(i, j) * up[j];
        res[i] = row;
        rnorm = std::max(rnorm, std::abs(row));
      }
      double plane = (lp - lambda) * tan_l - h;
      for (std::size_t i = 0; i < n; ++i) plane += (up[i] - u[i]) * tan_u[i];
      res[n] = plane;
      rnorm = std::max(rnorm, std::abs(plane));
      used_iters = it;
      if (rnorm <= opt.corrector_tol && it > 0) {
        corrected = true;
        break;
      }

      Matrix m(n + 1, n + 1);
      const Matrix jac = jacobian(d, f, lp, up);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = jac(i, j);
        m(i, n) = -f.value_extended(up[i]);
        m(n, i) = tan_u[i];
      }
      m(n, n) = tan_l;
      LuDecomposition lu(std::move(m));
      if (lu.singular()) break;
      for (auto& r : res) r = -r;
      const Vector delta = lu.solve(res);
      bool finite = std::isfinite(delta[n]);
      for (std::size_t i = 0; i < n && finite; ++i) finite = std::isfinite(delta[i]);
      if (!finite) break;
      for (std::size_t i = 0; i < n; ++i) up[i] += delta[i];
      lp += delta[n];
    }

    if (!corrected || residual_inf(d, f, lp, up) > 1e-9) {
      h *= 0.5;
      if (h < opt.min_step) {
        branch.diagnostic = "continuation stalled: corrector kept failing at the minimum step";
        break;
      }
      continue;
    }

    // new tangent through the bordered system
    {
      Matrix m(n + 1, n + 1);
      const Matrix jac = jacobian(d, f, lp, up);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = jac(i, j);
        m(i, n) = -f.value_extended(up[i]);
        m(n, i) = tan_u[i];
      }
      m(n, n) = tan_l;
      LuDecomposition lu(std::move(m));
      if (lu.singular()) {
        branch.diagnostic = "bordered system singular beyond fold handling";
        break;
      }
      Vector rhs(n + 1, 0.0);
      rhs[n] = 1.0;
      Vector t = lu.solve(rhs);
      double norm = 0.0;
      for (double x : t) norm += x * x;
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < n; ++i) tan_u[i] = t[i] / norm;
      tan_l = t[n] / norm;
    }

    double step2 = (lp - lambda) * (lp - lambda);
    for (std::size_t i = 0; i < n; ++i) step2 += (up[i] - u[i]) * (up[i] - u[i]);
    arc += std::sqrt(step2);
    u = up;
    lambda = lp;

    BranchPoint p;
    p.lambda = lambda;
    p.values = u;
    p.norm_inf = inf_norm(u);
    p.mu1 = stability_mu1(d, f, lambda, u);
    p.arc = arc;
    branch.points.push_back(std::move(p));

    if (lambda <= 0.0) {
      branch.diagnostic = "stopped: lambda reached 0";
      break;
    }
    if (inf_norm(u) > opt.norm_cap) {
      branch.diagnostic = "stopped: norm cap reached";
      break;
    }
    if (used_iters <= 4) h = std::min(h * 1.3, opt.step);
  }

  for (const auto& fr : detect_fold(d, f, branch)) branch.folds.push_back(fr.index);
  return branch;
}

std::vector<FoldReport> detect_fold(const DirichletDomain& d, const Nonlinearity& f,
                                    const Branch& b) {
  std::vector<FoldReport> out;
  const auto& pts = b.points;
  if (pts.size() < 3) return out;

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.lambda));
  const double eps = 1e-12 * std::max(1.0, scale);

  auto sign_of = [eps](double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); };

  int prev_sign = 0;
  std::size_t rise_end = 0;  // last index before the step direction possibly flips
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const int s = sign_of(pts[i].lambda - pts[i - 1].lambda);
    if (s == 0) continue;
    if (prev_sign > 0 && s < 0) {
      // lambda was rising and now falls: the maximum sits in (rise_end..i-1]
      std::size_t k = rise_end;
      for (std::size_t j = rise_end; j < i; ++j)
        if (pts[j].lambda >= pts[k].lambda) k = j;
      FoldReport fr;
      fr.index = k;
      fr.lambda = pts[k].lambda;
      fr.values = pts[k].values;
      fr.mu1 = pts[k].mu1;
      if (auto polished = refine_fold(d, f, pts[k].values, pts[k].lambda)) {
        fr.lambda = polished->lambda;
        fr.values = polished->values;
        fr.mu1 = stability_mu1(d, f, polished->lambda, polished->values);
        fr.refined = true;
      }
      out.push_back(std::move(fr));
    }
    if (s != 0) {
      if (s > 0) rise_end = i - 1;
      prev_sign = s;
    }
  }
  return out;
}

std::vector<Solution> find_solutions(const DirichletDomain& d, const Nonlinearity& f,
                                     double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("find_solutions: lambda must be positive");
  auto env = try_envelope(f);
  if (!env)
    throw std::invalid_argument(
        "find_solutions: lattice seeding needs the envelope of a strictly convex f");
  if (lambda > env->lambda_cap() * (1.0 + 1e-12)) return {};

  const auto [g1, g2] = envelope_bounds(*env, std::min(lambda, env->lambda_cap()));
  const std::size_t n = d.interior_size();

  // 5 seed values per vertex while the lattice stays within the cap,
  // 3 beyond that, subsampled past 729 candidates
  std::vector<double> levels;
  if (std::pow(5.0, static_cast<double>(n)) <= 729.0)
    levels = {g1, 0.75 * g1 + 0.25 * g2, 0.5 * (g1 + g2), 0.25 * g1 + 0.75 * g2, g2};
  else
    levels = {g1, 0.5 * (g1 + g2), g2};

  double total_d = std::pow(static_cast<double>(levels.size()), static_cast<double>(n));
  const std::size_t total =
      total_d > 1e9 ? static_cast<std::size_t>(1e9) : static_cast<std::size_t>(total_d);
  const std::size_t stride = total > 729 ? (total + 728) / 729 : 1;

  std::vector<Solution> found;
  Vector seed(n);
  for (std::size_t idx = 0; idx < total; idx += stride) {
    std::size_t rem = idx;
    for (std::size_t i = 0; i < n; ++i) {
      seed[i] = levels[rem % levels.size()];
      rem /= levels.size();
    }
    SolveReport rep = newton_solve(d, f, lambda, seed, 1e-11, 200);
    if (!rep.converged()) continue;
    if (residual_inf(d, f, lambda, rep.solution.values) > 1e-9) continue;
    bool fresh = true;
    for (const auto& s : found)
      if (inf_norm_diff(s.values, rep.solution.values) <= 1e-6) {
        fresh = false;
        break;
      }
    if (!fresh) continue;
    stability_mu1(d, f, rep.solution);
    found.push_back(std::move(rep.solution));
  }

  std::sort(found.begin(), found.end(),
            [](const Solution& a, const Solution& b) { return a.values < b.values; });
  return found;
}

std::vector<DiagramRow> assemble_diagram(
    const std::vector<std::pair<std::string, Branch>>& branches) {
  std::vector<DiagramRow> rows;
  for (const auto& [label, branch] : branches) {
    for (const auto& p : branch.points) {
      DiagramRow r;
      r.branch = label;
      r.arc = p.arc;
      r.lambda = p.lambda;
      r.norm_inf = p.norm_inf;
      r.mu1 = p.mu1;
      r.stable = p.mu1 >= -kStabilityTol;
      r.values = p.values;
      rows.push_back(std::move(r));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const DiagramRow& a, const DiagramRow& b) {
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.arc < b.arc;
  });
  return rows;
}

}  // namespace gelfand
