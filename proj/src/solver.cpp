#include "gelfand/solver.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "gelfand/spectral.hpp"

namespace gelfand {

Vector linear_dirichlet_solve(const DirichletDomain& d, const Vector& rhs) {
  if (rhs.size() != d.interior_size())
    throw std::invalid_argument("linear_dirichlet_solve: dimension mismatch");
  for (double r : rhs)
    if (!std::isfinite(r)) throw std::invalid_argument("linear_dirichlet_solve: rhs not finite");
  if (d.dirichlet_lu().singular())
    throw std::runtime_error(
        "linear_dirichlet_solve: singular operator (domain has zero total leak)");
  return d.dirichlet_lu().solve(rhs);
}

double default_divergence_cap(const Nonlinearity& f, double lambda) {
  constexpr double kLambdaFloor = 1e-6;
  if (auto env = try_envelope(f)) {
    const double lam = std::min(std::max(lambda, kLambdaFloor), env->lambda_cap());
    return 2.0 * env->g2_inv(lam);
  }
  return 1e8;
}

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

}  // namespace

SolveReport minimal_solve(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                          const SolverOptions& opt) {
  if (!f.admissible())
    throw std::invalid_argument("minimal_solve: nonlinearity does not satisfy hypotheses (H)");
  if (lambda < 0.0) throw std::invalid_argument("minimal_solve: lambda must be >= 0");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("minimal_solve: tol must be positive");

  const std::size_t n = d.interior_size();
  SolveReport rep;
  if (lambda == 0.0) {
    rep.status = SolveStatus::Converged;
    rep.solution = Solution{0.0, Vector(n, 0.0), 0.0, 0.0, false, true};
    return rep;
  }

  const double cap = opt.cap > 0.0 ? opt.cap : default_divergence_cap(f, lambda);
  Vector u = opt.init.empty() ? Vector(n, 0.0) : opt.init;
  if (u.size() != n) throw std::invalid_argument("minimal_solve: init has wrong dimension");

  Vector rhs(n);
  for (int it = 1; it <= opt.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] = lambda * f.value(std::max(u[i], 0.0));
      if (!std::isfinite(rhs[i]))
        throw std::runtime_error("minimal_solve: nonlinearity evaluation overflowed");
    }
    Vector next = linear_dirichlet_solve(d, rhs);
    rep.iterations = it;

    double step = 0.0, umax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      step = std::max(step, std::abs(next[i] - u[i]));
      umax = std::max(umax, next[i]);
      if (!std::isfinite(next[i]))
        throw std::runtime_error("minimal_solve: iterate is not finite");
    }
    u = std::move(next);
    if (umax > cap) {
      rep.status = SolveStatus::Diverged;
      rep.message = "diverged: lambda exceeds lambda_star";
      return rep;
    }
    if (step <= opt.tol) {
      const double res = residual_inf(d, f, lambda, u);
      if (res <= 10.0 * opt.tol) {
        rep.status = SolveStatus::Converged;
        rep.solution = Solution{lambda, std::move(u), res, 0.0, false, true};
        return rep;
      }
    }
  }
  rep.status = SolveStatus::Diverged;
  rep.message = "diverged: no convergence within the iteration cap";
  return rep;
}

SolveReport newton_solve(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                         const Vector& init, double tol, int max_iter) {
  const std::size_t n = d.interior_size();
  if (init.size() != n) throw std::invalid_argument("newton_solve: init has wrong dimension");
  for (double x : init)
    if (!std::isfinite(x)) throw std::invalid_argument("newton_solve: init not finite");

  SolveReport rep;
  Vector u = init;

  auto eval_residual = [&](const Vector& v, Vector& out) -> double {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = v[i];
      for (std::size_t j = 0; j < n; ++j) row -= d.p_omega()(i, j) * v[j];
      row -= lambda * f.value_extended(v[i]);
      out[i] = row;
      if (!std::isfinite(row)) return std::numeric_limits<double>::infinity();
      norm = std::max(norm, std::abs(row));
    }
    return norm;
  };

  Vector fval(n), trial(n), ftrial(n);
  double fnorm = eval_residual(u, fval);

  for (int it = 1; it <= max_iter; ++it) {
    rep.iterations = it;
    if (fnorm <= tol) break;

    Matrix jac = d.dirichlet_matrix();
    for (std::size_t i = 0; i < n; ++i)
      jac(i, i) -= lambda * f.derivative_extended(u[i]);
    LuDecomposition lu(std::move(jac));
    if (lu.singular()) {
      rep.status = SolveStatus::NoConvergence;
      rep.fold_suspected = true;
      rep.message = "newton: singular Jacobian (fold point)";
      return rep;
    }
    Vector neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -fval[i];
    const Vector delta = lu.solve(neg);

    // step halving on residual increase
    double step = 1.0;
    bool accepted = false;
    for (int damp = 0; damp < 30; ++damp) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * delta[i];
      const double tnorm = eval_residual(trial, ftrial);
      if (tnorm < fnorm || tnorm <= tol) {
        u = trial;
        fval = ftrial;
        fnorm = tnorm;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.status = SolveStatus::NoConvergence;
      rep.message = "newton: damping failed to reduce the residual";
      return rep;
    }
  }

  if (fnorm > tol) {
    rep.status = SolveStatus::NoConvergence;
    rep.message = "newton: residual above tolerance after max_iter";
    return rep;
  }
  if (f.admissible()) {
    for (double x : u) {
      if (x < -1e-8) {
        rep.status = SolveStatus::NoConvergence;
        rep.message = "newton: converged to a root outside the nonnegative cone";
        return rep;
      }
    }
  }
  rep.status = SolveStatus::Converged;
  rep.solution = Solution{lambda, std::move(u), fnorm, 0.0, false, false};
  return rep;
}

double stability_mu1(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                     const Vector& u) {
  const std::size_t n = d.interior_size();
  if (u.size() != n) throw std::invalid_argument("stability_mu1: dimension mismatch");
  Vector shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = lambda * f.derivative_extended(u[i]);
  return smallest_eigenvalue_shifted(d, shift);
}

double stability_mu1(const DirichletDomain& d, const Nonlinearity& f, Solution& sol) {
  const double mu1 = stability_mu1(d, f, sol.lambda, sol.values);
  sol.mu1 = mu1;
  sol.stable = mu1 >= -kStabilityTol;
  return mu1;
}

namespace {

// 1/2 sum_{x,y in Omega_m} w_xy (u(y)-u(x)) (v(y)-v(x)), closure vectors
double gradient_form(const DirichletDomain& d, const Vector& u, const Vector& v) {
  const auto& g = d.graph();
  std::vector<std::size_t> closure = d.omega();
  closure.insert(closure.end(), d.boundary().begin(), d.boundary().end());
  const std::size_t m = closure.size();
  double acc = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double w = g.weight(closure[a], closure[b]);
      if (w == 0.0) continue;
      acc += w * (u[b] - u[a]) * (v[b] - v[a]);
    }
  // unordered pairs counted once = half the symmetric double sum; loops drop out
  return acc;
}

}  // namespace

double energy(const DirichletDomain& d, const Nonlinearity& f, double lambda,
              const Vector& u_closure) {
  if (u_closure.size() != d.closure_size())
    throw std::invalid_argument("energy: expected a closure vector");
  const double dirichlet_part = 0.5 * gradient_form(d, u_closure, u_closure);
  double potential = 0.0;
  for (std::size_t i = 0; i < d.interior_size(); ++i)
    potential += d.nu()[i] * f.primitive(u_closure[i]);
  return dirichlet_part - lambda * potential;
}

double stability_quadratic_form(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                                const Vector& u, const Vector& v) {
  const std::size_t n = d.interior_size();
  if (u.size() != n || v.size() != n)
    throw std::invalid_argument("stability_quadratic_form: interior vectors expected");
  Vector vc(d.closure_size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) vc[i] = v[i];
  double q = gradient_form(d, vc, vc);
  for (std::size_t i = 0; i < n; ++i)
    q -= d.nu()[i] * lambda * f.derivative_extended(u[i]) * v[i] * v[i];
  return q;
}

VerifyReport verify_solution(const DirichletDomain& d, const Nonlinearity& f,
                             const Solution& sol) {
  const std::size_t n = d.interior_size();
  VerifyReport rep;
  rep.residual = residual_inf(d, f, sol.lambda, sol.values);
  if (rep.residual > 1e-8)
    rep.violations.push_back("residual " + std::to_string(rep.residual) + " above 1e-8");

  rep.nonnegative = true;
  for (double x : sol.values)
    if (x < -1e-12) rep.nonnegative = false;
  if (!rep.nonnegative) rep.violations.push_back("solution has negative components");

  if (auto env = try_envelope(f); env && sol.lambda > 0.0 &&
                                  sol.lambda <= env->lambda_cap() * (1.0 + 1e-12)) {
    rep.envelope_checked = true;
    const auto [lo, hi] = envelope_bounds(*env, std::min(sol.lambda, env->lambda_cap()));
    for (double x : sol.values)
      if (x < lo - 1e-8 || x > hi + 1e-8) rep.envelope_ok = false;
    if (!rep.envelope_ok) rep.violations.push_back("solution escapes the envelope bracket");
  }

  rep.mu1 = stability_mu1(d, f, sol.lambda, sol.values);

  // Q_u(v) >= mu1 ||v||_nu^2 on 100 deterministic random directions
  rep.stability_consistent = true;
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_unit = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0 * 2.0 - 1.0;
  };
  Vector v(n);
  for (int trial = 0; trial < 100; ++trial) {
    double norm_nu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = next_unit();
      norm_nu += d.nu()[i] * v[i] * v[i];
    }
    const double scale = 1.0 / std::sqrt(norm_nu);
    for (auto& x : v) x *= scale;
    const double q = stability_quadratic_form(d, f, sol.lambda, sol.values, v);
    if (q < rep.mu1 - 1e-9) {
      rep.stability_consistent = false;
      rep.violations.push_back("quadratic form drops below mu1 on a test direction");
      break;
    }
  }
  return rep;
}

}  // namespace gelfand
