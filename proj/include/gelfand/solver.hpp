#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gelfand/domain.hpp"
#include "gelfand/envelope.hpp"
#include "gelfand/nonlinearity.hpp"

namespace gelfand {

// mu1 >= -kStabilityTol counts as stable, so the fold (mu1 = 0) is stable
inline constexpr double kStabilityTol = 1e-9;

struct Solution {
  double lambda = 0.0;
  Vector values;          // on Omega
  double residual = 0.0;  // inf-norm of (I - P_Omega) u - lambda f(u)
  double mu1 = 0.0;       // smallest eigenvalue of the linearized operator
  bool stable = false;
  bool minimal = false;   // provenance: produced by the monotone iteration

  double norm_inf() const { return inf_norm(values); }
};

enum class SolveStatus {
  Converged,
  Diverged,        // evidence that lambda exceeds lambda*
  NoConvergence,   // Newton stalled or left the admissible cone
};

struct SolveReport {
  SolveStatus status = SolveStatus::NoConvergence;
  Solution solution;  // valid when status == Converged
  int iterations = 0;
  bool fold_suspected = false;  // singular Jacobian encountered
  std::string message;

  bool converged() const { return status == SolveStatus::Converged; }
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  double cap = 0.0;  // 0 = derive from the envelope (or 1e8 without one)
  Vector init;       // monotone iteration start; must be a subsolution
};

// Solves (I - P_Omega) u = rhs through the domain's cached LU factorization.
Vector linear_dirichlet_solve(const DirichletDomain& d, const Vector& rhs);

// Iterate above which the monotone iteration certifies nonexistence at this
// lambda (twice the upper envelope branch when it exists, 1e8 otherwise).
double default_divergence_cap(const Nonlinearity& f, double lambda);

// Monotone iteration u_{n+1} = (I - P)^{-1} (lambda f(u_n)) from u = 0.
// Converges exactly when a bounded solution exists and then yields the
// minimal one.
SolveReport minimal_solve(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                          const SolverOptions& opt = {});

// Damped Newton on F(u) = (I - P_Omega) u - lambda f(u).
SolveReport newton_solve(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                         const Vector& init, double tol = 1e-12, int max_iter = 100);

// Smallest eigenvalue of the linearization -Delta_m - lambda f'(u); annotates
// sol.mu1 / sol.stable and returns mu1.
double stability_mu1(const DirichletDomain& d, const Nonlinearity& f, Solution& sol);
double stability_mu1(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                     const Vector& u);

// Energy of a closure vector (interior followed by boundary values):
// 1/4 sum_{x,y} w_xy (u(y)-u(x))^2 - lambda sum_x nu(x) F(u(x)).
double energy(const DirichletDomain& d, const Nonlinearity& f, double lambda,
              const Vector& u_closure);

// Second variation of the energy at u in direction v (both interior vectors,
// extended by zero to the boundary).
double stability_quadratic_form(const DirichletDomain& d, const Nonlinearity& f, double lambda,
                                const Vector& u, const Vector& v);

struct VerifyReport {
  double residual = 0.0;
  bool nonnegative = false;
  bool envelope_checked = false;
  bool envelope_ok = true;
  bool stability_consistent = false;
  double mu1 = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Residual, nonnegativity, envelope bracketing (strictly convex f) and the
// agreement of Q_u with mu1 on 100 deterministic random directions.
VerifyReport verify_solution(const DirichletDomain& d, const Nonlinearity& f, const Solution& sol);

}  // namespace gelfand
