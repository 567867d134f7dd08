#pragma once

#include "gelfand/domain.hpp"
#include "gelfand/linalg.hpp"

namespace gelfand {

// First Dirichlet eigenpair of -Delta_m on Omega. The eigenvector is strictly
// positive and normalized to max = 1, so bounds = (min phi, 1).
struct EigenPair {
  double value = 0.0;  // lambda_m(Omega), in (0, 1)
  Vector vector;       // phi_m on Omega
  double alpha = 0.0;  // min over Omega
  double max = 0.0;    // max over Omega (1 after normalization)
};

// Symmetrized Dirichlet operator S = D^{1/2} (I - P_Omega) D^{-1/2} with
// D = diag(nu); symmetric because nu is reversible.
Matrix symmetrized_dirichlet_matrix(const DirichletDomain& d);

// Full symmetric eigendecomposition (cyclic Jacobi), eigenvalues ascending.
EigenDecomposition full_spectrum(const Matrix& sym);

EigenPair dirichlet_eigenpair(const DirichletDomain& d);

// Moment estimates of lambda_m: entry n-1 holds 1 - (g(2n)/g(n))^(1/n) with
// g(n) = nu^T P_Omega^n 1. Powers are renormalized to avoid underflow.
Vector lambda_via_moments(const DirichletDomain& d, int n_max);

// Smallest eigenvalue of S - diag(shift); the similarity transform leaves
// diagonal shifts invariant, so this is the first eigenvalue of the
// linearized operator -Delta_m - diag(shift) on Omega.
double smallest_eigenvalue_shifted(const DirichletDomain& d, const Vector& shift);

}  // namespace gelfand
