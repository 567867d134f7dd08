#include "gelfand/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gelfand {

Matrix symmetrized_dirichlet_matrix(const DirichletDomain& d) {
  const std::size_t n = d.interior_size();
  Matrix s(n, n);
  const Vector& nu = d.nu();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sym = d.p_omega()(i, j) * std::sqrt(nu[i] / nu[j]);
      s(i, j) = (i == j ? 1.0 : 0.0) - sym;
    }
  }
  // clean roundoff so the Jacobi precondition holds exactly
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = s(j, i) = v;
    }
  return s;
}

EigenDecomposition full_spectrum(const Matrix& sym) {
  if (max_asymmetry(sym) > 1e-10)
    throw std::invalid_argument("full_spectrum: matrix is not symmetric");
  return jacobi_eigensolver(sym, 1e-13);
}

EigenPair dirichlet_eigenpair(const DirichletDomain& d) {
  const std::size_t n = d.interior_size();
  const EigenDecomposition eig = full_spectrum(symmetrized_dirichlet_matrix(d));

  EigenPair out;
  out.value = eig.values[0];
  out.vector.resize(n);

  // map back through D^{-1/2} and fix the sign at the largest entry
  std::size_t imax = 0;
  double vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.vector[i] = eig.vectors(i, 0) / std::sqrt(d.nu()[i]);
    if (std::abs(out.vector[i]) > std::abs(vmax)) {
      vmax = out.vector[i];
      imax = i;
    }
  }
  if (vmax < 0.0)
    for (auto& v : out.vector) v = -v;

  const double scale = std::abs(out.vector[imax]);
  for (auto& v : out.vector) v /= scale;

  out.alpha = out.vector[0];
  out.max = out.vector[0];
  for (double v : out.vector) {
    out.alpha = std::min(out.alpha, v);
    out.max = std::max(out.max, v);
  }
  if (!(out.value > 0.0 && out.value < 1.0))
    throw std::runtime_error("dirichlet_eigenpair: lambda_m outside (0,1); domain is ill-posed");
  if (!(out.alpha > 0.0))
    throw std::runtime_error("dirichlet_eigenpair: ground state is not strictly positive");
  return out;
}

Vector lambda_via_moments(const DirichletDomain& d, int n_max) {
  if (n_max < 2) throw std::invalid_argument("lambda_via_moments: n_max must be >= 2");
  const std::size_t n = d.interior_size();
  const Vector& nu = d.nu();

  // log g(k) for k = 0..2*n_max, via renormalized powers of P_Omega
  std::vector<double> log_g(2 * n_max + 1);
  Vector v(n, 1.0);
  double log_scale = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += nu[i];
  log_g[0] = std::log(mass);
  for (int k = 1; k <= 2 * n_max; ++k) {
    v = mat_vec(d.p_omega(), v);
    const double m = inf_norm(v);
    if (m <= 0.0) throw std::runtime_error("lambda_via_moments: transition power vanished");
    for (auto& x : v) x /= m;
    log_scale += std::log(m);
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g += nu[i] * v[i];
    log_g[k] = std::log(g) + log_scale;
  }

  Vector est(n_max);
  for (int k = 1; k <= n_max; ++k)
    est[k - 1] = 1.0 - std::exp((log_g[2 * k] - log_g[k]) / k);
  return est;
}

double smallest_eigenvalue_shifted(const DirichletDomain& d, const Vector& shift) {
  const std::size_t n = d.interior_size();
  if (shift.size() != n)
    throw std::invalid_argument("smallest_eigenvalue_shifted: dimension mismatch");
  for (double s : shift)
    if (!std::isfinite(s))
      throw std::invalid_argument("smallest_eigenvalue_shifted: shift must be finite");
  Matrix s = symmetrized_dirichlet_matrix(d);
  for (std::size_t i = 0; i < n; ++i) s(i, i) -= shift[i];
  return jacobi_eigensolver(s, 1e-13).values.front();
}

}  // namespace gelfand
