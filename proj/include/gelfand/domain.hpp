#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gelfand/graph.hpp"
#include "gelfand/linalg.hpp"

namespace gelfand {

// A Dirichlet domain: an m-connected vertex set Omega together with its
// m-boundary, the sub-stochastic transition block on Omega, the leak mass
// towards the boundary and the degree measure restricted to Omega.
//
// Vector layouts: "interior" vectors follow omega(); "closure" vectors are
// interior values followed by boundary values in boundary() order.
//
// Immutable after construction; safe to share across threads.
class DirichletDomain {
 public:
  const WeightedGraph& graph() const { return *graph_; }
  const std::vector<std::size_t>& omega() const { return omega_; }
  const std::vector<std::size_t>& boundary() const { return boundary_; }

  std::size_t interior_size() const { return omega_.size(); }
  std::size_t closure_size() const { return omega_.size() + boundary_.size(); }

  const Matrix& p_omega() const { return p_omega_; }
  const Matrix& p_boundary() const { return p_boundary_; }
  const Vector& leak() const { return leak_; }
  const Vector& nu() const { return nu_; }

  // I - P_Omega and its (shared, precomputed) LU factorization
  Matrix dirichlet_matrix() const;
  const LuDecomposition& dirichlet_lu() const { return *lu_; }

  std::vector<std::string> omega_labels() const;
  std::vector<std::string> boundary_labels() const;

  friend DirichletDomain build_domain(const WeightedGraph& g, std::vector<std::size_t> omega);

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  std::vector<std::size_t> omega_;
  std::vector<std::size_t> boundary_;
  Matrix p_omega_;
  Matrix p_boundary_;
  Vector leak_;
  Vector nu_;
  std::shared_ptr<const LuDecomposition> lu_;
};

DirichletDomain build_domain(const WeightedGraph& g, std::vector<std::size_t> omega);
DirichletDomain build_domain(const WeightedGraph& g, const std::vector<std::string>& omega_labels);

inline DirichletDomain build_domain(const WeightedGraph& g,
                                    std::initializer_list<std::string> omega_labels) {
  return build_domain(g, std::vector<std::string>(omega_labels));
}

// u(y) - u(x)
double nonlocal_gradient(const Vector& u, std::size_t x, std::size_t y);

// m-Laplacian on the interior: (Delta u)(x) = sum_y P~_xy u(y) - u(x), where
// u is given on the closure (interior then boundary).
Vector apply_laplacian(const DirichletDomain& d, const Vector& u_closure);

// m-interaction L_m(A,B) = sum_{x in A} nu(x) m_x(B); a and b hold graph
// vertex indices inside the closure.
double interaction(const DirichletDomain& d, const std::vector<std::size_t>& a,
                   const std::vector<std::size_t>& b);

// connectivity of the positive-weight graph induced on Omega
bool is_m_connected(const DirichletDomain& d);

// Discretization of a convolution-kernel random walk on a 1-D interval.
// The grid covers Omega_m = (lo - radius, hi + radius) with midpoint cells of
// width grid_step; weights are J(x_i - x_j) * grid_step. Grid points outside
// (lo, hi) become the Dirichlet boundary.
struct KernelSpace {
  DirichletDomain domain;
  Vector omega_points;     // coordinates of interior grid points
  Vector boundary_points;  // coordinates of boundary grid points
  double grid_step;
};

KernelSpace build_kernel_space(const std::function<double(double)>& kernel, double support_radius,
                               double grid_step, double lo, double hi);

}  // namespace gelfand
