#include "gelfand/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace gelfand {

Matrix DirichletDomain::dirichlet_matrix() const {
  const std::size_t n = interior_size();
  Matrix a = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) -= p_omega_(i, j);
  return a;
}

std::vector<std::string> DirichletDomain::omega_labels() const {
  std::vector<std::string> out;
  out.reserve(omega_.size());
  for (auto i : omega_) out.push_back(graph_->label(i));
  return out;
}

std::vector<std::string> DirichletDomain::boundary_labels() const {
  std::vector<std::string> out;
  out.reserve(boundary_.size());
  for (auto i : boundary_) out.push_back(graph_->label(i));
  return out;
}

namespace {

bool connected_within(const WeightedGraph& g, const std::vector<std::size_t>& omega) {
  if (omega.empty()) return false;
  std::vector<int> pos(g.size(), -1);
  for (std::size_t k = 0; k < omega.size(); ++k) pos[omega[k]] = static_cast<int>(k);

  std::vector<char> seen(omega.size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const std::size_t x = omega[k];
    for (std::size_t l = 0; l < omega.size(); ++l) {
      if (!seen[l] && g.weight(x, omega[l]) > 0.0) {
        seen[l] = 1;
        ++reached;
        queue.push_back(l);
      }
    }
  }
  return reached == omega.size();
}

}  // namespace

DirichletDomain build_domain(const WeightedGraph& g, std::vector<std::size_t> omega) {
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
  if (omega.empty()) throw std::invalid_argument("build_domain: Omega is empty");
  if (omega.size() >= g.size())
    throw std::invalid_argument("build_domain: Omega must be a strict subset of the vertex set");
  for (auto i : omega)
    if (i >= g.size()) throw std::invalid_argument("build_domain: vertex index out of range");
  if (!connected_within(g, omega))
    throw std::invalid_argument("build_domain: Omega is not m-connected");

  DirichletDomain d;
  d.graph_ = std::make_shared<WeightedGraph>(g);
  d.omega_ = omega;

  std::vector<char> in_omega(g.size(), 0);
  for (auto i : omega) in_omega[i] = 1;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (in_omega[x]) continue;
    double mass = 0.0;
    for (auto y : omega) mass += g.weight(x, y);
    if (mass > 0.0) d.boundary_.push_back(x);
  }

  const std::size_t n = omega.size();
  const std::size_t nb = d.boundary_.size();
  d.p_omega_ = Matrix(n, n);
  d.p_boundary_ = Matrix(n, nb);
  d.leak_.assign(n, 0.0);
  d.nu_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = omega[i];
    d.nu_[i] = g.degree(x);
    for (std::size_t j = 0; j < n; ++j) d.p_omega_(i, j) = g.transition(x, omega[j]);
    double leak = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const double p = g.transition(x, d.boundary_[b]);
      d.p_boundary_(i, b) = p;
      leak += p;
    }
    d.leak_[i] = leak;
  }

  d.lu_ = std::make_shared<LuDecomposition>(d.dirichlet_matrix());
  return d;
}

DirichletDomain build_domain(const WeightedGraph& g, const std::vector<std::string>& omega_labels) {
  std::vector<std::size_t> omega;
  omega.reserve(omega_labels.size());
  for (const auto& label : omega_labels) {
    auto idx = g.index_of(label);
    if (!idx) throw std::invalid_argument("build_domain: unknown vertex label '" + label + "'");
    omega.push_back(*idx);
  }
  return build_domain(g, std::move(omega));
}

double nonlocal_gradient(const Vector& u, std::size_t x, std::size_t y) {
  if (x >= u.size() || y >= u.size())
    throw std::invalid_argument("nonlocal_gradient: index out of range");
  return u[y] - u[x];
}

Vector apply_laplacian(const DirichletDomain& d, const Vector& u_closure) {
  const std::size_t n = d.interior_size();
  const std::size_t nb = d.boundary().size();
  if (u_closure.size() != n + nb)
    throw std::invalid_argument("apply_laplacian: expected a closure vector");
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = -u_closure[i];
    for (std::size_t j = 0; j < n; ++j) s += d.p_omega()(i, j) * u_closure[j];
    for (std::size_t b = 0; b < nb; ++b) s += d.p_boundary()(i, b) * u_closure[n + b];
    out[i] = s;
  }
  return out;
}

double interaction(const DirichletDomain& d, const std::vector<std::size_t>& a,
                   const std::vector<std::size_t>& b) {
  const auto& g = d.graph();
  double total = 0.0;
  for (auto x : a) {
    double mass = 0.0;
    for (auto y : b) mass += g.transition(x, y);
    total += g.degree(x) * mass;
  }
  return total;
}

bool is_m_connected(const DirichletDomain& d) { return connected_within(d.graph(), d.omega()); }

KernelSpace build_kernel_space(const std::function<double(double)>& kernel, double support_radius,
                               double grid_step, double lo, double hi) {
  if (!(support_radius > 0.0)) throw std::invalid_argument("build_kernel_space: empty support");
  if (!(grid_step > 0.0)) throw std::invalid_argument("build_kernel_space: grid_step must be positive");
  if (!(hi > lo)) throw std::invalid_argument("build_kernel_space: empty interval");
  auto divides = [grid_step](double len) {
    const double q = len / grid_step;
    return std::abs(q - std::round(q)) < 1e-9 * std::max(1.0, q);
  };
  if (!divides(support_radius) || !divides(hi - lo))
    throw std::invalid_argument(
        "build_kernel_space: grid_step must divide the support radius and the interval length");

  const double grid_lo = lo - support_radius;
  const std::size_t cells =
      static_cast<std::size_t>(std::llround((hi - lo + 2.0 * support_radius) / grid_step));

  // midpoint grid over Omega_m; weight = J(dx) * h
  std::vector<double> points(cells);
  for (std::size_t k = 0; k < cells; ++k) points[k] = grid_lo + (k + 0.5) * grid_step;

  std::vector<Edge> edges;
  auto name = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "x%+.10g", x);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t j = i; j < cells; ++j) {
      const double v = kernel(points[i] - points[j]);
      if (v < 0.0)
        throw std::invalid_argument("build_kernel_space: kernel has negative samples");
      const double w = v * grid_step;
      if (w > 0.0) edges.push_back({name(points[i]), name(points[j]), w});
    }
  }
  if (edges.empty()) throw std::invalid_argument("build_kernel_space: empty support");

  WeightedGraph g = build_graph(edges);
  std::vector<std::size_t> omega_idx;
  Vector omega_pts, boundary_pts;
  for (std::size_t k = 0; k < cells; ++k) {
    if (lo < points[k] && points[k] < hi) {
      omega_idx.push_back(*g.index_of(name(points[k])));
      omega_pts.push_back(points[k]);
    }
  }
  if (omega_idx.empty())
    throw std::invalid_argument("build_kernel_space: no grid points inside Omega");

  DirichletDomain dom = build_domain(g, std::move(omega_idx));
  for (auto b : dom.boundary()) {
    const std::string& lbl = dom.graph().label(b);
    boundary_pts.push_back(std::stod(lbl.substr(1)));
  }
  return KernelSpace{std::move(dom), std::move(omega_pts), std::move(boundary_pts), grid_step};
}

}  // namespace gelfand
