#include <cmath>
#include <stdexcept>

#include "gelfand/cli.hpp"
#include "gelfand/lambert.hpp"
#include "gelfand/spectral.hpp"

namespace gelfand {

namespace {

// A^{-1} of the envelope example, times 384
constexpr double kEnvelopeInverse384[5][5] = {
    {160, 80, 64, 80, 96},
    {80, 160, 80, 64, 96},
    {64, 80, 160, 80, 96},
    {80, 64, 80, 160, 96},
    {96, 96, 96, 96, 192},
};

}  // namespace

BuiltinEvaluator::BuiltinEvaluator(BuiltinExample ex)
    : ex_(std::move(ex)), domain_(build_domain(ex_.graph, ex_.omega)) {}

const LambdaStarResult& BuiltinEvaluator::lambda_star() {
  if (!lambda_star_) lambda_star_ = lambda_star_bisect(domain_, ex_.f, 1e-7);
  return *lambda_star_;
}

const std::vector<Solution>& BuiltinEvaluator::solutions_at(double lambda) {
  auto it = solutions_.find(lambda);
  if (it == solutions_.end())
    it = solutions_.emplace(lambda, find_solutions(domain_, ex_.f, lambda)).first;
  return it->second;
}

std::size_t BuiltinEvaluator::component(const std::string& label) const {
  const auto labels = domain_.omega_labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("builtin quantity references unknown vertex '" + label + "'");
}

double BuiltinEvaluator::quantity(const std::string& key) {
  auto starts_with = [&key](const std::string& prefix) {
    return key.rfind(prefix, 0) == 0;
  };
  // optional [label] and @lambda pieces
  std::string label;
  double at = 0.0;
  bool has_at = false;
  {
    const auto lb = key.find('[');
    if (lb != std::string::npos) {
      const auto rb = key.find(']', lb);
      if (rb == std::string::npos) throw std::invalid_argument("malformed quantity '" + key + "'");
      label = key.substr(lb + 1, rb - lb - 1);
    }
    const auto atpos = key.find('@');
    if (atpos != std::string::npos) {
      at = std::stod(key.substr(atpos + 1));
      has_at = true;
    }
  }

  if (key == "lambda_m") return dirichlet_eigenpair(domain_).value;
  if (key == "lambda_star") return lambda_star().lambda_star;
  if (key == "extremal_absent") return lambda_star().extremal ? 0.0 : 1.0;
  if (key == "u_star_norm") {
    const auto& ls = lambda_star();
    if (!ls.extremal) throw std::runtime_error("u_star_norm: no extremal solution");
    return ls.extremal->norm_inf();
  }
  if (starts_with("u_star[")) {
    const auto& ls = lambda_star();
    if (!ls.extremal) throw std::runtime_error("u_star: no extremal solution");
    return ls.extremal->values[component(label)];
  }

  if (starts_with("minimal") && has_at) {
    SolveReport rep = minimal_solve(domain_, ex_.f, at);
    if (!rep.converged()) throw std::runtime_error("minimal quantity: " + rep.message);
    if (starts_with("minimal_norm")) return rep.solution.norm_inf();
    return rep.solution.values[component(label)];
  }
  if (starts_with("upper[") && has_at) {
    const auto& sols = solutions_at(at);
    if (sols.empty()) throw std::runtime_error("upper: no solutions found");
    std::size_t best = 0;
    for (std::size_t i = 1; i < sols.size(); ++i)
      if (sols[i].norm_inf() > sols[best].norm_inf()) best = i;
    return sols[best].values[component(label)];
  }
  if (starts_with("count@")) return static_cast<double>(solutions_at(at).size());

  if (starts_with("mu1_minimal@")) {
    SolveReport rep = minimal_solve(domain_, ex_.f, at);
    if (!rep.converged()) throw std::runtime_error("mu1_minimal: " + rep.message);
    return stability_mu1(domain_, ex_.f, rep.solution);
  }
  if (starts_with("mu1_upper@")) {
    const auto& sols = solutions_at(at);
    if (sols.empty()) throw std::runtime_error("mu1_upper: no solutions found");
    std::size_t best = 0;
    for (std::size_t i = 1; i < sols.size(); ++i)
      if (sols[i].norm_inf() > sols[best].norm_inf()) best = i;
    return sols[best].mu1;
  }
  if (starts_with("mu1_zero@"))
    return stability_mu1(domain_, ex_.f, at, Vector(domain_.interior_size(), 0.0));

  if (starts_with("truncated_norm@")) {
    const Nonlinearity trunc = ex_.f.truncated(0.0, 1.0);
    SolveReport rep =
        newton_solve(domain_, trunc, at, Vector(domain_.interior_size(), 1.0), 1e-12, 200);
    if (!rep.converged()) throw std::runtime_error("truncated_norm: " + rep.message);
    return rep.solution.norm_inf();
  }

  if (key == "ainv_max_abs_err") {
    // 0.25 * (I - P)^{-1} against the 1/384 reference
    const Matrix inv = domain_.dirichlet_lu().inverse();
    const std::size_t n = domain_.interior_size();
    if (n != 5) throw std::invalid_argument("ainv_max_abs_err is specific to the envelope graph");
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        err = std::max(err, std::abs(0.25 * inv(i, j) - kEnvelopeInverse384[i][j] / 384.0));
    return err;
  }

  if (starts_with("iterate2[") && has_at) {
    // two monotone steps from zero
    const std::size_t n = domain_.interior_size();
    Vector u(n, 0.0);
    for (int step = 0; step < 2; ++step) {
      Vector rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = at * ex_.f.value(u[i]);
      u = linear_dirichlet_solve(domain_, rhs);
    }
    return u[component(label)];
  }

  if (key == "sweep_has_jump") {
    const double ls = lambda_star().lambda_star;
    Vector grid;
    const int pts = 240;
    for (int i = 1; i <= pts; ++i) grid.push_back(ls * (i / static_cast<double>(pts + 1)));
    Branch b = sweep_minimal(domain_, ex_.f, grid);
    double max_jump = 0.0;
    for (std::size_t i = 1; i < b.points.size(); ++i)
      max_jump = std::max(max_jump, b.points[i].norm_inf - b.points[i - 1].norm_inf);
    return max_jump > 1.0 ? 1.0 : 0.0;
  }

  throw std::invalid_argument("unknown quantity '" + key + "'");
}

}  // namespace gelfand
