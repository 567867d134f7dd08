#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gelfand/solver.hpp"

namespace gelfand {

struct BranchPoint {
  double lambda = 0.0;
  Vector values;
  double norm_inf = 0.0;
  double mu1 = 0.0;
  double arc = 0.0;  // cumulative pseudo-arclength
};

enum class BranchLabel { Minimal, Upper, Other };

struct Branch {
  std::vector<BranchPoint> points;
  std::vector<std::size_t> folds;  // indices where d(lambda)/d(arc) flips sign
  BranchLabel label = BranchLabel::Other;
  std::string diagnostic;  // why the continuation stopped
};

struct FoldPoint {
  double lambda = 0.0;
  Vector values;
  Vector null_direction;
};

struct LambdaStarResult {
  double lambda_star = 0.0;
  std::optional<Solution> extremal;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool fold_refined = false;
};

// Bisection on [0, lambda_m * sup g] with minimal_solve success as predicate;
// when the final bracket admits a regular fold, the estimate is polished by
// Newton on the extended system (F = 0, J phi = 0, phi_k = 1).
LambdaStarResult lambda_star_bisect(const DirichletDomain& d, const Nonlinearity& f,
                                    double tol_lambda);

// Newton on the fold system seeded from (u0, lambda0).
std::optional<FoldPoint> refine_fold(const DirichletDomain& d, const Nonlinearity& f,
                                     const Vector& u0, double lambda0);

// Minimal branch over an ascending lambda grid; warm starts stay monotone
// from below because u_mu < u_lambda. With parallel=true the points are
// solved cold-started and concurrently.
Branch sweep_minimal(const DirichletDomain& d, const Nonlinearity& f, const Vector& lambda_grid,
                     bool warm_start = true, bool parallel = false);

struct ContinuationOptions {
  double step = 0.05;          // max pseudo-arclength step
  int max_points = 1500;
  double norm_cap = 60.0;
  double corrector_tol = 1e-11;
  int corrector_max_iter = 12;
  double min_step = 1e-6;
};

// Pseudo-arclength predictor-corrector through folds. direction = +1 starts
// towards increasing lambda, -1 towards decreasing.
Branch continue_branch(const DirichletDomain& d, const Nonlinearity& f, const BranchPoint& start,
                       int direction, const ContinuationOptions& opt = {});

struct FoldReport {
  std::size_t index = 0;  // position within the branch
  double lambda = 0.0;
  Vector values;
  double mu1 = 0.0;
  bool refined = false;
};

// Local lambda-maxima along the branch, polished by refine_fold when the
// fold is regular.
std::vector<FoldReport> detect_fold(const DirichletDomain& d, const Nonlinearity& f,
                                    const Branch& b);

// All solutions at a fixed lambda, found by Newton runs seeded on a
// deterministic lattice inside the envelope box, deduplicated at 1e-6.
std::vector<Solution> find_solutions(const DirichletDomain& d, const Nonlinearity& f,
                                     double lambda);

struct DiagramRow {
  std::string branch;
  double arc = 0.0;
  double lambda = 0.0;
  double norm_inf = 0.0;
  double mu1 = 0.0;
  bool stable = false;
  Vector values;
};

std::vector<DiagramRow> assemble_diagram(
    const std::vector<std::pair<std::string, Branch>>& branches);

BranchPoint make_branch_point(const DirichletDomain& d, const Nonlinearity& f,
                              const Solution& sol);

}  // namespace gelfand
