#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gelfand/corpus.hpp"
#include "gelfand/lambert.hpp"
#include "gelfand/solver.hpp"
#include "gelfand/spectral.hpp"

using namespace gelfand;

namespace {

DirichletDomain path4_domain() {
  return build_domain(build_graph({{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}}), {"2", "3"});
}

DirichletDomain envelope_domain() {
  const BuiltinExample ex = make_builtin("envelope");
  return build_domain(ex.graph, ex.omega);
}

}  // namespace

TEST_CASE("linear solve: hand inverse of the 4-path operator") {
  const DirichletDomain d = path4_domain();
  for (double k : {1.0, 0.25, -2.0}) {
    const Vector u = linear_dirichlet_solve(d, {k, k});
    CHECK(u[0] == doctest::Approx(2 * k).epsilon(1e-14));
    CHECK(u[1] == doctest::Approx(2 * k).epsilon(1e-14));
  }
  const Vector zero = linear_dirichlet_solve(d, {0.0, 0.0});
  CHECK(zero == Vector{0.0, 0.0});
}

TEST_CASE("linear solve: the envelope graph inverse matches the paper matrix") {
  const double ref[5][5] = {{160, 80, 64, 80, 96},
                            {80, 160, 80, 64, 96},
                            {64, 80, 160, 80, 96},
                            {80, 64, 80, 160, 96},
                            {96, 96, 96, 96, 192}};
  const DirichletDomain d = envelope_domain();
  // (I-P)^{-1} column by column; A = 4 (I-P), so A^{-1} = (I-P)^{-1} / 4
  for (std::size_t j = 0; j < 5; ++j) {
    Vector e(5, 0.0);
    e[j] = 1.0;
    const Vector col = linear_dirichlet_solve(d, e);
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(std::abs(col[i] / 4.0 - ref[i][j] / 384.0) <= 1e-12);
  }
}

TEST_CASE("linear solve: positivity of the inverse on random data") {
  const DirichletDomain d = path4_domain();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const Vector u = linear_dirichlet_solve(d, {unif(rng), unif(rng)});
    CHECK(u[0] >= 0.0);
    CHECK(u[1] >= 0.0);
  }
}

TEST_CASE("minimal_solve matches -W0(-2 lambda) on the 4-path") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  for (double lam : {0.02, 0.1, 0.15}) {
    const SolveReport rep = minimal_solve(d, f, lam);
    REQUIRE(rep.converged());
    const double expected = -lambert_w0(-2 * lam);
    CHECK(std::abs(rep.solution.values[0] - expected) <= 1e-8);
    CHECK(std::abs(rep.solution.values[1] - expected) <= 1e-8);
    CHECK(rep.solution.minimal);
    CHECK(rep.solution.residual <= 1e-11);
  }
}

TEST_CASE("minimal_solve at lambda = 0 returns zero immediately") {
  const SolveReport rep = minimal_solve(path4_domain(), Nonlinearity::exponential(), 0.0);
  REQUIRE(rep.converged());
  CHECK(rep.solution.values == Vector{0.0, 0.0});
  CHECK(rep.iterations == 0);
}

TEST_CASE("minimal_solve diverges above lambda_star with the cap certificate") {
  const SolveReport rep = minimal_solve(path4_domain(), Nonlinearity::exponential(), 0.3);
  CHECK(rep.status == SolveStatus::Diverged);
  CHECK(rep.message.find("lambda exceeds lambda_star") != std::string::npos);
}

TEST_CASE("minimal_solve refuses Allen-Cahn and negative lambda") {
  CHECK_THROWS_AS(minimal_solve(path4_domain(), Nonlinearity::allen_cahn(), 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimal_solve(path4_domain(), Nonlinearity::exponential(), -0.1),
                  std::invalid_argument);
}

TEST_CASE("two monotone steps on the envelope graph reproduce the closed forms") {
  const DirichletDomain d = envelope_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const double lam = 0.05;
  Vector u(5, 0.0);
  for (int step = 0; step < 2; ++step) {
    Vector rhs(5);
    for (std::size_t i = 0; i < 5; ++i) rhs[i] = lam * f.value(u[i]);
    u = linear_dirichlet_solve(d, rhs);
  }
  const double interior = 4 * lam * std::exp(5 * lam) + lam * std::exp(6 * lam);
  const double center = 4 * lam * std::exp(5 * lam) + 2 * lam * std::exp(6 * lam);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(u[i] - interior) <= 1e-12);
  CHECK(std::abs(u[4] - center) <= 1e-12);
}

TEST_CASE("monotone iterates are nondecreasing componentwise") {
  const DirichletDomain d = envelope_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const double lam = 0.05;
  Vector u(5, 0.0);
  for (int step = 0; step < 200; ++step) {
    Vector rhs(5);
    for (std::size_t i = 0; i < 5; ++i) rhs[i] = lam * f.value(u[i]);
    const Vector next = linear_dirichlet_solve(d, rhs);
    for (std::size_t i = 0; i < 5; ++i) CHECK(next[i] >= u[i] - 1e-12);
    u = next;
  }
}

TEST_CASE("strict monotonicity of the minimal family in lambda") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  Vector prev(2, -1.0);
  for (double lam : {0.02, 0.05, 0.09, 0.13, 0.17}) {
    const SolveReport rep = minimal_solve(d, f, lam);
    REQUIRE(rep.converged());
    for (std::size_t i = 0; i < 2; ++i) CHECK(rep.solution.values[i] > prev[i]);
    prev = rep.solution.values;
  }
}

TEST_CASE("newton finds the second branch -W-1(-2 lambda)") {
  const DirichletDomain d = path4_domain();
  const SolveReport rep =
      newton_solve(d, Nonlinearity::exponential(), 0.1, {3.0, 3.0}, 1e-12, 100);
  REQUIRE(rep.converged());
  const double expected = -lambert_wm1(-0.2);
  CHECK(std::abs(rep.solution.values[0] - expected) <= 1e-10);
  CHECK(std::abs(rep.solution.values[1] - expected) <= 1e-10);
  CHECK(!rep.solution.minimal);
}

TEST_CASE("newton solves the affine (linear) problem in at most two iterations") {
  const DirichletDomain d = path4_domain();
  for (double lam : {0.1, 0.3, 0.45}) {
    const SolveReport rep = newton_solve(d, Nonlinearity::affine(), lam, {0.0, 0.0}, 1e-12, 100);
    REQUIRE(rep.converged());
    const double expected = lam / (0.5 - lam);
    CHECK(std::abs(rep.solution.values[0] - expected) <= 1e-10);
    CHECK(rep.iterations <= 2);
  }
}

TEST_CASE("newton finds both asymmetric solutions at lambda = 0.05") {
  // cross-checked against a dense-grid search over the 2-D system
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const SolveReport a = newton_solve(d, f, 0.05, {2.7, 3.9}, 1e-12, 100);
  REQUIRE(a.converged());
  CHECK(a.solution.values[0] == doctest::Approx(2.750631).epsilon(1e-5));
  CHECK(a.solution.values[1] == doctest::Approx(3.936011).epsilon(1e-5));
  const SolveReport b = newton_solve(d, f, 0.05, {3.9, 2.7}, 1e-12, 100);
  REQUIRE(b.converged());
  CHECK(b.solution.values[0] == doctest::Approx(3.936011).epsilon(1e-5));
  CHECK(b.solution.values[1] == doctest::Approx(2.750631).epsilon(1e-5));
}

TEST_CASE("newton reports the fold through a singular Jacobian") {
  const DirichletDomain d = path4_domain();
  // at u = (1,1), lambda = 1/(2e) the Jacobian is exactly singular
  const double lam = 1.0 / (2.0 * M_E);
  const SolveReport rep = newton_solve(d, Nonlinearity::exponential(), lam, {1.0, 1.0}, 1e-16, 4);
  CHECK((rep.fold_suspected || rep.status == SolveStatus::NoConvergence));
}

TEST_CASE("stability: mu1 at zero shift equals lambda_m, minimal stable, upper not") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();

  SolveReport zero = minimal_solve(d, f, 0.0);
  CHECK(stability_mu1(d, f, zero.solution) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(zero.solution.stable);

  SolveReport lower = minimal_solve(d, f, 0.1);
  REQUIRE(lower.converged());
  const double mu_low = stability_mu1(d, f, lower.solution);
  CHECK(mu_low > 0.0);
  CHECK(mu_low == doctest::Approx((1.0 - lower.solution.values[0]) / 2.0).epsilon(1e-10));
  CHECK(lower.solution.stable);

  SolveReport upper = newton_solve(d, f, 0.1, {3.0, 3.0}, 1e-12, 100);
  REQUIRE(upper.converged());
  CHECK(stability_mu1(d, f, upper.solution) < 0.0);
  CHECK(!upper.solution.stable);
}

TEST_CASE("energy: zero function, closed form, and decrease along iteration") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const double lam = 0.1;

  CHECK(energy(d, f, lam, Vector(4, 0.0)) == 0.0);

  // u = (t, t, 0, 0) on the closure; brute-force double sum oracle
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  const auto& g = d.graph();
  std::vector<std::size_t> closure = d.omega();
  closure.insert(closure.end(), d.boundary().begin(), d.boundary().end());
  for (int trial = 0; trial < 10; ++trial) {
    Vector u(4, 0.0);
    u[0] = unif(rng);
    u[1] = unif(rng);
    double grad = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        grad += g.weight(closure[a], closure[b]) * (u[b] - u[a]) * (u[b] - u[a]);
    double pot = 0.0;
    for (std::size_t i = 0; i < 2; ++i) pot += d.nu()[i] * (std::exp(u[i]) - 1.0);
    CHECK(energy(d, f, lam, u) == doctest::Approx(0.25 * grad - lam * pot).epsilon(1e-13));
  }

  // symmetric closed form: (1/4)(2 t^2 + 2 t^2) = t^2 for u = (t,t,0,0)
  const double t = 0.8;
  CHECK(energy(d, f, lam, {t, t, 0, 0}) ==
        doctest::Approx(t * t - lam * 4.0 * (std::exp(t) - 1.0)).epsilon(1e-14));

  // observational: energy decreases along the first monotone steps
  Vector u(2, 0.0);
  double prev_energy = 0.0;
  for (int step = 0; step < 5; ++step) {
    Vector rhs(2);
    for (std::size_t i = 0; i < 2; ++i) rhs[i] = lam * f.value(u[i]);
    u = linear_dirichlet_solve(d, rhs);
    const double e = energy(d, f, lam, {u[0], u[1], 0.0, 0.0});
    CHECK(e <= prev_energy + 1e-12);
    prev_energy = e;
  }
}

TEST_CASE("sublinear reaction: solvable at lambda = 1, 10, 100") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::log_sublinear();
  for (double lam : {1.0, 10.0, 100.0}) {
    const SolveReport rep = minimal_solve(d, f, lam);
    REQUIRE(rep.converged());
    CHECK(rep.solution.residual <= 1e-11);
    CHECK(rep.solution.norm_inf() > 0.0);
  }
}

TEST_CASE("envelope bracket holds for every accepted solution") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const Envelope env = critical_s0(f);
  for (double lam : {0.05, 0.1, 0.15}) {
    const auto [lo, hi] = envelope_bounds(env, lam);
    const SolveReport minimal = minimal_solve(d, f, lam);
    REQUIRE(minimal.converged());
    for (double v : minimal.solution.values) {
      CHECK(v >= lo - 1e-8);
      CHECK(v <= hi + 1e-8);
    }
    const SolveReport upper = newton_solve(d, f, lam, {hi, hi}, 1e-12, 100);
    REQUIRE(upper.converged());
    for (double v : upper.solution.values) {
      CHECK(v >= lo - 1e-8);
      CHECK(v <= hi + 1e-8);
    }
  }
}

TEST_CASE("minimality: the monotone solution sits below every newton solution") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  const double lam = 0.05;
  const SolveReport minimal = minimal_solve(d, f, lam);
  REQUIRE(minimal.converged());
  for (const Vector& seed :
       {Vector{3.5, 3.5}, Vector{2.7, 3.9}, Vector{3.9, 2.7}, Vector{0.2, 0.2}}) {
    const SolveReport other = newton_solve(d, f, lam, seed, 1e-12, 100);
    REQUIRE(other.converged());
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(minimal.solution.values[i] <= other.solution.values[i] + 1e-8);
  }
}

TEST_CASE("verify_solution: clean minimal state passes, corrupted state is flagged") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  SolveReport rep = minimal_solve(d, f, 0.1);
  REQUIRE(rep.converged());

  const VerifyReport good = verify_solution(d, f, rep.solution);
  CHECK(good.ok());
  CHECK(good.nonnegative);
  CHECK(good.envelope_checked);
  CHECK(good.envelope_ok);
  CHECK(good.stability_consistent);

  Solution corrupted = rep.solution;
  corrupted.values[1] = -corrupted.values[1];
  const VerifyReport bad = verify_solution(d, f, corrupted);
  CHECK(!bad.ok());
  CHECK(!bad.nonnegative);

  // second branch: envelope holds but mu1 < 0
  SolveReport upper = newton_solve(d, f, 0.1, {3.0, 3.0}, 1e-12, 100);
  REQUIRE(upper.converged());
  const VerifyReport second = verify_solution(d, f, upper.solution);
  CHECK(second.envelope_ok);
  CHECK(second.mu1 < 0.0);
  CHECK(second.ok());
}

TEST_CASE("Q_u quadratic form agrees with mu1 as its infimum (sampled)") {
  const DirichletDomain d = envelope_domain();
  const Nonlinearity f = Nonlinearity::exponential();
  SolveReport rep = minimal_solve(d, f, 0.05);
  REQUIRE(rep.converged());
  const double mu1 = stability_mu1(d, f, rep.solution);

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double min_q = 1e300;
  for (int t = 0; t < 300; ++t) {
    Vector v(5);
    double norm = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      v[i] = unif(rng);
      norm += d.nu()[i] * v[i] * v[i];
    }
    for (auto& x : v) x /= std::sqrt(norm);
    const double q = stability_quadratic_form(d, f, rep.solution.lambda, rep.solution.values, v);
    CHECK(q >= mu1 - 1e-9);
    min_q = std::min(min_q, q);
  }
  CHECK(min_q >= mu1 - 1e-9);
  CHECK(min_q <= mu1 + 0.5);  // the sampled infimum hovers near mu1
}

TEST_CASE("allen-cahn: truncated newton finds the nontrivial state in [0,1]") {
  // weighted (a,b) = (1,1) path: lambda_m = 1/2; for lambda > lambda_m the
  // closed form is sqrt(1 - lambda_m/lambda)
  const DirichletDomain d =
      build_domain(build_graph({{"1", "2", 1.0}, {"2", "3", 1.0}, {"3", "4", 1.0}}), {"2", "3"});
  const Nonlinearity ac = Nonlinearity::allen_cahn();
  const Nonlinearity trunc = ac.truncated(0.0, 1.0);
  for (double lam : {0.6, 0.75, 1.2}) {
    const SolveReport rep = newton_solve(d, trunc, lam, {1.0, 1.0}, 1e-12, 200);
    REQUIRE(rep.converged());
    const double t = std::sqrt(1.0 - 0.5 / lam);
    CHECK(rep.solution.values[0] == doctest::Approx(t).epsilon(1e-8));
    CHECK(rep.solution.values[0] >= 0.0);
    CHECK(rep.solution.values[0] <= 1.0);
    // interior state solves the original Allen-Cahn problem as well
    Vector res(2);
    for (std::size_t i = 0; i < 2; ++i) {
      double row = rep.solution.values[i];
      for (std::size_t j = 0; j < 2; ++j) row -= d.p_omega()(i, j) * rep.solution.values[j];
      res[i] = row - lam * ac.value(rep.solution.values[i]);
    }
    CHECK(inf_norm(res) <= 1e-10);
  }
}

TEST_CASE("stability of u = 0 for allen-cahn flips exactly at lambda_m") {
  const DirichletDomain d = path4_domain();
  const Nonlinearity ac = Nonlinearity::allen_cahn();
  const Vector zero(2, 0.0);
  CHECK(stability_mu1(d, ac, 0.3, zero) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(stability_mu1(d, ac, 0.75, zero) == doctest::Approx(-0.25).epsilon(1e-12));
  Solution s;
  s.lambda = 0.5 + 0.5e-9;  // inside the stability tolerance
  s.values = zero;
  stability_mu1(d, ac, s);
  CHECK(s.stable);
  s.lambda = 0.5 + 1e-6;
  stability_mu1(d, ac, s);
  CHECK(!s.stable);
}
