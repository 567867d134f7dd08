#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gelfand/linalg.hpp"

using namespace gelfand;

namespace {

Matrix random_symmetric(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s(i, j) = s(j, i) = unif(rng);
  return s;
}

}  // namespace

TEST_CASE("LU solves a hand-checked 2x2 system") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;  a(0, 1) = -0.5;
  a(1, 0) = -0.5; a(1, 1) = 1.0;
  LuDecomposition lu(a);
  REQUIRE(!lu.singular());
  const Vector x = lu.solve({1.0, 1.0});
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lu.determinant() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("LU flags singular matrices") {
  Matrix a(2, 2);
  a(0, 0) = 1.0; a(0, 1) = 2.0;
  a(1, 0) = 2.0; a(1, 1) = 4.0;
  LuDecomposition lu(a);
  CHECK(lu.singular());
  CHECK_THROWS_AS(lu.solve({1.0, 0.0}), std::runtime_error);
}

TEST_CASE("LU residual stays small on random systems") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = unif(rng);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 4.0;  // keep it comfortably regular
    Vector b(n);
    for (auto& v : b) v = unif(rng);
    const Vector x = LuDecomposition(a).solve(b);
    const Vector ax = mat_vec(a, x);
    CHECK(inf_norm_diff(ax, b) < 1e-12);
  }
}

TEST_CASE("jacobi: diagonal matrix is already solved") {
  Matrix d(3, 3);
  d(0, 0) = 1; d(1, 1) = 2; d(2, 2) = 3;
  const EigenDecomposition eig = jacobi_eigensolver(d);
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(2.0));
  CHECK(eig.values[2] == doctest::Approx(3.0));
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(std::abs(eig.vectors(k, k)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jacobi: 2x2 closed form") {
  Matrix s(2, 2);
  s(0, 1) = s(1, 0) = 0.5;
  const EigenDecomposition eig = jacobi_eigensolver(s);
  CHECK(eig.values[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("jacobi: reconstruction QLQ^T on random symmetric 8x8") {
  const Matrix s = random_symmetric(8, 123);
  const EigenDecomposition eig = jacobi_eigensolver(s);

  // Q Lambda Q^T
  Matrix lam(8, 8);
  for (std::size_t k = 0; k < 8; ++k) lam(k, k) = eig.values[k];
  const Matrix rec = mat_mul(mat_mul(eig.vectors, lam), transpose(eig.vectors));
  double err = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) err = std::max(err, std::abs(rec(i, j) - s(i, j)));
  CHECK(err < 1e-10);

  // orthonormal columns
  const Matrix qtq = mat_mul(transpose(eig.vectors), eig.vectors);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(qtq(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-11));

  // ascending
  for (std::size_t k = 1; k < 8; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
}

TEST_CASE("jacobi rejects asymmetric input") {
  Matrix s(2, 2);
  s(0, 1) = 0.5;
  s(1, 0) = 0.25;
  CHECK_THROWS_AS(jacobi_eigensolver(s), std::invalid_argument);
}
