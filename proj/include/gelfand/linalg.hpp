#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gelfand {

using Vector = std::vector<double>;

// Dense row-major matrix. Everything in this library is desk-scale, so
// simplicity wins over sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector mat_vec(const Matrix& a, const Vector& x);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double inf_norm(const Vector& v);
double inf_norm_diff(const Vector& a, const Vector& b);
double dot(const Vector& a, const Vector& b);
double frobenius_norm(const Matrix& a);
double max_asymmetry(const Matrix& a);

// LU factorization with partial pivoting. The factorization is computed once
// and may be reused for many right-hand sides.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a);

  bool singular() const { return singular_; }
  std::size_t size() const { return lu_.rows(); }

  // Throws std::runtime_error if the factorization is singular.
  Vector solve(const Vector& rhs) const;
  Matrix inverse() const;
  double determinant() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int perm_sign_ = 1;
  bool singular_ = false;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values[k], orthonormal
};

// Cyclic Jacobi rotations for a symmetric matrix; iterates until the
// off-diagonal Frobenius norm drops below off_tol.
EigenDecomposition jacobi_eigensolver(Matrix s, double off_tol = 1e-13, int max_sweeps = 100);

}  // namespace gelfand
