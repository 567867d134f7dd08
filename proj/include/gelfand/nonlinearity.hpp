#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gelfand/linalg.hpp"

namespace gelfand {

// Scalar reaction term f for -Delta_m u = lambda f(u).
//
// Admissible kinds (f(0) > 0, non-decreasing) reject negative arguments in
// evaluate(); solvers that need trial values below zero use the *_extended
// accessors, which continue f linearly (C^1) below the origin.
class Nonlinearity {
 public:
  enum class Kind { Exp, Power, Affine, AllenCahn, Polynomial, PiecewiseC1, LogSublinear, Truncated };
  enum class Convexity { StrictlyConvex, Convex, NonConvex };

  struct Segment {
    double knot;           // left endpoint, closed
    Vector coefficients;   // ascending powers of s
  };

  Nonlinearity() = default;  // e^s

  static Nonlinearity exponential();            // e^s
  static Nonlinearity power(double p);          // (1+s)^p, p >= 1
  static Nonlinearity affine();                 // 1 + s
  static Nonlinearity allen_cahn();             // s - s^3
  static Nonlinearity polynomial(Vector ascending_coefficients);
  static Nonlinearity piecewise(std::vector<Segment> segments);
  static Nonlinearity log_sublinear();          // 1 + log(1+s)

  Kind kind() const { return kind_; }
  Convexity convexity() const { return convexity_; }
  bool superlinear() const { return superlinear_; }
  bool admissible() const { return admissible_; }

  double value(double s) const;
  double derivative(double s) const;
  std::pair<double, double> evaluate(double s) const;  // (f, f')
  double second_derivative(double s) const;
  double primitive(double s) const;  // F with F' = f, F(0) = 0

  // C^1 linear continuation below 0 (identity for Allen-Cahn / truncated)
  double value_extended(double s) const;
  double derivative_extended(double s) const;
  double second_derivative_extended(double s) const;

  // sup_{s>0} s / f(s); +infinity for sublinear f (then lambda* = +infinity)
  double sup_g() const;

  // whether the supremum of g is attained at a finite argument (it is not for
  // affine growth, where the extremal solution does not exist)
  bool sup_g_attained() const;

  // clamps the argument to [lo, hi]; used for sub/supersolution searches
  Nonlinearity truncated(double lo, double hi) const;

  double power_exponent() const { return p_; }
  const std::string& spec_string() const { return spec_; }

 private:
  void classify();
  double raw_value(double s) const;
  double raw_derivative(double s) const;
  double raw_second(double s) const;

  Kind kind_ = Kind::Exp;
  Convexity convexity_ = Convexity::StrictlyConvex;
  bool superlinear_ = true;
  bool admissible_ = true;
  double p_ = 0.0;                  // Power exponent
  Vector coeffs_;                   // Polynomial
  std::vector<Segment> segments_;   // PiecewiseC1
  double trunc_lo_ = 0.0, trunc_hi_ = 0.0;
  std::shared_ptr<const Nonlinearity> inner_;  // Truncated wraps another f
  std::string spec_ = "exp";
};

// Spec strings: "exp", "power:P", "affine", "allen-cahn", "log1p",
// "poly:c0,c1,..." (ascending), "piecewise:FILE".
Nonlinearity parse_nonlinearity(const std::string& spec);

// File format for piecewise nonlinearities: one "segment KNOT C0 C1 ..." line
// per piece, knots ascending starting at 0, '#' comments allowed.
Nonlinearity parse_piecewise_file(const std::string& path);

}  // namespace gelfand
