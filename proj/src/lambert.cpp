#include "gelfand/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace gelfand {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Halley steps on w*exp(w) - x = 0 until the residual contract is met.
double halley(double w, double x) {
  const double target = 1e-14 * std::max(1.0, std::abs(x));
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double r = w * ew - x;
    if (std::abs(r) <= target) return w;
    const double d1 = ew * (w + 1.0);
    double denom = d1 - (w + 2.0) * r / (2.0 * w + 2.0);
    if (denom == 0.0 || !std::isfinite(denom)) denom = d1;
    const double step = r / denom;
    if (!std::isfinite(step)) break;
    w -= step;
  }
  const double r = w * std::exp(w) - x;
  if (std::abs(r) > 1e2 * target)
    throw std::runtime_error("lambert: Halley iteration failed to meet residual");
  return w;
}

// Series around the branch point x = -1/e in p = sqrt(2(ex+1)).
double branch_series(double p) {
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

}  // namespace

double lambert_w0(double x) {
  if (x < -kInvE - 1e-15) throw std::invalid_argument("lambert_w0: x below -1/e");
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;

  const double p2 = 2.0 * (M_E * x + 1.0);
  double w;
  if (p2 < 1e-8) return branch_series(std::sqrt(p2));
  if (x < -0.25) {
    w = branch_series(std::sqrt(p2));
  } else if (x < 1.0) {
    // Taylor-ish start; Halley does the rest
    w = x * (1.0 + x * (-1.0 + x * 1.5));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return halley(w, x);
}

double lambert_wm1(double x) {
  if (x < -kInvE - 1e-15 || x >= 0.0)
    throw std::invalid_argument("lambert_wm1: x outside [-1/e, 0)");
  if (x <= -kInvE) return -1.0;

  // same series as W0 but entered with p -> -p
  const double p2 = 2.0 * (M_E * x + 1.0);
  double w;
  if (p2 < 1e-8) return branch_series(-std::sqrt(p2));
  if (x < -0.25) {
    w = branch_series(-std::sqrt(p2));
  } else {
    const double l1 = std::log(-x);
    w = l1 - std::log(-l1);
  }
  return halley(w, x);
}

}  // namespace gelfand
