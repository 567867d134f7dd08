#include "gelfand/envelope.hpp"

#include <cmath>
#include <stdexcept>

#include "gelfand/lambert.hpp"

namespace gelfand {

Envelope::Envelope(Nonlinearity f, double s0)
    : f_(std::move(f)), s0_(s0), lambda_cap_(s0 / f_.value(s0)) {}

namespace {

// monotone bisection for g(s) = lambda on [a, b]
double bisect_g(const Nonlinearity& f, double lambda, double a, double b, bool increasing) {
  auto g = [&f](double s) { return s == 0.0 ? 0.0 : s / f.value(s); };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const bool below = g(mid) < lambda;
    if (below == increasing)
      a = mid;
    else
      b = mid;
    if (b - a <= 1e-14 * std::max(1.0, std::abs(a))) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

double Envelope::g1_inv(double lambda) const {
  if (lambda < 0.0 || lambda > lambda_cap_ * (1.0 + 1e-12))
    throw std::invalid_argument("Envelope::g1_inv: lambda outside [0, lambda_cap]");
  if (lambda <= 0.0) return 0.0;
  if (lambda >= lambda_cap_) return s0_;
  if (f_.kind() == Nonlinearity::Kind::Exp) return -lambert_w0(-lambda);
  return bisect_g(f_, lambda, 0.0, s0_, /*increasing=*/true);
}

double Envelope::g2_inv(double lambda) const {
  if (!(lambda > 0.0) || lambda > lambda_cap_ * (1.0 + 1e-12))
    throw std::invalid_argument("Envelope::g2_inv: lambda outside (0, lambda_cap]");
  if (lambda >= lambda_cap_) return s0_;
  if (f_.kind() == Nonlinearity::Kind::Exp) return -lambert_wm1(-lambda);
  double hi = s0_;
  for (int k = 0; k < 200 && hi / f_.value(hi) >= lambda; ++k) hi *= 2.0;
  return bisect_g(f_, lambda, s0_, hi, /*increasing=*/false);
}

Envelope critical_s0(const Nonlinearity& f) {
  if (f.convexity() != Nonlinearity::Convexity::StrictlyConvex)
    throw std::invalid_argument("critical_s0: h is monotone only for strictly convex f");
  if (!f.superlinear() || !f.admissible())
    throw std::invalid_argument("critical_s0: f must be superlinear and satisfy (H)");

  if (f.kind() == Nonlinearity::Kind::Exp) return Envelope(f, 1.0);
  if (f.kind() == Nonlinearity::Kind::Power) return Envelope(f, 1.0 / (f.power_exponent() - 1.0));

  auto h = [&f](double s) { return f.value(s) - s * f.derivative(s); };
  // h(0) = f(0) > 0 and h is decreasing; expand until it changes sign
  double a = 0.0, b = 1.0;
  int k = 0;
  while (h(b) > 0.0) {
    a = b;
    b *= 2.0;
    if (++k > 100) throw std::invalid_argument("critical_s0: h has no sign change");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    (h(mid) > 0.0 ? a : b) = mid;
    if (b - a <= 1e-12 * std::max(1.0, a)) break;
  }
  return Envelope(f, 0.5 * (a + b));
}

std::optional<Envelope> try_envelope(const Nonlinearity& f) {
  if (f.convexity() != Nonlinearity::Convexity::StrictlyConvex || !f.superlinear() ||
      !f.admissible())
    return std::nullopt;
  try {
    return critical_s0(f);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::pair<double, double> envelope_bounds(const Envelope& e, double lambda) {
  if (!(lambda > 0.0) || lambda > e.lambda_cap() * (1.0 + 1e-12))
    throw std::invalid_argument("envelope_bounds: lambda outside (0, lambda_cap]");
  return {e.g1_inv(lambda), e.g2_inv(lambda)};
}

double lambda_star_upper_bound(const Envelope& e, double lambda_m) {
  return lambda_m * e.lambda_cap();
}

}  // namespace gelfand
