#pragma once

#include <optional>
#include <utility>

#include "gelfand/nonlinearity.hpp"

namespace gelfand {

// The two monotone branches of the inverse of g(s) = s / f(s), defined for
// strictly convex superlinear admissible f. Every solution of the Gelfand
// problem at parameter lambda lies between g1_inv(lambda) and g2_inv(lambda),
// no matter which random walk space is involved.
class Envelope {
 public:
  Envelope(Nonlinearity f, double s0);

  double s0() const { return s0_; }
  double lambda_cap() const { return lambda_cap_; }  // s0 / f(s0) = max g
  const Nonlinearity& nonlinearity() const { return f_; }

  // increasing branch on [0, lambda_cap]
  double g1_inv(double lambda) const;
  // decreasing branch on (0, lambda_cap]
  double g2_inv(double lambda) const;

 private:
  Nonlinearity f_;
  double s0_;
  double lambda_cap_;
};

// Finds the critical point s0 where h(s) = f(s) - s f'(s) crosses zero and
// builds the envelope. Throws for nonlinearities that are not strictly
// convex, superlinear and admissible.
Envelope critical_s0(const Nonlinearity& f);

// nullopt instead of throwing
std::optional<Envelope> try_envelope(const Nonlinearity& f);

// (g1_inv(lambda), g2_inv(lambda)); lambda must lie in (0, lambda_cap]
std::pair<double, double> envelope_bounds(const Envelope& e, double lambda);

// lambda* <= lambda_m(Omega) * s0 / f(s0)
double lambda_star_upper_bound(const Envelope& e, double lambda_m);

}  // namespace gelfand
