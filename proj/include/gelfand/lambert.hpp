#pragma once

namespace gelfand {

// Principal branch W0 of the Lambert W function, defined for x >= -1/e.
// Satisfies w * exp(w) = x with w >= -1.
double lambert_w0(double x);

// Negative branch W_{-1}, defined for x in [-1/e, 0). Satisfies w <= -1.
double lambert_wm1(double x);

}  // namespace gelfand
