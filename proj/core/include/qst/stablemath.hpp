#pragma once

#include <cmath>

namespace qst {

// Hyperbolic coefficients appear as coth(bw/4), tanh(bw/4), sech(bw/2)
// with bw anywhere from 1e-6 to 1e3. The expm1-based forms below stay
// accurate at bw -> 0 and neither overflow nor lose the limit at
// bw -> inf.

/// coth(x) for x > 0.
inline double coth_stable(double x) {
    if (x > 350.0) return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

/// sech(x) for x >= 0.
inline double sech_stable(double x) {
    const double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
}

/// 1/sinh(x) for x > 0.
inline double csch_stable(double x) {
    if (x > 350.0) return 0.0;
    return 2.0 * std::exp(-x) / (-std::expm1(-2.0 * x));
}

/// 1/sinh^2(x) for x > 0.
inline double csch2_stable(double x) {
    if (x > 350.0) return 0.0;
    const double d = std::expm1(2.0 * x);          // e^{2x} - 1
    return 4.0 * std::exp(2.0 * x) / (d * d);
}

}  // namespace qst
