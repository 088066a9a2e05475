#pragma once

#include <vector>

#include "qst/models.hpp"
#include "qst/protocol.hpp"
#include "qst/types.hpp"

namespace qst {

/// Conjugate-force direction of the frequency drive in moment space,
/// dH/domega expressed on (x^2, (xp+px)/2, p^2): (m omega, 0, 0).
Vector3 response_theta(double omega, double mass);

/// d Gamma_eq / d omega, analytic.
Vector3 xi_vector(double omega, double beta, double mass);

/// Friction metric g(omega) = Theta^T L^{-1} Xi for slow driving, signed so
/// that the excess work int g omega_dot^2 dt is positive; positive for all
/// positive parameters.
double metric_g(double omega, const QbmParams& params);

struct LengthResult {
    double length;
    std::vector<double> omega_grid;   // from omega0 to omega1 (monotone)
    std::vector<double> arclength;    // cumulative, 0 .. length
};

/// L = int |sqrt(g) domega| along [omega0, omega1], with a cumulative
/// arclength table on a refined Simpson grid.
LengthResult thermodynamic_length(double omega0, double omega1, const QbmParams& params,
                                  int n_grid = 2049);

/// Constant-speed schedule: ell(omega(s)) = s L, so omega' = +-L/sqrt(g).
/// Built by integrating that ODE; the derivative uses the inverse-function
/// rule and is consistent with the tabulated schedule to interpolation
/// accuracy.
Protocol optimal_protocol(double omega0, double omega1, double tau,
                          const QbmParams& params, int n_table = 4097);

/// Closed-form constant-speed schedules in the four limiting regimes of
/// the metric (temperature high/low crossed with friction under/over the
/// oscillation scale).
enum class MetricLimit {
    HighTUnderdamped,   // omega0 (omega1/omega0)^s
    HighTOverdamped,    // omega0 / ((omega0/omega1 - 1) s + 1)
    LowTUnderdamped,    // omega0 / (1 + (sqrt(omega0/omega1) - 1) s)^2
    LowTOverdamped      // omega0 (1 + (sqrt(omega1/omega0) - 1) s)^2
};

Protocol limit_protocol(MetricLimit which, double omega0, double omega1, double tau);

}  // namespace qst
