#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qst {

/// Control schedule lambda(s) on rescaled time s = t/tau in [0,1].
struct Protocol {
    double tau;
    std::function<double(double)> schedule;     // s -> lambda
    std::function<double(double)> derivative;   // s -> dlambda/ds

    double value_at(double t) const { return schedule(t / tau); }
    double rate_at(double t) const { return derivative(t / tau) / tau; }  // dlambda/dt
};

inline Protocol static_protocol(double lambda, double tau) {
    return {tau, [lambda](double) { return lambda; }, [](double) { return 0.0; }};
}

inline Protocol linear_protocol(double l0, double l1, double tau) {
    return {tau,
            [l0, l1](double s) { return l0 + (l1 - l0) * s; },
            [l0, l1](double) { return l1 - l0; }};
}

/// lambda0 (lambda1/lambda0)^s, the exponential ramp used as the reference
/// compression protocol.
inline Protocol exponential_protocol(double l0, double l1, double tau) {
    const double r = std::log(l1 / l0);
    return {tau,
            [l0, r](double s) { return l0 * std::exp(r * s); },
            [l0, r](double s) { return l0 * r * std::exp(r * s); }};
}

/// Finite-difference consistency of schedule vs derivative on 11 interior
/// sample points. Returns the worst absolute defect.
inline double protocol_derivative_defect(const Protocol& p) {
    const double h = 1e-6;
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double s = 0.05 + 0.9 * k / 10.0;
        const double fd = (p.schedule(s + h) - p.schedule(s - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - p.derivative(s)));
    }
    return worst;
}

inline void validate_protocol(const Protocol& p, double tol = 1e-6) {
    if (p.tau <= 0) throw std::invalid_argument("protocol: tau must be positive");
    if (protocol_derivative_defect(p) > tol)
        throw std::invalid_argument("protocol: schedule and derivative are inconsistent");
}

}  // namespace qst
