#include "qst/geometry.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "qst/integrate.hpp"
#include "qst/moments.hpp"
#include "qst/stablemath.hpp"

namespace qst {

Vector3 response_theta(double omega, double mass) {
    return Vector3(mass * omega, 0.0, 0.0);
}

Vector3 xi_vector(double omega, double beta, double mass) {
    const double x = beta * omega / 2.0;
    const double coth = coth_stable(x);
    const double csch2 = csch2_stable(x);
    Vector3 xi;
    xi(0) = -beta * csch2 / (4.0 * mass * omega) - coth / (2.0 * mass * omega * omega);
    xi(1) = 0.0;
    xi(2) = mass * coth / 2.0 - mass * omega * beta * csch2 / 4.0;
    return xi;
}

double metric_g(double omega, const QbmParams& params) {
    if (omega <= 0) throw std::invalid_argument("metric_g: omega must be positive");
    const auto gen = moment_generator(omega, params.beta, params.mass, params.kappa);
    // slow driving: Gamma - Gamma_eq ~ L^{-1} Xi omega_dot, so the excess
    // power is omega_dot^2 Theta . L^{-1} Xi; this sign makes W_ex >= 0
    const Vector3 y = gen.L.partialPivLu().solve(xi_vector(omega, params.beta, params.mass));
    const double g = response_theta(omega, params.mass).dot(y);
    if (!std::isfinite(g) || g <= 0)
        throw std::runtime_error("metric_g: metric not positive, generator singular?");
    return g;
}

namespace {

// Cumulative composite Simpson of sqrt(g) on an odd-length uniform grid.
LengthResult tabulate_length(double omega0, double omega1, const QbmParams& params,
                             int n) {
    LengthResult r;
    r.omega_grid.resize(n);
    r.arclength.resize(n);
    const double h = (omega1 - omega0) / (n - 1);
    std::vector<double> sg(n);
    for (int i = 0; i < n; ++i) {
        r.omega_grid[i] = omega0 + h * i;
        sg[i] = std::sqrt(metric_g(r.omega_grid[i], params));
    }
    r.arclength[0] = 0.0;
    const double ah = std::abs(h);
    for (int i = 0; i + 2 < n; i += 2) {
        const double seg = ah / 3.0 * (sg[i] + 4.0 * sg[i + 1] + sg[i + 2]);
        // split the panel so every node carries a cumulative value
        const double half = ah / 12.0 * (5.0 * sg[i] + 8.0 * sg[i + 1] - sg[i + 2]);
        r.arclength[i + 1] = r.arclength[i] + half;
        r.arclength[i + 2] = r.arclength[i] + seg;
    }
    r.length = r.arclength.back();
    return r;
}

}  // namespace

LengthResult thermodynamic_length(double omega0, double omega1, const QbmParams& params,
                                  int n_grid) {
    params.validate();
    if (omega0 <= 0 || omega1 <= 0 || omega0 == omega1)
        throw std::invalid_argument("thermodynamic_length: need distinct positive endpoints");
    int n = n_grid | 1;
    if (n < 33) n = 33;
    LengthResult r = tabulate_length(omega0, omega1, params, n);
    for (int pass = 0; pass < 8; ++pass) {
        LengthResult fine = tabulate_length(omega0, omega1, params, 2 * n - 1);
        const bool converged = std::abs(fine.length - r.length) <= 1e-12 * fine.length;
        r = std::move(fine);
        n = 2 * n - 1;
        if (converged) break;
    }
    return r;
}

namespace {

struct ScheduleTable {
    std::vector<double> omega;   // at uniform s_i = i/(n-1)
    std::vector<double> slope;   // domega/ds at the nodes
};

double hermite_eval(const ScheduleTable& tab, double s) {
    const int n = static_cast<int>(tab.omega.size());
    s = std::clamp(s, 0.0, 1.0);
    int i = std::min(static_cast<int>(s * (n - 1)), n - 2);
    const double h = 1.0 / (n - 1);
    const double u = s / h - i;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * tab.omega[i] + (u3 - 2 * u2 + u) * h * tab.slope[i] +
           (-2 * u3 + 3 * u2) * tab.omega[i + 1] + (u3 - u2) * h * tab.slope[i + 1];
}

struct Scalar1 {
    double v;
    double norm() const { return std::abs(v); }
    Scalar1 operator+(Scalar1 o) const { return {v + o.v}; }
    Scalar1 operator-(Scalar1 o) const { return {v - o.v}; }
    friend Scalar1 operator*(double a, Scalar1 s) { return {a * s.v}; }
};

}  // namespace

Protocol optimal_protocol(double omega0, double omega1, double tau,
                          const QbmParams& params, int n_table) {
    const LengthResult len = thermodynamic_length(omega0, omega1, params);
    const double sgn = (omega1 > omega0) ? 1.0 : -1.0;
    const int n = std::max(n_table, 65);

    auto tab = std::make_shared<ScheduleTable>();
    tab->omega.reserve(n);
    tab->slope.reserve(n);
    std::vector<double> s_nodes(n);
    for (int i = 0; i < n; ++i) s_nodes[i] = static_cast<double>(i) / (n - 1);

    auto rhs = [&](double, const Scalar1& w) -> Scalar1 {
        return {sgn * len.length / std::sqrt(metric_g(w.v, params))};
    };
    IntegrationOptions iopt;
    iopt.rtol = 1e-12;
    iopt.atol = 1e-14;
    integrate_adaptive(rhs, Scalar1{omega0}, 0.0, 1.0, iopt, s_nodes,
                       [&](double, const Scalar1& w) {
                           tab->omega.push_back(w.v);
                           tab->slope.push_back(sgn * len.length /
                                                std::sqrt(metric_g(w.v, params)));
                       });
    if (static_cast<int>(tab->omega.size()) != n)
        throw std::runtime_error("optimal_protocol: sampling failed");

    // pin the endpoint exactly; the residual is at the quadrature tolerance
    const double corr = omega1 - tab->omega.back();
    if (std::abs(corr) > 1e-6 * std::abs(omega1))
        throw std::runtime_error("optimal_protocol: arclength inversion did not close");
    for (int i = 0; i < n; ++i) {
        tab->omega[i] += corr * s_nodes[i];
        tab->slope[i] += corr;
    }

    const double length = len.length;
    return {tau,
            [tab](double s) { return hermite_eval(*tab, s); },
            [tab, params, length, sgn, corr](double s) {
                const double w = hermite_eval(*tab, s);
                return sgn * length / std::sqrt(metric_g(w, params)) + corr;
            }};
}

Protocol limit_protocol(MetricLimit which, double omega0, double omega1, double tau) {
    switch (which) {
        case MetricLimit::HighTUnderdamped:
            return exponential_protocol(omega0, omega1, tau);
        case MetricLimit::HighTOverdamped: {
            const double c = omega0 / omega1 - 1.0;
            return {tau,
                    [omega0, c](double s) { return omega0 / (c * s + 1.0); },
                    [omega0, c](double s) {
                        const double d = c * s + 1.0;
                        return -omega0 * c / (d * d);
                    }};
        }
        case MetricLimit::LowTUnderdamped: {
            const double c = std::sqrt(omega0 / omega1) - 1.0;
            return {tau,
                    [omega0, c](double s) {
                        const double d = 1.0 + c * s;
                        return omega0 / (d * d);
                    },
                    [omega0, c](double s) {
                        const double d = 1.0 + c * s;
                        return -2.0 * omega0 * c / (d * d * d);
                    }};
        }
        case MetricLimit::LowTOverdamped: {
            const double c = std::sqrt(omega1 / omega0) - 1.0;
            return {tau,
                    [omega0, c](double s) {
                        const double d = 1.0 + c * s;
                        return omega0 * d * d;
                    },
                    [omega0, c](double s) { return 2.0 * omega0 * c * (1.0 + c * s); }};
        }
    }
    throw std::invalid_argument("limit_protocol: unknown case");
}

}  // namespace qst
