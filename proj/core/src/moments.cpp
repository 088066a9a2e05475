#include "qst/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "qst/integrate.hpp"
#include "qst/stablemath.hpp"

namespace qst {

MomentGenerator moment_generator(double omega, double beta, double mass, double kappa) {
    const double sech = sech_stable(beta * omega / 2.0);
    MomentGenerator g;
    g.L << -kappa * (1.0 - sech), 2.0 / mass, 0.0,
           -mass * omega * omega, -kappa, 1.0 / mass,
           0.0, -2.0 * mass * omega * omega, -kappa * (1.0 + sech);
    g.f << kappa * std::tanh(beta * omega / 4.0) / (2.0 * mass * omega),
           0.0,
           kappa * mass * omega * coth_stable(beta * omega / 4.0) / 2.0;
    return g;
}

MomentState gamma_equilibrium(double omega, double beta, double mass) {
    const double c = coth_stable(beta * omega / 2.0);
    return MomentState(c / (2.0 * mass * omega), 0.0, mass * omega * c / 2.0);
}

MomentTrajectory evolve_gamma(const Protocol& protocol, const MomentState& gamma0,
                              const QbmParams& params, const GammaEvolveOptions& opt) {
    if (opt.n_samples < 2) throw std::invalid_argument("evolve_gamma: n_samples < 2");
    params.validate();

    std::vector<double> sample_times(opt.n_samples);
    for (int i = 0; i < opt.n_samples; ++i)
        sample_times[i] = protocol.tau * i / (opt.n_samples - 1);

    auto rhs = [&](double t, const MomentState& g) -> MomentState {
        const auto gen = moment_generator(protocol.value_at(t), params.beta, params.mass,
                                          params.kappa);
        return gen.L * g + gen.f;
    };

    MomentTrajectory traj;
    traj.times.reserve(opt.n_samples);
    IntegrationOptions iopt;
    iopt.rtol = opt.rtol;
    integrate_adaptive(rhs, MomentState(gamma0), 0.0, protocol.tau, iopt, sample_times,
                       [&](double t, const MomentState& g) {
                           if (opt.check_uncertainty) {
                               const double det = g(0) * g(2) - g(1) * g(1);
                               if (g(0) <= 0 || g(2) <= 0 || det < 0.25 - 1e-9)
                                   throw IntegrationError(
                                       "evolve_gamma: uncertainty relation violated", t);
                           }
                           traj.times.push_back(t);
                           traj.omega.push_back(protocol.value_at(t));
                           traj.gamma.push_back(g);
                       });
    return traj;
}

std::vector<double> chebyshev_grid(int n) {
    if (n < 2) throw std::invalid_argument("chebyshev_grid: n < 2");
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i)
        s[i] = 0.5 * (1.0 - std::cos(M_PI * i / (n - 1)));
    s.front() = 0.0;
    s.back() = 1.0;
    return s;
}

RealMatrix differentiation_matrix(const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    if (n < 2) throw std::invalid_argument("differentiation_matrix: need >= 2 nodes");
    std::vector<double> w(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) w[i] *= nodes[i] - nodes[j];
    for (auto& wi : w) {
        if (wi == 0.0)
            throw std::invalid_argument("differentiation_matrix: repeated node");
        wi = 1.0 / wi;
    }
    RealMatrix d = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
            diag -= d(i, j);
        }
        d(i, i) = diag;
    }
    return d;
}

std::vector<std::vector<MomentState>> perturbative_expansion(
    const Protocol& protocol, const QbmParams& params, int order,
    const std::vector<double>& s_grid) {
    if (order < 0) throw std::invalid_argument("perturbative_expansion: negative order");
    params.validate();
    const int n = static_cast<int>(s_grid.size());
    if (n < order + 2)
        throw std::invalid_argument("perturbative_expansion: grid too small for order");

    const RealMatrix d_ds = differentiation_matrix(s_grid);

    // The spectral derivative must reproduce the protocol's own rate;
    // otherwise the grid cannot resolve the schedule.
    Eigen::VectorXd omega(n), omega_rate(n);
    for (int i = 0; i < n; ++i) {
        omega(i) = protocol.schedule(s_grid[i]);
        omega_rate(i) = protocol.derivative(s_grid[i]);
    }
    const double defect = (d_ds * omega - omega_rate).cwiseAbs().maxCoeff();
    if (defect > 1e-6 * std::max(1.0, omega_rate.cwiseAbs().maxCoeff()))
        throw std::invalid_argument(
            "perturbative_expansion: grid too coarse for this schedule");

    std::vector<std::vector<MomentState>> result(order + 1,
                                                 std::vector<MomentState>(n));
    std::vector<Eigen::PartialPivLU<Matrix3>> lu;
    lu.reserve(n);
    for (int i = 0; i < n; ++i) {
        result[0][i] = gamma_equilibrium(omega(i), params.beta, params.mass);
        lu.emplace_back(
            moment_generator(omega(i), params.beta, params.mass, params.kappa).L);
    }
    for (int k = 1; k <= order; ++k) {
        // d/dt = (1/tau) d/ds on the node values of the previous order.
        RealMatrix prev(n, 3);
        for (int i = 0; i < n; ++i) prev.row(i) = result[k - 1][i].transpose();
        const RealMatrix deriv = (d_ds * prev) / protocol.tau;
        for (int i = 0; i < n; ++i)
            result[k][i] = lu[i].solve(Vector3(deriv.row(i).transpose()));
    }
    return result;
}

namespace {

double simpson(const std::vector<double>& t, const std::vector<double>& y, int stride) {
    const int n = static_cast<int>(t.size());
    double sum = 0.0;
    for (int i = 0; i + 2 * stride < n; i += 2 * stride) {
        const double h = (t[i + 2 * stride] - t[i]) / 2.0;
        sum += h / 3.0 * (y[i] + 4.0 * y[i + stride] + y[i + 2 * stride]);
    }
    return sum;
}

}  // namespace

WorkResult work_functionals(const MomentTrajectory& traj, const Protocol& protocol,
                            const QbmParams& params) {
    const int n = static_cast<int>(traj.times.size());
    if (n < 5 || (n - 1) % 4 != 0)
        throw std::invalid_argument(
            "work_functionals: need n_samples = 4k+1 for the quadrature check");

    std::vector<double> integrand(n);
    for (int i = 0; i < n; ++i)
        integrand[i] = protocol.rate_at(traj.times[i]) * params.mass * traj.omega[i] *
                       traj.gamma[i](0);

    const double w_full = simpson(traj.times, integrand, 1);
    const double w_half = simpson(traj.times, integrand, 2);
    if (std::abs(w_full - w_half) > 1e-6 * std::max(1.0, std::abs(w_full)))
        throw std::runtime_error("work_functionals: quadrature grid too coarse");

    WorkResult r;
    r.work = w_full;
    r.work_eq = qbm_free_energy_change(traj.omega.front(), traj.omega.back(), params.beta);
    r.work_excess = r.work - r.work_eq;
    return r;
}

double qbm_free_energy_change(double omega0, double omega1, double beta) {
    // ln sinh(x) = x + ln(1 - e^{-2x}) - ln 2; the ln 2 cancels in the difference.
    auto ln_sinh = [](double x) { return x + std::log1p(-std::exp(-2.0 * x)); };
    const double x0 = beta * omega0 / 2.0, x1 = beta * omega1 / 2.0;
    return (ln_sinh(x1) - ln_sinh(x0)) / beta;
}

}  // namespace qst
