#pragma once

// Reference implementations for the test suite. These are deliberately
// independent of the library code paths they check: the matrix exponential
// is scaling-and-squaring with a Taylor kernel, and the Gaussian work
// statistics come from a tilted covariance flow rather than any Fock-space
// machinery.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qst/types.hpp"

namespace testsupport {

using qst::Matrix;

inline Matrix expm(const Matrix& m) {
    const double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    Matrix a = m / std::ldexp(1.0, s);
    const auto n = m.rows();
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k < 60; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
        if (term.norm() <= 1e-18 * result.norm()) break;
    }
    for (int i = 0; i < s; ++i) result = (result * result).eval();
    return result;
}

inline Matrix random_matrix(Eigen::Index n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = qst::Complex(dist(gen), dist(gen));
    return m;
}

inline Matrix random_hermitian(Eigen::Index n, unsigned seed) {
    Matrix m = random_matrix(n, seed);
    return 0.5 * (m + m.adjoint()).eval();
}

inline Matrix random_density(Eigen::Index n, unsigned seed) {
    Matrix g = random_matrix(n, seed);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

// ---------------------------------------------------------------------------
// Gaussian work statistics.
//
// For a zero-mean Gaussian phase-space flow dz = M(t) z dt + noise with
// covariance C' = M C + C M^T + 2D, counting the work of a frequency drive
// weights trajectories by exp(u int q(t) x_t^2 dt) with q = m omega
// omega_dot. The weighted state stays Gaussian; its covariance obeys a
// Riccati equation and the log of the weight's normalization accumulates:
//   C' = M C + C M^T + 2D + 2 u q C E11 C,   (ln chi)' = u q C_11.
// ---------------------------------------------------------------------------

struct GaussKernel {
    std::function<Eigen::Matrix2d(double)> drift;       // M(t)
    std::function<Eigen::Matrix2d(double)> diffusion;   // D(t)
    std::function<double(double)> work_weight;          // q(t), per unit time
};

struct GaussFlowResult {
    double log_chi;
    Eigen::Matrix2d cov;
};

inline GaussFlowResult tilted_gauss_flow(const GaussKernel& k, Eigen::Matrix2d c0,
                                         double u, double tau, int steps = 20000) {
    using V4 = Eigen::Vector4d;   // (c11, c12, c22, ln chi)
    auto rhs = [&](double t, const V4& y) -> V4 {
        Eigen::Matrix2d c;
        c << y(0), y(1), y(1), y(2);
        const Eigen::Matrix2d m = k.drift(t);
        const double q = k.work_weight(t);
        Eigen::Matrix2d cd = m * c + c * m.transpose() + 2.0 * k.diffusion(t);
        cd += 2.0 * u * q * (c.col(0) * c.row(0));
        return V4(cd(0, 0), cd(0, 1), cd(1, 1), u * q * c(0, 0));
    };
    V4 y(c0(0, 0), c0(0, 1), c0(1, 1), 0.0);
    const double h = tau / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = h * i;
        const V4 k1 = rhs(t, y);
        const V4 k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const V4 k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const V4 k4 = rhs(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    GaussFlowResult r;
    r.log_chi = y(3);
    r.cov << y(0), y(1), y(1), y(2);
    return r;
}

struct GaussWorkMoments {
    double mean;
    double variance;
};

/// First two cumulants from five-point central differences of ln chi(u).
inline GaussWorkMoments gauss_work_moments(const GaussKernel& k, const Eigen::Matrix2d& c0,
                                           double tau, double step, int steps = 20000) {
    auto lc = [&](double u) { return tilted_gauss_flow(k, c0, u, tau, steps).log_chi; };
    const double f2 = lc(2 * step), f1 = lc(step), fm1 = lc(-step), fm2 = lc(-2 * step);
    GaussWorkMoments m;
    m.mean = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * step);
    m.variance = (-f2 + 16 * f1 - 30 * lc(0.0) + 16 * fm1 - fm2) / (12 * step * step);
    return m;
}

/// Work variance from the second-cumulant double integral
///   Var = int int q(t) q(s) 2 c(t,s)^2 dt ds,  c(t,s) = [Phi(t,s) C(s)]_00,
/// an independent check on the tilted flow above.
inline double gauss_work_variance_2pt(const GaussKernel& k, Eigen::Matrix2d c0,
                                      double tau, int n_grid = 240) {
    const double h = tau / n_grid;
    auto cov_rhs = [&](double t, const Eigen::Matrix2d& c) -> Eigen::Matrix2d {
        const Eigen::Matrix2d m = k.drift(t);
        return m * c + c * m.transpose() + 2.0 * k.diffusion(t);
    };
    std::vector<Eigen::Matrix2d> cov(n_grid + 1);
    cov[0] = c0;
    for (int i = 0; i < n_grid; ++i) {
        const double t = h * i;
        Eigen::Matrix2d c = cov[i];
        const Eigen::Matrix2d k1 = cov_rhs(t, c);
        const Eigen::Matrix2d k2 = cov_rhs(t + 0.5 * h, c + 0.5 * h * k1);
        const Eigen::Matrix2d k3 = cov_rhs(t + 0.5 * h, c + 0.5 * h * k2);
        const Eigen::Matrix2d k4 = cov_rhs(t + h, c + h * k3);
        cov[i + 1] = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // trapezoid weight times the work weight at each node
    std::vector<double> b(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i)
        b[i] = ((i == 0 || i == n_grid) ? 0.5 * h : h) * k.work_weight(h * i);

    double var = 0.0;
    for (int j = 0; j <= n_grid; ++j) {
        Eigen::Vector2d w = cov[j].col(0);   // Phi(t,s) C(s) e1, starting at t = s
        double inner = b[j] * 2.0 * w(0) * w(0);   // diagonal term, counted once
        for (int i = j + 1; i <= n_grid; ++i) {
            const double t = h * (i - 1);
            const Eigen::Matrix2d m1 = k.drift(t);
            const Eigen::Matrix2d m2 = k.drift(t + 0.5 * h);
            const Eigen::Matrix2d m3 = k.drift(t + h);
            const Eigen::Vector2d k1 = m1 * w;
            const Eigen::Vector2d k2 = m2 * (w + 0.5 * h * k1);
            const Eigen::Vector2d k3 = m2 * (w + 0.5 * h * k2);
            const Eigen::Vector2d k4 = m3 * (w + h * k3);
            w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            inner += 2.0 * b[i] * 2.0 * w(0) * w(0);   // both orderings of (t, s)
        }
        var += b[j] * inner;
    }
    return var;
}

/// Drift/diffusion pair of the refined Brownian oscillator in covariance
/// form, with the frequency driven in time.
inline GaussKernel quantum_kernel(std::function<double(double)> omega_of_t,
                                  std::function<double(double)> omega_rate,
                                  double beta, double mass, double kappa) {
    GaussKernel k;
    k.drift = [=](double t) {
        const double w = omega_of_t(t);
        const double sech = 1.0 / std::cosh(beta * w / 2.0);
        Eigen::Matrix2d m;
        m << -0.5 * kappa * (1.0 - sech), 1.0 / mass,
             -mass * w * w, -0.5 * kappa * (1.0 + sech);
        return m;
    };
    k.diffusion = [=](double t) {
        const double w = omega_of_t(t);
        const double y = beta * w / 4.0;
        Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
        d(0, 0) = kappa * std::tanh(y) / (4.0 * mass * w);
        d(1, 1) = kappa * mass * w / (4.0 * std::tanh(y));
        return d;
    };
    k.work_weight = [=](double t) { return mass * omega_of_t(t) * omega_rate(t); };
    return k;
}

/// Classical Kramers limit: friction acts on momentum only and the noise
/// strength is set by equipartition.
inline GaussKernel classical_kernel(std::function<double(double)> omega_of_t,
                                    std::function<double(double)> omega_rate,
                                    double beta, double mass, double kappa) {
    GaussKernel k;
    k.drift = [=](double t) {
        const double w = omega_of_t(t);
        Eigen::Matrix2d m;
        m << 0.0, 1.0 / mass, -mass * w * w, -kappa;
        return m;
    };
    k.diffusion = [=](double) {
        Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
        d(1, 1) = kappa * mass / beta;
        return d;
    };
    k.work_weight = [=](double t) { return mass * omega_of_t(t) * omega_rate(t); };
    return k;
}

/// Classical equilibrium covariance diag(1/(beta m w^2), m/beta).
inline Eigen::Matrix2d classical_equilibrium(double omega, double beta, double mass) {
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    c(0, 0) = 1.0 / (beta * mass * omega * omega);
    c(1, 1) = mass / beta;
    return c;
}

}  // namespace testsupport
