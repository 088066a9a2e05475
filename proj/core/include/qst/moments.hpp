#pragma once

#include <vector>

#include "qst/models.hpp"
#include "qst/protocol.hpp"
#include "qst/types.hpp"

namespace qst {

/// Reduced observable vector (Gamma_x2, Gamma_xp, Gamma_p2) for the
/// observables x^2, (xp+px)/2, p^2. The Brownian-oscillator dynamics is
/// closed and exactly linear in these.
using MomentState = Vector3;

struct MomentGenerator {
    Matrix3 L;
    Vector3 f;
};

/// Linear part and noise vector of Gamma' = L Gamma + f for the refined
/// Brownian oscillator.
MomentGenerator moment_generator(double omega, double beta, double mass, double kappa);

/// Equilibrium moments (coth(bw/2)/(2mw), 0, m w coth(bw/2)/2).
MomentState gamma_equilibrium(double omega, double beta, double mass);

struct MomentTrajectory {
    std::vector<double> times;
    std::vector<double> omega;
    std::vector<MomentState> gamma;
};

struct GammaEvolveOptions {
    int n_samples = 201;
    double rtol = 1e-10;
    bool check_uncertainty = true;
};

MomentTrajectory evolve_gamma(const Protocol& protocol, const MomentState& gamma0,
                              const QbmParams& params, const GammaEvolveOptions& opt = {});

/// Chebyshev-Lobatto nodes mapped to [0,1], ascending.
std::vector<double> chebyshev_grid(int n);

/// Polynomial differentiation matrix for distinct nodes (barycentric form).
RealMatrix differentiation_matrix(const std::vector<double>& nodes);

/// Slow-driving expansion: Gamma^(0)(s) = Gamma_eq(omega(s)) and
/// Gamma^(k) = L^{-1} d Gamma^(k-1)/dt, with the time derivative taken
/// spectrally on the node set. result[k][i] is order k at node i.
std::vector<std::vector<MomentState>> perturbative_expansion(
    const Protocol& protocol, const QbmParams& params, int order,
    const std::vector<double>& s_grid);

struct WorkResult {
    double work;
    double work_eq;
    double work_excess;
};

/// W = int omega_dot m omega Gamma_x2 dt (composite Simpson with a
/// grid-doubling error check), W_eq from the analytic oscillator free
/// energy, W_ex = W - W_eq.
WorkResult work_functionals(const MomentTrajectory& traj, const Protocol& protocol,
                            const QbmParams& params);

/// (1/beta) ln(sinh(beta w1/2)/sinh(beta w0/2)), evaluated in log space.
double qbm_free_energy_change(double omega0, double omega1, double beta);

}  // namespace qst
