#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qst/opcore.hpp"
#include "qst/types.hpp"

namespace qst {

/// Quantum Brownian oscillator: H = p^2/2m + m w^2 x^2/2 with friction
/// kappa against a single bath at inverse temperature beta. omega is the
/// control parameter.
struct QbmParams {
    double mass = 1.0;
    double kappa = 1.0;
    double beta = 1.0;
    double omega = 1.0;

    void validate() const;
};

struct QubitParams {
    double omega;   // level splitting
    double gamma;   // coupling rate
    double beta;

    void validate() const;
};

/// One GKSL term (K, A, rate) tied to a bath at inverse temperature beta.
struct Dissipator {
    Matrix K;
    Matrix A;
    double rate;
    double beta;
};

/// A model family over a scalar control parameter lambda. Each dissipator
/// annihilates the Gibbs state of H(lambda) at its own beta (local
/// detailed balance); the dissipators follow the drive instantaneously.
///
/// frame_generator, when set, marks the model as expressed in a co-moving
/// basis U(t) matched to the instantaneous control, and returns
/// W = dU/dt U^dag (anti-Hermitian) for the given (lambda, dlambda/dt).
/// Evolution then picks up the frame term [W, rho]. All operators of a
/// matched model are banded with bounded entries, which keeps the tilted
/// (counting-field) evolution stable; in a fixed basis the truncated
/// tilted generator grows mixing terms like e^{|u| omega dn} against the
/// basis-overlap decay and acquires genuinely explosive modes at large dim.
struct ModelSpec {
    BasisSpec basis;
    std::function<Matrix(double)> hamiltonian;
    std::function<Matrix(double)> hamiltonian_derivative;
    std::function<std::vector<Dissipator>(double)> dissipators;
    std::function<Matrix(double, double)> frame_generator;
    std::vector<std::pair<std::string, Matrix>> observables;
};

Matrix qbm_hamiltonian(const QbmParams& params, const BasisSpec& basis,
                       const FockOperators& ops);

/// The detailed-balance pair of the refined Brownian dissipator:
/// K = sech(bw/2) (xp+px)/2,  A = sqrt(m w coth(bw/4)) x + i sqrt(tanh(bw/4)/(m w)) p.
/// When the basis frequency matches params.omega, A is assembled directly
/// on the ladder operators with cancellation-free coefficients.
std::pair<Matrix, Matrix> qbm_dissipator_ops(const QbmParams& params,
                                             const BasisSpec& basis,
                                             const FockOperators& ops);

/// ModelSpec with lambda = omega. The Fock operators are built once at
/// basis.omega_ref; only coefficients follow the control.
ModelSpec qbm_model(const QbmParams& params, const BasisSpec& basis);

/// Same family in the co-moving squeezed frame that keeps the ladder basis
/// matched to omega(t): H = omega (n + 1/2) stays diagonal, the jump
/// operator stays bidiagonal, and the frame term is
/// W = (omega_dot / 4 omega) (a_dag^2 - a^2). States and observables live
/// in the moving frame; traces (chi, work cumulants) are frame-invariant.
ModelSpec qbm_comoving_model(const QbmParams& params, int dim);

/// Thermal qubit: two jump terms with downward rate gamma(nbar+1) and
/// upward rate gamma nbar, K = 0. Exact detailed balance at dim = 2.
std::vector<Dissipator> qubit_thermal_dissipators(const QubitParams& params);

/// Qubit model with lambda = level splitting; ground state is index 0.
/// Extra baths (for heat-exchange scenarios) can be appended by the caller.
ModelSpec qubit_model(const QubitParams& params);

struct GibbsState {
    Matrix rho;
    double log_z;
};

/// e^{-beta H}/Z computed with the ground-energy shift.
GibbsState gibbs_state(const Matrix& hamiltonian, double beta);
GibbsState gibbs_state(const HermitianEig& h, double beta);

}  // namespace qst
