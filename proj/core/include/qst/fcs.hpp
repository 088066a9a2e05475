#pragma once

#include <functional>
#include <vector>

#include "qst/models.hpp"
#include "qst/protocol.hpp"
#include "qst/types.hpp"

namespace qst {

/// Counting fields of the tilted generator: u couples to the driving
/// (work), v[nu] to the heat current of dissipator nu (positive heat =
/// absorbed by the system). Empty v means all zero.
struct CountingFields {
    double u = 0.0;
    std::vector<double> v;

    double v_at(std::size_t nu) const { return nu < v.size() ? v[nu] : 0.0; }

    /// Exponent guard: |v_nu| * ||H|| <= 200 for every global scaling
    /// factor the tilted evolution materializes. Beyond that the
    /// conjugations amplify rounding noise past any useful accuracy. The
    /// work field u never meets ||H|| globally in the integrated (eta)
    /// form; its exponents see only the level differences bridged by the
    /// drive operator, guarded inside dexp_factor.
    void validate(double hamiltonian_norm, std::size_t n_dissipators) const;
};

struct FcsOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    int n_samples = 101;
    bool static_hamiltonian = false;   // skip per-step re-diagonalization
    /// Called at sample times with the tilted state eta(t).
    std::function<void(double, const Matrix&)> eta_observer;
};

struct FcsResult {
    Complex chi;
    double hamiltonian_norm;   // max |E| over sampled H(t), for diagnostics
};

/// RHS of the tilted evolution in the plain (eta) gauge:
/// -i[H,eta] + X eta + eta X^dag + sum_nu e^{v H/2} D_nu[e^{-v H/2} eta e^{-v H/2}] e^{v H/2}
/// with X = (d/dt e^{uH/2}) e^{-uH/2}.
Matrix tilted_rhs_eta(const ModelSpec& model, const Protocol& protocol, double t,
                      const CountingFields& fields, const Matrix& eta);

/// RHS after the gauge change eta = e^{uH/2} sigma e^{uH/2}, which removes
/// the operator-derivative term exactly:
/// -i[H,sigma] + sum_nu e^{(v-u)H/2} D_nu[e^{(u-v)H/2} sigma e^{(u-v)H/2}] e^{(v-u)H/2}.
/// Kept for cross-checks; as an integration variable sigma is numerically
/// unstable at large |u| * ||H||, because its global scale factors multiply
/// floating-point noise by e^{|u| E_max} while the eta form only ever
/// exponentiates the level differences bridged by the (banded) operators.
Matrix tilted_rhs_sigma(const ModelSpec& model, const Protocol& protocol, double t,
                        const CountingFields& fields, const Matrix& sigma);

/// chi = tr eta(tau) for initial state rho0, integrated in the plain (eta)
/// gauge for the numerical stability reason above.
FcsResult characteristic_function(const ModelSpec& model, const Protocol& protocol,
                                  const Matrix& rho0, const CountingFields& fields,
                                  const FcsOptions& opt = {});

struct WorkMoments {
    double mean;
    double variance;
    double mean_coarse;       // same stencils at doubled step
    double variance_coarse;
    bool consistent;          // fine vs coarse agree to the requested tolerance
    double step;
};

/// First two work cumulants from ln chi(u) by five-point central
/// differences at u = 0, with a doubled-step consistency check.
/// step = 0 picks ~1e-3 / ||H||.
WorkMoments work_moments(const ModelSpec& model, const Protocol& protocol,
                         const Matrix& rho0, double step = 0.0,
                         const FcsOptions& opt = {}, double consistency_rtol = 1e-4);

/// Delta F between the Gibbs states of H(lambda(tau)) and H(lambda(0)),
/// both in the same truncated basis.
double free_energy_change(const ModelSpec& model, const Protocol& protocol, double beta);

struct FtReport {
    Complex chi;
    double beta_s;
    double delta_f;
    double deviation;           // |chi e^{beta_s dF} - 1|
    double max_state_defect;    // worst ||eta(t) - e^{-beta_s H(t)}/Z_i|| / ||.||
};

/// Integral fluctuation relation at the conjugate point u = -beta_s,
/// v_nu = -(beta_s - beta_nu), starting from the Gibbs state of H(lambda(0)).
/// There the tilted state stays exactly Boltzmann, which the per-sample
/// defect tracks.
FtReport ft_report(const ModelSpec& model, const Protocol& protocol, double beta_s,
                   const FcsOptions& opt = {});

}  // namespace qst
