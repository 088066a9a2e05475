#pragma once

#include <iosfwd>
#include <vector>

#include "qst/integrate.hpp"
#include "qst/models.hpp"
#include "qst/protocol.hpp"

namespace qst {

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
    std::vector<std::string> observable_names;   // model observables + "energy"
    RealMatrix observables;                      // n_samples x n_obs
    std::vector<double> trace_real;
    std::vector<double> min_eigenvalue;
};

/// Full generator: -i[H(lambda), rho] + sum_nu D_nu[rho].
Matrix generator_apply(const ModelSpec& model, double lambda, const Matrix& rho);

/// Heisenberg-picture adjoint of one GKSL term.
Matrix adjoint_dissipator_apply(const Dissipator& d, const Matrix& obs);

struct EvolveOptions {
    int n_samples = 101;
    double rtol = 1e-8;
    double trace_tol = 1e-10;
    double positivity_floor = -1e-8;
    bool check_invariants = true;
};

Trajectory evolve(const ModelSpec& model, const Protocol& protocol, const Matrix& rho0,
                  const EvolveOptions& opt = {});

/// Dense N^2 x N^2 matrix of a superoperator (column-major vec convention).
template <class Map>
Matrix build_superoperator(const Map& map, int dim) {
    Matrix sop(dim * dim, dim * dim);
    Matrix e = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            e(i, j) = 1.0;
            Matrix out = map(e);
            e(i, j) = 0.0;
            sop.col(j * dim + i) = Eigen::Map<const Eigen::VectorXcd>(out.data(), dim * dim);
        }
    }
    return sop;
}

struct SteadyStateOptions {
    // Above this many vectorized unknowns, fall back to long-time integration.
    int max_dense_unknowns = 10000;
    double residual_tol = 1e-10;
    double relax_time_factor = 20.0;   // integrate to relax_time_factor / slowest rate
    bool check_degeneracy = false;
};

Matrix steady_state(const ModelSpec& model, double lambda,
                    const SteadyStateOptions& opt = {});

struct ResidualOptions {
    // Levels (counted from the top of the spectrum) excluded from the
    // comparison; rho^{-1/2} amplifies truncation noise there.
    int drop_top_levels = -1;          // -1 = 10% of dim
    double min_population = 1e-280;    // floor on Gibbs eigenvalues actually used
    int power_iterations = 200;
};

/// Detailed-balance defect of one GKSL term with respect to rho_beta. The
/// half-power conjugation condition
///   D_adj[X] = rho^{-1/2} D[rho^{1/2} X rho^{1/2}] rho^{-1/2}
/// is equivalent to Hermiticity of the quarter-power symmetrized map
/// rho^{-1/4} D[rho^{1/4} . rho^{1/4}] rho^{-1/4}; the returned value is
/// that map's relative Hermiticity defect in operator norm. Boltzmann
/// factors are combined entrywise in log space, so extreme beta never
/// materializes e^{+-beta H} directly.
///
/// Detailed balance is a per-bath property: pass all terms coupled to one
/// bath together (a one-directional jump pair balances only jointly). The
/// single-term overloads cover baths with one self-balanced term.
double detailed_balance_residual(const std::vector<Dissipator>& diss,
                                 const Matrix& rho_beta, const ResidualOptions& opt = {});
double detailed_balance_residual(const std::vector<Dissipator>& diss,
                                 const HermitianEig& hamiltonian_eig, double beta,
                                 const ResidualOptions& opt = {});
double detailed_balance_residual(const Dissipator& d, const Matrix& rho_beta,
                                 const ResidualOptions& opt = {});
double detailed_balance_residual(const Dissipator& d, const HermitianEig& hamiltonian_eig,
                                 double beta, const ResidualOptions& opt = {});

/// || D[rho_beta] || restricted to the truncation-safe block; the vector
/// form sums one bath's terms first.
double dissipator_gibbs_defect(const std::vector<Dissipator>& diss, const Matrix& rho_beta,
                               int drop_top_levels = -1);
double dissipator_gibbs_defect(const Dissipator& d, const Matrix& rho_beta,
                               int drop_top_levels = -1);

/// Choi matrix of the jump part X -> A X A^dag (dense; small dims only).
Matrix jump_choi_matrix(const Matrix& A);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool minimal_columns = false);

}  // namespace qst
