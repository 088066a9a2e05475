#include "qst/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace qst {

Matrix generator_apply(const ModelSpec& model, double lambda, const Matrix& rho) {
    Matrix H = model.hamiltonian(lambda);
    if (H.rows() != rho.rows())
        throw std::invalid_argument("generator_apply: dimension mismatch");
    Matrix out = -I * commutator(H, rho);
    for (const auto& d : model.dissipators(lambda))
        out += apply_gksl_dissipator(d.K, d.A, d.rate, rho);
    return out;
}

Matrix adjoint_dissipator_apply(const Dissipator& d, const Matrix& obs) {
    Matrix AdA = d.A.adjoint() * d.A;
    Matrix out = I * commutator(d.K, obs);
    out.noalias() += d.A.adjoint() * obs * d.A;
    out -= 0.5 * anticommutator(AdA, obs);
    return 0.5 * d.rate * out;
}

Trajectory evolve(const ModelSpec& model, const Protocol& protocol, const Matrix& rho0,
                  const EvolveOptions& opt) {
    validate_protocol(protocol);
    if (opt.n_samples < 2) throw std::invalid_argument("evolve: need at least 2 samples");

    const int n_obs = int(model.observables.size());
    Trajectory traj;
    for (const auto& [name, op] : model.observables) traj.observable_names.push_back(name);
    traj.observable_names.push_back("energy");
    traj.observables.resize(opt.n_samples, n_obs + 1);

    std::vector<double> samples(opt.n_samples);
    for (int k = 0; k < opt.n_samples; ++k)
        samples[k] = protocol.tau * k / double(opt.n_samples - 1);

    auto rhs = [&](double t, const Matrix& rho) {
        Matrix out = generator_apply(model, protocol.value_at(t), rho);
        const double rate = protocol.rate_at(t);
        if (model.frame_generator && rate != 0.0)
            out += commutator(model.frame_generator(protocol.value_at(t), rate), rho);
        return out;
    };

    Eigen::SelfAdjointEigenSolver<Matrix> es;
    auto record = [&](double t, const Matrix& rho) {
        const int k = int(traj.times.size());
        const double tr = rho.trace().real();
        es.compute(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (opt.check_invariants) {
            if (std::abs(rho.trace() - Complex(1.0)) > opt.trace_tol)
                throw IntegrationError("evolve: trace drift beyond tolerance", t);
            if (min_eig < opt.positivity_floor)
                throw IntegrationError("evolve: positivity violated", t);
            if (hermiticity_defect(rho) > 1e-10)
                throw IntegrationError("evolve: hermiticity lost", t);
        }
        traj.times.push_back(t);
        traj.states.push_back(rho);
        traj.trace_real.push_back(tr);
        traj.min_eigenvalue.push_back(min_eig);
        for (int j = 0; j < n_obs; ++j)
            traj.observables(k, j) = (rho * model.observables[j].second).trace().real();
        Matrix H = model.hamiltonian(protocol.value_at(t));
        traj.observables(k, n_obs) = (rho * H).trace().real();
    };

    IntegrationOptions iopt;
    iopt.rtol = opt.rtol;
    integrate_adaptive(rhs, rho0, 0.0, protocol.tau, iopt, samples, record);
    return traj;
}

namespace {

Matrix steady_state_dense(const ModelSpec& model, double lambda, int dim,
                          const SteadyStateOptions& opt) {
    auto map = [&](const Matrix& x) { return generator_apply(model, lambda, x); };
    Matrix G = build_superoperator(map, dim);

    auto solve_with_row = [&](int row) {
        Matrix M = G;
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim * dim);
        for (int i = 0; i < dim; ++i) M(row, i * dim + i) = M(row, i * dim + i) + 1.0;
        // The replaced equation reads tr(rho) + (G rho)_row = 1; for a
        // generator null vector both constraints hold simultaneously.
        rhs(row) = 1.0;
        Eigen::VectorXcd v = M.partialPivLu().solve(rhs);
        Matrix rho = Eigen::Map<Matrix>(v.data(), dim, dim);
        rho = 0.5 * (rho + rho.adjoint());
        rho /= rho.trace().real();
        return rho;
    };

    Matrix rho = solve_with_row(0);
    const double res = generator_apply(model, lambda, rho).norm();
    if (res > opt.residual_tol)
        throw std::runtime_error("steady_state: residual " + std::to_string(res) +
                                 " exceeds tolerance (possibly degenerate null space)");
    if (opt.check_degeneracy) {
        Matrix rho2 = solve_with_row(dim * dim / 2);
        if ((rho - rho2).norm() > 1e-8)
            throw std::runtime_error("steady_state: degenerate null space (multiplicity > 1)");
    }
    return rho;
}

Matrix steady_state_longtime(const ModelSpec& model, double lambda, int dim,
                             const SteadyStateOptions& opt) {
    double min_rate = std::numeric_limits<double>::infinity();
    for (const auto& d : model.dissipators(lambda)) min_rate = std::min(min_rate, d.rate);
    const double t_end = opt.relax_time_factor / min_rate;

    Matrix rho = Matrix::Identity(dim, dim) / double(dim);
    auto rhs = [&](double, const Matrix& x) { return generator_apply(model, lambda, x); };
    IntegrationOptions iopt;
    iopt.rtol = 1e-10;
    const int chunks = 10;
    for (int c = 0; c < chunks; ++c) {
        Matrix next;
        integrate_adaptive(rhs, rho, 0.0, t_end / chunks, iopt, {t_end / chunks},
                           [&](double, const Matrix& y) { next = y; });
        rho = 0.5 * (next + next.adjoint());
        rho /= rho.trace().real();
        if (generator_apply(model, lambda, rho).norm() <= 1e-9) return rho;
    }
    throw std::runtime_error("steady_state: long-time integration did not reach stationarity");
}

}  // namespace

Matrix steady_state(const ModelSpec& model, double lambda, const SteadyStateOptions& opt) {
    const int dim = int(model.hamiltonian(lambda).rows());
    if (dim * dim <= opt.max_dense_unknowns)
        return steady_state_dense(model, lambda, dim, opt);
    return steady_state_longtime(model, lambda, dim, opt);
}

namespace {

/// Superoperator as a sum of sandwich terms c L X R, with its
/// Hilbert-Schmidt adjoint available analytically.
struct SandwichSum {
    struct Term {
        Complex c;
        Matrix left, right;
    };
    std::vector<Term> terms;

    Matrix apply(const Matrix& x) const {
        Matrix out = Matrix::Zero(x.rows(), x.cols());
        for (const auto& t : terms) out.noalias() += t.c * (t.left * x * t.right);
        return out;
    }
    SandwichSum adjoint() const {
        SandwichSum a;
        for (const auto& t : terms)
            a.terms.push_back({std::conj(t.c), t.left.adjoint(), t.right.adjoint()});
        return a;
    }
};

/// Entrywise M_{ki} * exp(sign (b_k - b_i)); throws if a surviving entry
/// overflows, zeroes entries that underflow.
Matrix boltzmann_scale(const Matrix& m, const Eigen::VectorXd& b, double sign) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            const double mag = std::abs(m(k, i));
            if (mag == 0.0) {
                out(k, i) = 0.0;
                continue;
            }
            const double lg = std::log(mag) + sign * (b(k) - b(i));
            if (lg > 700.0)
                throw std::runtime_error(
                    "detailed_balance_residual: Boltzmann conjugation overflows; "
                    "reduce beta or the truncation dimension");
            out(k, i) = (lg < -745.0) ? Complex(0.0)
                                      : Complex(m(k, i) / mag * std::exp(lg));
        }
    }
    return out;
}

double superop_norm_power(const SandwichSum& g, int dim, int iters) {
    SandwichSum gadj = g.adjoint();
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    Matrix v(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b2 = 0; b2 < dim; ++b2) v(a, b2) = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        Matrix w = gadj.apply(g.apply(v));
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        const double lam_new = nw;  // Rayleigh quotient of g^dag g at unit v
        w /= nw;
        if (it > 20 && std::abs(lam_new - lam) < 1e-8 * lam_new) {
            lam = lam_new;
            break;
        }
        lam = lam_new;
        v = std::move(w);
    }
    return std::sqrt(lam);
}

double residual_impl(const std::vector<Dissipator>& diss, const Matrix& basis,
                     const Eigen::VectorXd& b, const ResidualOptions& opt) {
    if (diss.empty())
        throw std::invalid_argument("detailed_balance_residual: no dissipator terms");
    const int dim = int(basis.rows());
    const int drop = (opt.drop_top_levels < 0) ? dim / 10 : opt.drop_top_levels;
    const int n_keep = dim - drop;
    if (n_keep < 2)
        throw std::invalid_argument("detailed_balance_residual: nothing left after projection");

    // Restricting every sandwich factor to the kept block up front is the
    // exact projection P M[P X P] P (only kept rows and columns of the
    // factors ever touch a kept-supported X), and it keeps the Boltzmann
    // overflow guard away from entries that would be projected out anyway.
    // A^dag A is formed on the full space first so paths through dropped
    // levels stay in the map.
    //
    // The half-power conjugation condition is equivalent to Hermiticity of
    // the quarter-power symmetrized map
    //   T[X] = rho^{-1/4} D[rho^{1/4} X rho^{1/4}] rho^{-1/4}
    // (diagonal similarity of the superoperator matrix). T is the form to
    // compute: its factors carry Boltzmann weights of at most e^{b_k - b_i}
    // over half the level distance, and the drift and decay parts are
    // combined per entry before scaling, so the e^{+x} * O(e^{-x})
    // coefficient cancellations happen at unscaled magnitudes instead of
    // between exponentially amplified terms. All terms of one bath go into
    // a single map: one-directional jump pairs (A and A^dag with rates in
    // the Boltzmann ratio) balance only jointly.
    const Matrix id = Matrix::Identity(n_keep, n_keep);
    Eigen::VectorXd b4 = 0.5 * b.head(n_keep);
    SandwichSum t;
    for (const auto& d : diss) {
        Matrix Kf = basis.adjoint() * d.K * basis;
        Matrix Af = basis.adjoint() * d.A * basis;
        Matrix AdAf = Af.adjoint() * Af;
        Matrix K = Kf.topLeftCorner(n_keep, n_keep);
        Matrix A = Af.topLeftCorner(n_keep, n_keep);
        Matrix AdA = AdAf.topLeftCorner(n_keep, n_keep);
        const Matrix drift_left = -0.5 * I * K - 0.25 * AdA;   // rate * (.) X
        const Matrix drift_right = 0.5 * I * K - 0.25 * AdA;   // rate * X (.)
        t.terms.push_back({d.rate, boltzmann_scale(drift_left, b4, +1.0), id});
        t.terms.push_back({d.rate, id, boltzmann_scale(drift_right, b4, -1.0)});
        t.terms.push_back({0.5 * d.rate, boltzmann_scale(A, b4, +1.0),
                           boltzmann_scale(A.adjoint(), b4, -1.0)});
    }

    SandwichSum diff = t;
    for (auto term : t.adjoint().terms) {
        term.c = -term.c;
        diff.terms.push_back(std::move(term));
    }

    const double denom = superop_norm_power(t, n_keep, opt.power_iterations);
    if (denom == 0.0) return 0.0;
    return superop_norm_power(diff, n_keep, opt.power_iterations) / denom;
}

}  // namespace

double detailed_balance_residual(const std::vector<Dissipator>& diss,
                                 const HermitianEig& h, double beta,
                                 const ResidualOptions& opt) {
    Eigen::VectorXd b = 0.5 * beta * (h.values.array() - h.values.minCoeff());
    return residual_impl(diss, h.vectors, b, opt);
}

double detailed_balance_residual(const Dissipator& d, const HermitianEig& h, double beta,
                                 const ResidualOptions& opt) {
    return detailed_balance_residual(std::vector<Dissipator>{d}, h, beta, opt);
}

double detailed_balance_residual(const std::vector<Dissipator>& diss,
                                 const Matrix& rho_beta, const ResidualOptions& opt) {
    HermitianEig eig = hermitian_eig(rho_beta, 1e-10);
    // reorder so populations descend (b ascending), matching the Fock-level
    // convention used for the truncation-safe projection
    const int dim = int(rho_beta.rows());
    Eigen::VectorXd pops(dim);
    Matrix basis(dim, dim);
    for (int i = 0; i < dim; ++i) {
        pops(i) = eig.values(dim - 1 - i);
        basis.col(i) = eig.vectors.col(dim - 1 - i);
    }
    if (pops.minCoeff() < opt.min_population)
        throw std::invalid_argument(
            "detailed_balance_residual: rho_beta numerically singular; "
            "reduce beta or the truncation dimension");
    Eigen::VectorXd b = -0.5 * (pops.array() / pops.maxCoeff()).log();
    return residual_impl(diss, basis, b, opt);
}

double detailed_balance_residual(const Dissipator& d, const Matrix& rho_beta,
                                 const ResidualOptions& opt) {
    return detailed_balance_residual(std::vector<Dissipator>{d}, rho_beta, opt);
}

double dissipator_gibbs_defect(const std::vector<Dissipator>& diss, const Matrix& rho_beta,
                               int drop_top_levels) {
    const int dim = int(rho_beta.rows());
    const int drop = (drop_top_levels < 0) ? dim / 10 : drop_top_levels;
    const int n_keep = dim - drop;
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& d : diss) out += apply_gksl_dissipator(d.K, d.A, d.rate, rho_beta);
    return out.topLeftCorner(n_keep, n_keep).norm();
}

double dissipator_gibbs_defect(const Dissipator& d, const Matrix& rho_beta,
                               int drop_top_levels) {
    return dissipator_gibbs_defect(std::vector<Dissipator>{d}, rho_beta, drop_top_levels);
}

Matrix jump_choi_matrix(const Matrix& A) {
    const int dim = int(A.rows());
    Matrix choi = Matrix::Zero(dim * dim, dim * dim);
    Matrix e = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            e(i, j) = 1.0;
            Matrix block = A * e * A.adjoint();
            e(i, j) = 0.0;
            choi.block(i * dim, j * dim, dim, dim) += block;
        }
    }
    return choi;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool minimal_columns) {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        os << buf;
    };
    os << "t,tr_rho";
    const int n_obs = int(traj.observable_names.size());
    const int last = minimal_columns ? n_obs - 1 : n_obs;  // drop energy if minimal
    if (!minimal_columns) os << ",min_eig";
    for (int j = 0; j < last; ++j) {
        const auto& name = traj.observable_names[j];
        if (minimal_columns || name == "energy")
            os << "," << name;
        else
            os << ",<" << name << ">";
    }
    os << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        put(traj.times[k]);
        os << ",";
        put(traj.trace_real[k]);
        if (!minimal_columns) {
            os << ",";
            put(traj.min_eigenvalue[k]);
        }
        for (int j = 0; j < last; ++j) {
            os << ",";
            put(traj.observables(int(k), j));
        }
        os << "\n";
    }
}

}  // namespace qst
