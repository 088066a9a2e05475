#include "qst/fcs.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/SparseCore>

#include "qst/integrate.hpp"
#include "qst/lindblad.hpp"
#include "qst/opcore.hpp"

namespace qst {

void CountingFields::validate(double hamiltonian_norm, std::size_t n_dissipators) const {
    if (v.size() > n_dissipators)
        throw std::invalid_argument("CountingFields: more v fields than dissipators");
    double worst = 0.0;
    for (std::size_t nu = 0; nu < n_dissipators; ++nu)
        worst = std::max(worst, std::abs(v_at(nu)));
    if (worst * hamiltonian_norm > 200.0)
        throw std::invalid_argument(
            "CountingFields: |field| * ||H|| exceeds 200; reduce the field or the "
            "truncation dimension");
}

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

// Per-time model data, memoized on the last requested t. The integrator
// evaluates the same t twice per step (FSAL), and a static Hamiltonian
// collapses everything to one decomposition. Dissipator operators are held
// sparse: for the oscillator models they are banded, and the band products
// cost O(n^2) against a dense state instead of O(n^3).
struct TiltedContext {
    const ModelSpec& model;
    const Protocol& protocol;
    bool static_hamiltonian;

    TiltedContext(const ModelSpec& m, const Protocol& p, bool static_h)
        : model(m), protocol(p), static_hamiltonian(static_h) {}

    struct DissOps {
        Sparse K, A, Adag, AdA;
        double rate;
    };

    bool have = false;
    double t_cached = 0.0;
    Matrix h;
    HermitianEig eig;
    std::vector<Dissipator> diss;
    std::vector<DissOps> ops;
    double max_abs_energy = 0.0;

    void refresh(double t) {
        if (have && (static_hamiltonian || t == t_cached)) return;
        const double lambda = protocol.value_at(t);
        h = model.hamiltonian(lambda);
        eig = hermitian_eig(h);
        diss = model.dissipators(lambda);
        ops.clear();
        ops.reserve(diss.size());
        for (const auto& d : diss) {
            DissOps o;
            o.K = d.K.sparseView();
            o.A = d.A.sparseView();
            o.Adag = o.A.adjoint();
            o.AdA = o.Adag * o.A;
            o.rate = d.rate;
            ops.push_back(std::move(o));
        }
        max_abs_energy =
            std::max(max_abs_energy, eig.values.cwiseAbs().maxCoeff());
        t_cached = t;
        have = true;
    }
};

Matrix sparse_gksl(const TiltedContext::DissOps& o, const Matrix& rho) {
    Matrix out = Complex(0, -1) * (o.K * rho - rho * o.K);
    out.noalias() += o.A * Matrix(rho * o.Adag);
    out -= 0.5 * (o.AdA * rho + rho * o.AdA);
    return 0.5 * o.rate * out;
}

// state -> diag(e^{c w}) state diag(e^{c w}), elementwise when the basis is
// the eigenbasis itself
Matrix conjugated_dissipator_sum(const TiltedContext& ctx, const CountingFields& fields,
                                 double u_gauge, const Matrix& state) {
    Matrix out = Matrix::Zero(state.rows(), state.cols());
    for (std::size_t nu = 0; nu < ctx.ops.size(); ++nu) {
        const double c = (u_gauge - fields.v_at(nu)) / 2.0;
        const auto& o = ctx.ops[nu];
        if (c == 0.0) {
            out += sparse_gksl(o, state);
            continue;
        }
        if (ctx.eig.diagonal_basis) {
            const Eigen::VectorXcd s =
                (c * ctx.eig.values.array()).exp().matrix().cast<Complex>();
            const Eigen::VectorXcd si = s.cwiseInverse();
            const Matrix inner = s.asDiagonal() * state * s.asDiagonal();
            out += si.asDiagonal() * sparse_gksl(o, inner) * si.asDiagonal();
            continue;
        }
        const Matrix scale_in = ctx.eig.exp(c);
        const Matrix scale_out = ctx.eig.exp(-c);
        const Matrix inner = scale_in * state * scale_in;
        out += scale_out * sparse_gksl(o, inner) * scale_out;
    }
    return out;
}

Matrix eta_rhs(TiltedContext& ctx, double t, const CountingFields& fields,
               const Matrix& eta) {
    ctx.refresh(t);
    const double lambda = ctx.protocol.value_at(t);
    const double rate = ctx.protocol.rate_at(t);
    const auto n = eta.rows();
    Matrix out;
    if (ctx.eig.diagonal_basis) {
        out.resize(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                out(i, j) =
                    Complex(0, -(ctx.eig.values(i) - ctx.eig.values(j))) * eta(i, j);
    } else {
        out = Complex(0, -1) * commutator(ctx.h, eta);
    }
    if (fields.u != 0.0 && rate != 0.0) {
        const Matrix hdot = rate * ctx.model.hamiltonian_derivative(lambda);
        const Sparse x = dexp_factor(ctx.eig, hdot, fields.u / 2.0).sparseView();
        out += x * eta + eta * Sparse(x.adjoint());
    }
    if (ctx.model.frame_generator && rate != 0.0) {
        const Matrix w = ctx.model.frame_generator(lambda, rate);
        if (fields.u != 0.0) {
            // the counting field dresses the frame term; B eta + eta B^dag
            // with B = e^{uH/2} W e^{-uH/2} (W is anti-Hermitian)
            Matrix b;
            if (ctx.eig.diagonal_basis) {
                const Eigen::VectorXcd s =
                    (0.5 * fields.u * ctx.eig.values.array()).exp().matrix().cast<Complex>();
                b = s.asDiagonal() * w * s.cwiseInverse().asDiagonal();
            } else {
                b = ctx.eig.exp(fields.u / 2.0) * w * ctx.eig.exp(-fields.u / 2.0);
            }
            const Sparse bs = b.sparseView();
            out += bs * eta + eta * Sparse(bs.adjoint());
        } else {
            const Sparse ws = w.sparseView();
            out += ws * eta - eta * ws;
        }
    }
    // the gauge field is zero here, so each term is conjugated by e^{-v H/2}
    out += conjugated_dissipator_sum(ctx, fields, 0.0, eta);
    return out;
}

}  // namespace

Matrix tilted_rhs_eta(const ModelSpec& model, const Protocol& protocol, double t,
                      const CountingFields& fields, const Matrix& eta) {
    TiltedContext ctx{model, protocol, false};
    return eta_rhs(ctx, t, fields, eta);
}

Matrix tilted_rhs_sigma(const ModelSpec& model, const Protocol& protocol, double t,
                        const CountingFields& fields, const Matrix& sigma) {
    TiltedContext ctx{model, protocol, false};
    ctx.refresh(t);
    Matrix out = Complex(0, -1) * commutator(ctx.h, sigma) +
                 conjugated_dissipator_sum(ctx, fields, fields.u, sigma);
    const double rate = ctx.protocol.rate_at(t);
    if (ctx.model.frame_generator && rate != 0.0) {
        // the frame term commutes through the gauge factors e^{-uH/2}
        // only as the plain commutator
        out += commutator(ctx.model.frame_generator(ctx.protocol.value_at(t), rate), sigma);
    }
    return out;
}

FcsResult characteristic_function(const ModelSpec& model, const Protocol& protocol,
                                  const Matrix& rho0, const CountingFields& fields,
                                  const FcsOptions& opt) {
    if (opt.n_samples < 2)
        throw std::invalid_argument("characteristic_function: n_samples < 2");
    TiltedContext ctx{model, protocol, opt.static_hamiltonian};
    ctx.refresh(0.0);
    fields.validate(ctx.eig.values.cwiseAbs().maxCoeff(), ctx.diss.size());

    std::vector<double> sample_times(opt.n_samples);
    for (int i = 0; i < opt.n_samples; ++i)
        sample_times[i] = protocol.tau * i / (opt.n_samples - 1);

    auto rhs = [&](double t, const Matrix& eta) { return eta_rhs(ctx, t, fields, eta); };

    IntegrationOptions iopt;
    iopt.rtol = opt.rtol;
    iopt.atol = opt.atol;
    Matrix eta_final;
    integrate_adaptive(rhs, Matrix(rho0), 0.0, protocol.tau, iopt, sample_times,
                       [&](double t, const Matrix& eta) {
                           if (opt.eta_observer) opt.eta_observer(t, eta);
                           if (t >= protocol.tau * (1.0 - 1e-12)) eta_final = eta;
                       });
    if (eta_final.size() == 0)
        throw std::runtime_error("characteristic_function: final sample missing");

    return {eta_final.trace(), ctx.max_abs_energy};
}

WorkMoments work_moments(const ModelSpec& model, const Protocol& protocol,
                         const Matrix& rho0, double step, const FcsOptions& opt,
                         double consistency_rtol) {
    const Matrix h0 = model.hamiltonian(protocol.value_at(0.0));
    const Matrix h1 = model.hamiltonian(protocol.value_at(protocol.tau));
    const double hnorm = std::max(hermitian_eig(h0).values.cwiseAbs().maxCoeff(),
                                  hermitian_eig(h1).values.cwiseAbs().maxCoeff());
    double h = step;
    if (h <= 0) h = 1e-3 / std::max(hnorm, 1.0);

    auto log_chi = [&](double u) {
        CountingFields f;
        f.u = u;
        return std::real(std::log(characteristic_function(model, protocol, rho0, f, opt).chi));
    };
    const double fm2 = log_chi(-2 * h), fm1 = log_chi(-h), f0 = log_chi(0.0),
                 fp1 = log_chi(h), fp2 = log_chi(2 * h);

    WorkMoments m;
    m.step = h;
    m.mean = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
    m.variance = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    m.mean_coarse = (fp2 - fm2) / (4 * h);
    m.variance_coarse = (fp2 - 2 * f0 + fm2) / (4 * h * h);
    const double mscale = std::max(1.0, std::abs(m.mean));
    const double vscale = std::max(1.0, std::abs(m.variance));
    m.consistent = std::abs(m.mean - m.mean_coarse) <= consistency_rtol * mscale &&
                   std::abs(m.variance - m.variance_coarse) <= consistency_rtol * vscale;
    return m;
}

double free_energy_change(const ModelSpec& model, const Protocol& protocol, double beta) {
    const double z0 = gibbs_state(model.hamiltonian(protocol.value_at(0.0)), beta).log_z;
    const double z1 =
        gibbs_state(model.hamiltonian(protocol.value_at(protocol.tau)), beta).log_z;
    return -(z1 - z0) / beta;
}

FtReport ft_report(const ModelSpec& model, const Protocol& protocol, double beta_s,
                   const FcsOptions& opt) {
    if (beta_s <= 0) throw std::invalid_argument("ft_report: beta_s must be positive");
    const double lambda0 = protocol.value_at(0.0);
    const auto diss0 = model.dissipators(lambda0);
    CountingFields fields;
    fields.u = -beta_s;
    fields.v.resize(diss0.size());
    for (std::size_t nu = 0; nu < diss0.size(); ++nu)
        fields.v[nu] = -(beta_s - diss0[nu].beta);

    const HermitianEig eig0 = hermitian_eig(model.hamiltonian(lambda0));
    const GibbsState init = gibbs_state(eig0, beta_s);
    const double log_z0 = init.log_z;

    double max_defect = 0.0;
    FcsOptions local = opt;
    auto chained = opt.eta_observer;
    local.eta_observer = [&](double t, const Matrix& eta) {
        // eta should stay the frozen Boltzmann operator e^{-beta H(t)}/Z_i
        const HermitianEig eig = opt.static_hamiltonian
                                     ? eig0
                                     : hermitian_eig(model.hamiltonian(protocol.value_at(t)));
        const Matrix ref = eig.apply(
            [&](double e) { return std::exp(-beta_s * e - log_z0); });
        max_defect = std::max(max_defect, (eta - ref).norm() / ref.norm());
        if (chained) chained(t, eta);
    };

    const FcsResult res = characteristic_function(model, protocol, init.rho, fields, local);

    FtReport rep;
    rep.chi = res.chi;
    rep.beta_s = beta_s;
    rep.delta_f = free_energy_change(model, protocol, beta_s);
    rep.deviation = std::abs(res.chi * std::exp(beta_s * rep.delta_f) - 1.0);
    rep.max_state_defect = max_defect;
    return rep;
}

}  // namespace qst
