#include <benchmark/benchmark.h>

#include "qst/fcs.hpp"
#include "qst/lindblad.hpp"
#include "qst/models.hpp"
#include "qst/moments.hpp"
#include "qst/opcore.hpp"

using namespace qst;

namespace {

void bm_generator_apply(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    ModelSpec model = qbm_model({1.0, 1.0, 1.0, 1.0}, {dim, 1.0, 1.0});
    Matrix rho = gibbs_state(model.hamiltonian(1.0), 1.0).rho;
    for (auto _ : state) {
        Matrix out = generator_apply(model, 1.0, rho);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_generator_apply)->Arg(32)->Arg(64)->Arg(128);

void bm_tilted_rhs(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    ModelSpec model = qbm_comoving_model({1.0, 1.0, 1.0, 1.0}, dim);
    Protocol protocol = linear_protocol(1.0, 2.0, 10.0);
    Matrix eta = gibbs_state(model.hamiltonian(1.0), 1.0).rho;
    CountingFields fields;
    fields.u = -1.0;
    for (auto _ : state) {
        Matrix out = tilted_rhs_eta(model, protocol, 5.0, fields, eta);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_tilted_rhs)->Arg(32)->Arg(64)->Arg(128);

void bm_hermitian_eig(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const auto ops = fock_operators({dim, 1.0, 1.0});
    const Matrix h = qbm_hamiltonian({1.0, 1.0, 1.0, 1.3}, {dim, 1.0, 1.0}, ops);
    for (auto _ : state) {
        auto eig = hermitian_eig(h);
        benchmark::DoNotOptimize(eig.values.data());
    }
}
BENCHMARK(bm_hermitian_eig)->Arg(64)->Arg(128);

void bm_evolve_small(benchmark::State& state) {
    ModelSpec model = qbm_model({1.0, 1.0, 1.0, 1.0}, {24, 1.0, 1.0});
    Protocol protocol = linear_protocol(1.0, 1.5, 2.0);
    Matrix rho0 = gibbs_state(model.hamiltonian(1.0), 1.0).rho;
    EvolveOptions opt;
    opt.n_samples = 3;
    for (auto _ : state) {
        Trajectory traj = evolve(model, protocol, rho0, opt);
        benchmark::DoNotOptimize(traj.states.back().data());
    }
}
BENCHMARK(bm_evolve_small);

void bm_evolve_gamma(benchmark::State& state) {
    const QbmParams p{1.0, 1.0, 1.0, 0.2};
    Protocol protocol = exponential_protocol(0.2, 5.0, 10.0);
    const MomentState g0 = gamma_equilibrium(0.2, 1.0, 1.0);
    for (auto _ : state) {
        auto traj = evolve_gamma(protocol, g0, p);
        benchmark::DoNotOptimize(traj.gamma.back().data());
    }
}
BENCHMARK(bm_evolve_gamma);

}  // namespace

BENCHMARK_MAIN();
