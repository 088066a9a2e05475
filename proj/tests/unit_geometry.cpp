#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/geometry.hpp"
#include "qst/moments.hpp"

using namespace qst;

namespace {

// d ln g / d ln omega by a symmetric log-log stencil
double metric_exponent(double omega, const QbmParams& p) {
    const double r = 1.05;
    return (std::log(metric_g(omega * r, p)) - std::log(metric_g(omega / r, p))) /
           (2.0 * std::log(r));
}

}  // namespace

TEST_CASE("equilibrium response vector is the equilibrium moment derivative") {
    for (double beta : {1e-3, 0.5, 2.0, 20.0}) {
        for (double omega : {0.3, 1.0, 4.0}) {
            const double h = 1e-6 * omega;
            const Vector3 fd =
                (gamma_equilibrium(omega + h, beta, 1.0) -
                 gamma_equilibrium(omega - h, beta, 1.0)) /
                (2.0 * h);
            const Vector3 xi = xi_vector(omega, beta, 1.0);
            CHECK((fd - xi).norm() < 1e-7 * xi.norm());
        }
    }
}

TEST_CASE("friction metric is positive across regimes") {
    for (double beta : {1e-3, 0.1, 1.0, 10.0, 50.0})
        for (double kappa : {0.01, 1.0, 100.0})
            for (double omega : {0.2, 1.0, 5.0})
                CHECK(metric_g(omega, {1.0, kappa, beta, omega}) > 0.0);
}

TEST_CASE("metric has the four asymptotic power laws") {
    // high temperature: 1/omega^2 underdamped, 1/omega^4 overdamped
    CHECK(metric_exponent(1.0, {1.0, 1e-4, 1e-6, 1.0}) == doctest::Approx(-2.0).epsilon(0.02));
    CHECK(metric_exponent(1.0, {1.0, 1e4, 1e-6, 1.0}) == doctest::Approx(-4.0).epsilon(0.02));
    // low temperature: 1/omega^3 underdamped, 1/omega overdamped
    CHECK(metric_exponent(1.0, {1.0, 1e-4, 500.0, 1.0}) == doctest::Approx(-3.0).epsilon(0.02));
    CHECK(metric_exponent(1.0, {1.0, 1e4, 500.0, 1.0}) == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("thermodynamic length is symmetric and additive") {
    const QbmParams p{1.0, 1.0, 1.0, 1.0};
    const double lab = thermodynamic_length(0.4, 2.5, p).length;
    const double lba = thermodynamic_length(2.5, 0.4, p).length;
    CHECK(lab == doctest::Approx(lba).epsilon(1e-10));
    const double l1 = thermodynamic_length(0.4, 1.0, p).length;
    const double l2 = thermodynamic_length(1.0, 2.5, p).length;
    CHECK(lab == doctest::Approx(l1 + l2).epsilon(1e-10));

    const auto r = thermodynamic_length(0.4, 2.5, p);
    CHECK(r.omega_grid.front() == doctest::Approx(0.4));
    CHECK(r.omega_grid.back() == doctest::Approx(2.5));
    CHECK(r.arclength.front() == 0.0);
    CHECK(r.arclength.back() == doctest::Approx(r.length));
    for (std::size_t i = 1; i < r.arclength.size(); ++i)
        CHECK(r.arclength[i] > r.arclength[i - 1]);
}

TEST_CASE("optimal protocol is a constant-speed geodesic") {
    const QbmParams p{1.0, 1.0, 1.0, 1.0};
    Protocol prot = optimal_protocol(0.2, 5.0, 10.0, p);
    validate_protocol(prot);
    CHECK(prot.schedule(0.0) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(prot.schedule(1.0) == doctest::Approx(5.0).epsilon(1e-10));

    const double l = thermodynamic_length(0.2, 5.0, p).length;
    for (int k = 0; k <= 20; ++k) {
        const double s = k / 20.0;
        const double w = prot.schedule(s);
        CHECK(w >= 0.2);
        CHECK(w <= 5.0);
        const double speed = std::sqrt(metric_g(w, p)) * std::abs(prot.derivative(s));
        CHECK(speed == doctest::Approx(l).epsilon(1e-5));
    }

    // decompression: same construction runs downhill
    Protocol down = optimal_protocol(5.0, 0.2, 10.0, p);
    CHECK(down.schedule(1.0) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(down.derivative(0.5) < 0.0);
}

TEST_CASE("closed-form limit schedules hit the endpoints with consistent slopes") {
    for (MetricLimit which : {MetricLimit::HighTUnderdamped, MetricLimit::HighTOverdamped,
                              MetricLimit::LowTUnderdamped, MetricLimit::LowTOverdamped}) {
        Protocol prot = limit_protocol(which, 0.2, 5.0, 7.0);
        validate_protocol(prot);
        CHECK(prot.schedule(0.0) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(prot.schedule(1.0) == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("numerical geodesic approaches the closed form in a pushed regime") {
    // high-temperature underdamped: beta omega << 1, kappa << omega
    const QbmParams p{1.0, 1e-3, 1e-4, 1.0};
    Protocol num = optimal_protocol(0.2, 5.0, 1.0, p);
    Protocol ref = limit_protocol(MetricLimit::HighTUnderdamped, 0.2, 5.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k <= 40; ++k) {
        const double s = k / 40.0;
        worst = std::max(worst, std::abs(num.schedule(s) - ref.schedule(s)) /
                                    ref.schedule(s));
    }
    CHECK(worst < 0.02);
}

TEST_CASE("metric rejects nonpositive frequency") {
    CHECK_THROWS_AS(metric_g(0.0, {1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(thermodynamic_length(1.0, 1.0, {1.0, 1.0, 1.0, 1.0}),
                    std::invalid_argument);
}
