#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qst {

struct IntegrationOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double initial_step = 0.0;   // 0 = auto
    double min_step = 1e-13;
    std::int64_t max_steps = 200'000'000;
};

struct IntegrationError : std::runtime_error {
    double t;
    IntegrationError(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

/// Dormand-Prince 5(4) embedded pair with FSAL and step-size control.
/// State must support scalar*State, State+State, State-State and .norm();
/// Rhs is rhs(t, y) -> State. The observer is called at every requested
/// sample time (steps are clamped to land on them exactly).
template <class State, class Rhs, class Observer>
void integrate_adaptive(Rhs&& rhs, State y, double t0, double t1,
                        const IntegrationOptions& opt,
                        const std::vector<double>& sample_times,
                        Observer&& observe) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat (error weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    std::size_t next_sample = 0;
    auto emit_samples_at = [&](double tcur, const State& ycur) {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= tcur + 1e-12 * std::max(1.0, std::abs(tcur))) {
            observe(sample_times[next_sample], ycur);
            ++next_sample;
        }
    };
    emit_samples_at(t, y);

    State k1 = rhs(t, y);
    double h = opt.initial_step;
    if (h <= 0) {
        const double ynorm = y.norm(), fnorm = k1.norm();
        h = (fnorm > 0) ? 0.01 * std::max(ynorm, opt.atol) / fnorm : 1e-6 * (t1 - t0);
        h = std::min(h, t1 - t0);
    }

    std::int64_t steps = 0;
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        if (++steps > opt.max_steps)
            throw IntegrationError("integrate_adaptive: step budget exhausted", t);
        h = std::min(h, t1 - t);
        if (next_sample < sample_times.size() && sample_times[next_sample] > t)
            h = std::min(h, sample_times[next_sample] - t);
        if (h < opt.min_step)
            throw IntegrationError("integrate_adaptive: step size underflow", t);

        State k2 = rhs(t + c2 * h, y + (h * a21) * k1);
        State k3 = rhs(t + c3 * h, y + (h * a31) * k1 + (h * a32) * k2);
        State k4 = rhs(t + c4 * h, y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
        State k5 = rhs(t + c5 * h,
                       y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4);
        State k6 = rhs(t + h, y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 +
                                  (h * a64) * k4 + (h * a65) * k5);
        State ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 +
                     (h * b6) * k6;
        State k7 = rhs(t + h, ynew);
        State err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                    (h * e6) * k6 + (h * e7) * k7;

        const double scale = opt.atol + opt.rtol * std::max(y.norm(), ynew.norm());
        const double errnorm = err.norm() / scale;
        if (errnorm <= 1.0) {
            t += h;
            y = std::move(ynew);
            k1 = std::move(k7);  // FSAL
            emit_samples_at(t, y);
        }
        const double factor =
            (errnorm > 0) ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    emit_samples_at(t1, y);
}

}  // namespace qst
