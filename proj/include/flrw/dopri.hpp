#pragma once

// Dormand-Prince 5(4) explicit Runge-Kutta integrator with FSAL, Hairer-style
// error norm and step-size control. The state is a flat vector of doubles;
// complex spectral arrays are integrated through their real/imag parts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace flrw {

struct StepControl {
    double rtol = 1e-8;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0: automatic estimate
    double max_step = std::numeric_limits<double>::infinity();
    double min_step_fraction = 1e-14;  // relative to max(1, |t|)
    long max_steps = 50'000'000;
    // Constant step h (still clipped to land on output times); no error control.
    double fixed_step = 0.0;
};

enum class IntegrationStatus { completed, step_underflow, non_finite, stopped, too_many_steps };

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_calls = 0;
    double last_step = 0.0;
};

class DormandPrince {
public:
    using State = std::vector<double>;

    explicit DormandPrince(StepControl control = {}) : control_(control) {}

    const IntegrationStats& stats() const { return stats_; }

    // Integrates y' = rhs(t, y, dydt) from t0 through the increasing list of
    // output times. observer(t, y, at_output) runs after every accepted step
    // and returns false to stop early.
    template <class Rhs, class Observer>
    IntegrationStatus integrate(Rhs&& rhs, State& y, double t0, const std::vector<double>& outputs,
                                Observer&& observer) {
        const std::size_t n = y.size();
        resize(n);
        stats_ = {};
        double t = t0;
        std::size_t next = 0;
        while (next < outputs.size() && outputs[next] <= t) {
            if (!observer(t, static_cast<const State&>(y), true)) return IntegrationStatus::stopped;
            ++next;
        }
        if (next == outputs.size()) return IntegrationStatus::completed;

        rhs(t, static_cast<const State&>(y), k1_);
        ++stats_.rhs_calls;
        if (!all_finite(k1_)) return IntegrationStatus::non_finite;

        const bool fixed = control_.fixed_step > 0.0;
        double h = fixed ? control_.fixed_step : control_.initial_step;
        if (!fixed && h <= 0.0) h = initial_step(rhs, t, y, outputs[next] - t);
        h = std::min(h, control_.max_step);
        bool last_rejected = false;

        while (next < outputs.size()) {
            if (stats_.accepted + stats_.rejected >= control_.max_steps) {
                return IntegrationStatus::too_many_steps;
            }
            const double target = outputs[next];
            const double min_step = control_.min_step_fraction * std::max(1.0, std::abs(t));
            if (!fixed && h < min_step) return IntegrationStatus::step_underflow;
            bool hits_output = false;
            double step = h;
            if (t + step >= target || target - (t + step) < 1e-3 * step) {
                step = target - t;
                hits_output = true;
            }

            attempt(rhs, t, y, step);
            double err = fixed ? 0.0 : error_norm(y);
            if (!std::isfinite(err)) {
                if (fixed) return IntegrationStatus::non_finite;
                ++stats_.rejected;
                h = 0.25 * step;
                last_rejected = true;
                continue;
            }
            if (err <= 1.0) {
                ++stats_.accepted;
                stats_.last_step = step;
                t = hits_output ? target : t + step;
                y.swap(ynew_);
                k1_.swap(k7_);  // first-same-as-last
                if (!all_finite(k1_)) return IntegrationStatus::non_finite;
                if (hits_output) ++next;
                if (!observer(t, static_cast<const State&>(y), hits_output)) {
                    return IntegrationStatus::stopped;
                }
                if (!fixed) {
                    double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
                    factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
                    double proposal = std::min(step * factor, control_.max_step);
                    // a step shortened to land on an output says little about the scale
                    if (hits_output) proposal = std::max(proposal, std::min(h, control_.max_step));
                    h = proposal;
                }
                last_rejected = false;
            } else {
                ++stats_.rejected;
                const double factor = std::max(0.2, 0.9 * std::pow(err, -0.2));
                h = step * factor;
                last_rejected = true;
            }
        }
        return IntegrationStatus::completed;
    }

private:
    template <class Rhs>
    void attempt(Rhs& rhs, double t, const State& y, double h) {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
        const std::size_t n = y.size();
        const double* yp = y.data();
        double* tmp = ytmp_.data();

        for (std::size_t i = 0; i < n; ++i) tmp[i] = yp[i] + h * a21 * k1_[i];
        rhs(t + h / 5.0, static_cast<const State&>(ytmp_), k2_);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = yp[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs(t + 0.3 * h, static_cast<const State&>(ytmp_), k3_);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = yp[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        }
        rhs(t + 0.8 * h, static_cast<const State&>(ytmp_), k4_);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = yp[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        }
        rhs(t + 8.0 / 9.0 * h, static_cast<const State&>(ytmp_), k5_);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = yp[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                  a65 * k5_[i]);
        }
        rhs(t + h, static_cast<const State&>(ytmp_), k6_);
        double* yn = ynew_.data();
        for (std::size_t i = 0; i < n; ++i) {
            yn[i] = yp[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                 b6 * k6_[i]);
        }
        rhs(t + h, static_cast<const State&>(ynew_), k7_);
        stats_.rhs_calls += 6;
        if (control_.fixed_step > 0.0) return;
        double* err = errv_.data();
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                          e7 * k7_[i]);
        }
    }

    double error_norm(const State& y) const {
        const std::size_t n = y.size();
        if (n == 0) return 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double scale =
                control_.atol + control_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            const double r = errv_[i] / scale;
            sum += r * r;
        }
        return std::sqrt(sum / static_cast<double>(n));
    }

    template <class Rhs>
    double initial_step(Rhs& rhs, double t, const State& y, double span) {
        const std::size_t n = y.size();
        double d0 = 0.0;
        double d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = control_.atol + control_.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1_[i] / sc) * (k1_[i] / sc);
        }
        const double nn = std::max<double>(1.0, static_cast<double>(n));
        d0 = std::sqrt(d0 / nn);
        d1 = std::sqrt(d1 / nn);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h0 * k1_[i];
        rhs(t + h0, static_cast<const State&>(ytmp_), k2_);
        ++stats_.rhs_calls;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = control_.atol + control_.rtol * std::abs(y[i]);
            const double v = (k2_[i] - k1_[i]) / sc;
            d2 += v * v;
        }
        d2 = std::sqrt(d2 / nn) / h0;
        const double big = std::max(d1, d2);
        const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
        return std::min({100.0 * h0, h1, span});
    }

    void resize(std::size_t n) {
        for (State* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_, &errv_}) {
            v->assign(n, 0.0);
        }
    }

    static bool all_finite(const State& v) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }

    StepControl control_;
    IntegrationStats stats_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, errv_;
};

}  // namespace flrw
