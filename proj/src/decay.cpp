#include "flrw/decay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

constexpr int kMinSamples = 8;
constexpr int kSubWindows = 4;
constexpr double kDriftThreshold = 0.02;

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l;
    l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    l.intercept = my - l.slope * mx;
    return l;
}

}  // namespace

std::string lq_column_name(double q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "lq_%g", q);
    return buf;
}

std::vector<double> DecaySeries::column(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    if (name == "l2" || name == "linf") {
        for (const auto& r : rows) out.push_back(name == "l2" ? r.l2 : r.linf);
        return out;
    }
    for (std::size_t j = 0; j < q_list.size(); ++j) {
        if (lq_column_name(q_list[j]) == name) {
            for (const auto& r : rows) out.push_back(r.lq.at(j));
            return out;
        }
    }
    throw FitError("no column named " + name);
}

std::vector<double> DecaySeries::times() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.t);
    return out;
}

DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& value,
                            double t_lo, double t_hi) {
    if (t.size() != value.size()) throw FitError("time and value columns differ in length");
    if (!(t_hi >= t_lo)) throw FitError("empty fit window");
    const double slack = 1e-9 * std::max(1.0, std::abs(t_hi));
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo - slack || t[i] > t_hi + slack) continue;
        if (!(value[i] > 0.0) || !std::isfinite(value[i])) {
            throw FitError("norm is zero or non-finite at t = " + std::to_string(t[i]));
        }
        x.push_back(std::log1p(t[i]));
        y.push_back(std::log(value[i]));
    }
    if (static_cast<int>(x.size()) < kMinSamples) {
        throw FitError("need at least 8 samples in the fit window, got " + std::to_string(x.size()));
    }
    const Line line = least_squares(x, y);
    DecayFit fit;
    fit.exponent = line.slope;
    fit.intercept = line.intercept;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.samples = static_cast<int>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        fit.residual = std::max(fit.residual, std::abs(y[i] - (line.intercept + line.slope * x[i])));
    }

    // Local slopes on equal pieces of the log window; a monotone drift points
    // at a logarithmic correction (or a transient still fading out).
    const double x0 = x.front();
    const double x1 = x.back();
    for (int w = 0; w < kSubWindows; ++w) {
        const double a = x0 + (x1 - x0) * w / kSubWindows;
        const double b = x0 + (x1 - x0) * (w + 1) / kSubWindows;
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] >= a - 1e-12 && x[i] <= b + 1e-12) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        }
        if (xs.size() >= 2) fit.local_slopes.push_back(least_squares(xs, ys).slope);
    }
    if (fit.local_slopes.size() == kSubWindows) {
        bool up = true;
        bool down = true;
        for (int w = 1; w < kSubWindows; ++w) {
            up = up && fit.local_slopes[w] > fit.local_slopes[w - 1];
            down = down && fit.local_slopes[w] < fit.local_slopes[w - 1];
        }
        const double drift = std::abs(fit.local_slopes.back() - fit.local_slopes.front());
        fit.log_factor = (up || down) && drift > kDriftThreshold;
    }
    return fit;
}

DecayFit fit_decay_exponent(const DecaySeries& series, const std::string& column, double t_lo,
                            double t_hi) {
    return fit_decay_exponent(series.times(), series.column(column), t_lo, t_hi);
}

std::vector<double> log_spaced_times(double t_start, double t_end, int per_decade) {
    if (!(t_end >= t_start) || t_start < 0.0) throw DomainError("need 0 <= t_start <= t_end");
    if (per_decade < 1) throw DomainError("need at least one output per decade");
    const double a = std::log10(1.0 + t_start);
    const double b = std::log10(1.0 + t_end);
    const int count = std::max(1, static_cast<int>(std::ceil((b - a) * per_decade)));
    std::vector<double> out;
    out.reserve(count + 1);
    for (int i = 0; i <= count; ++i) {
        const double t = i == count ? t_end : std::pow(10.0, a + (b - a) * i / count) - 1.0;
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    if (out.front() != t_start) out.front() = t_start;
    return out;
}

}  // namespace flrw
