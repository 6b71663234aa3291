#include "flrw/semilinear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "flrw/errors.hpp"
#include "flrw/linear_solver.hpp"
#include "flrw/multipliers.hpp"

namespace flrw {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool is_identity_frame(double ell) { return ell == 0.0; }

// |x|^p with the power split into an integer part and quarters when possible;
// std::pow dominates the source evaluation otherwise
class AbsPower {
public:
    explicit AbsPower(double p) : p_(p) {
        const double four_p = 4.0 * p;
        if (four_p == std::floor(four_p) && p < 64.0) {
            whole_ = static_cast<int>(std::floor(p));
            quarters_ = static_cast<int>(four_p) - 4 * whole_;
            exact_ = true;
        }
    }
    double operator()(double x) const {
        const double a = std::abs(x);
        if (!exact_) return std::pow(a, p_);
        double r = 1.0;
        for (int i = 0; i < whole_; ++i) r *= a;
        if (quarters_ == 0) return r;
        const double half = std::sqrt(a);
        if (quarters_ == 2) return r * half;
        const double quarter = std::sqrt(half);
        return quarters_ == 1 ? r * quarter : r * half * quarter;
    }

private:
    double p_;
    int whole_ = 0;
    int quarters_ = 0;
    bool exact_ = false;
};

void apply_nonlinearity(std::vector<double>& field, double p, Nonlinearity kind) {
    const AbsPower power(p);
    if (kind == Nonlinearity::abs_power) {
        for (double& x : field) x = power(x);
    } else {
        for (double& x : field) x = x < 0.0 ? -power(x) : power(x);
    }
}

}  // namespace

void NonlinearRunConfig::validate() const {
    params.validate();
    grid.validate();
    if (params.n != grid.n) throw ConfigError("model and grid dimensions differ");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
    if (!(bump_width > 0.0)) throw ConfigError("bump width must be positive");
    if (!(blowup_threshold >= 0.0)) throw ConfigError("blow-up threshold must be non-negative");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("tolerances must be positive");
    if (fixed_step < 0.0) throw ConfigError("fixed step must be non-negative");
    if (outputs_per_decade < 1) throw ConfigError("need at least one output per decade");
    for (double q : q_list) {
        if (!(q >= 1.0)) throw ConfigError("L^q norms need q >= 1");
    }
    if (!(horizon > start_time)) throw ConfigError("horizon must exceed the start time");
    if (!std::is_sorted(output_times.begin(), output_times.end())) {
        throw ConfigError("output times must be increasing");
    }
    if (!output_times.empty() &&
        (output_times.front() < start_time || output_times.back() > horizon)) {
        throw ConfigError("output times must lie in [start, horizon]");
    }
    if (tau_frame) {
        const double t0 = tau_of_t(0.0, params.ell);
        if (std::abs(start_time - t0) > 1e-12 * std::max(1.0, t0)) {
            throw ConfigError("constant-speed runs start at tau = ell/(1-ell)");
        }
    } else if (start_time != 0.0) {
        throw ConfigError("physical-frame runs start at t = 0");
    }
    const double t_end = tau_frame ? t_of_tau(horizon, params.ell) : horizon;
    check_causal_budget(grid, params.ell, t_end, bump_width);
}

std::vector<double> NonlinearRunConfig::resolved_output_times() const {
    if (!output_times.empty()) return output_times;
    return log_spaced_times(start_time, horizon, outputs_per_decade);
}

EquationCoefficients equation_coefficients(const NonlinearRunConfig& config) {
    const double ell = config.params.ell;
    EquationCoefficients c;
    if (!config.tau_frame) {
        c.speed_exponent = ell;
        c.damping = config.params.beta;
        return c;
    }
    const double e = 1.0 - ell;
    c.speed_exponent = 0.0;
    c.damping = (config.params.beta - ell) / e;
    c.source_exponent = 2.0 * ell / e;
    c.source_scale = std::pow(e, c.source_exponent);
    return c;
}

std::string_view to_string(RunStatus status) {
    return status == RunStatus::completed ? "completed" : "blowup_detected";
}

std::vector<double> nonlinearity(const std::vector<double>& field, double p, Nonlinearity kind) {
    if (!(p > 1.0)) throw DomainError("nonlinearity needs p > 1");
    std::vector<double> out = field;
    apply_nonlinearity(out, p, kind);
    return out;
}

void nonlinear_source(const SpectralGrid& grid, const Complex* u_hat, double p, Nonlinearity kind,
                      std::vector<double>& work, Complex* source_hat) {
    work.resize(grid.physical_size());
    grid.inverse(u_hat, work.data());
    apply_nonlinearity(work, p, kind);
    grid.forward(work.data(), source_hat);
    grid.dealias(source_hat);
}

std::optional<double> detect_blowup(const std::vector<double>& field, double t, double threshold) {
    const double m = max_abs(field);
    if (!(m < threshold)) return t;
    return std::nullopt;
}

std::optional<double> detect_blowup(const SpectralGrid& grid, const SpectralState& state,
                                    double threshold) {
    for (const auto* v : {&state.u_hat, &state.ut_hat}) {
        for (const Complex& c : *v) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return state.t;
        }
    }
    std::vector<double> field(grid.physical_size());
    grid.inverse(state.u_hat.data(), field.data());
    return detect_blowup(field, state.t, threshold);
}

RunOutcome solve_semilinear(const NonlinearRunConfig& config) {
    return solve_semilinear(config, nullptr);
}

RunOutcome solve_semilinear(const NonlinearRunConfig& config, SpectralState* final_state) {
    config.validate();
    const SpectralGrid grid(config.grid);
    const std::size_t ns = grid.spectral_size();
    const EquationCoefficients coef = equation_coefficients(config);
    const double p = config.params.p;
    const std::vector<double> outputs = config.resolved_output_times();
    const double cell = grid.spec().cell_volume();

    // y = [u_hat | ut_hat] as interleaved real/imag pairs; masked modes stay zero
    DormandPrince::State y(4 * ns, 0.0);
    {
        SpectralState s0 = bump_state(grid, config.delta, config.bump_width, config.start_time);
        grid.dealias(s0.ut_hat.data());
        std::memcpy(y.data() + 2 * ns, s0.ut_hat.data(), ns * sizeof(Complex));
    }

    const auto& xi2 = grid.xi2();
    const auto& mask = grid.dealias_mask();
    std::vector<double> work(grid.physical_size());
    std::vector<Complex> source(ns);
    double last_linf = 0.0;

    auto rhs = [&](double t, const DormandPrince::State& s, DormandPrince::State& d) {
        const auto* u = reinterpret_cast<const Complex*>(s.data());
        const auto* v = u + ns;
        auto* du = reinterpret_cast<Complex*>(d.data());
        auto* dv = du + ns;
        const double c2 = coef.speed_exponent == 0.0 ? 1.0 : std::pow(1.0 + t, -2.0 * coef.speed_exponent);
        const double b = coef.damping / (1.0 + t);
        double a = 0.0;
        if (config.source_enabled) {
            a = coef.source_exponent == 0.0 ? coef.source_scale
                                            : coef.source_scale * std::pow(1.0 + t, coef.source_exponent);
            work.resize(grid.physical_size());
            grid.inverse(u, work.data());
            last_linf = max_abs(work);
            apply_nonlinearity(work, p, config.nonlinearity);
            grid.forward(work.data(), source.data());
        }
        for (std::size_t k = 0; k < ns; ++k) {
            if (!mask[k]) {
                du[k] = 0.0;
                dv[k] = 0.0;
                continue;
            }
            du[k] = v[k];
            dv[k] = -c2 * xi2[k] * u[k] - b * v[k] + (config.source_enabled ? a * source[k] : Complex{});
        }
    };

    StepControl control;
    control.rtol = config.rtol;
    control.atol = config.atol;
    control.fixed_step = config.fixed_step;
    // the fastest resolved mode sets the first step
    const double c0 = coef.speed_exponent == 0.0 ? 1.0 : std::pow(1.0 + config.start_time, -coef.speed_exponent);
    control.initial_step = config.fixed_step > 0.0 ? 0.0 : 0.5 / (c0 * grid.max_dealiased_xi());
    DormandPrince stepper(control);

    RunOutcome outcome;
    outcome.series.q_list = config.q_list;
    std::vector<double> field(grid.physical_size());
    double last_t = config.start_time;

    auto observer = [&](double t, const DormandPrince::State& s, bool at_output) {
        last_t = t;
        const auto* u = reinterpret_cast<const Complex*>(s.data());
        if (config.source_enabled && t > config.start_time) {
            // the last right-hand side evaluation was at the accepted state
            if (!(last_linf < config.blowup_threshold)) {
                outcome.status = RunStatus::blowup_detected;
                outcome.blowup_time = t;
                outcome.diagnostic = "sup norm reached the blow-up threshold";
                return false;
            }
        }
        if (at_output) {
            grid.inverse(u, field.data());
            if (auto hit = detect_blowup(field, t, config.blowup_threshold);
                hit && (config.source_enabled || !std::isfinite(max_abs(field)))) {
                outcome.status = RunStatus::blowup_detected;
                outcome.blowup_time = *hit;
                outcome.diagnostic = "sup norm reached the blow-up threshold at an output time";
                return false;
            }
            outcome.series.rows.push_back(norm_row(t, field, cell, config.q_list));
        }
        return true;
    };

    const IntegrationStatus status = stepper.integrate(rhs, y, config.start_time, outputs, observer);
    outcome.stats = stepper.stats();
    switch (status) {
        case IntegrationStatus::completed:
        case IntegrationStatus::stopped:
            break;
        case IntegrationStatus::step_underflow:
            outcome.status = RunStatus::blowup_detected;
            outcome.blowup_time = last_t;
            outcome.diagnostic = "step size underflow";
            break;
        case IntegrationStatus::non_finite:
            outcome.status = RunStatus::blowup_detected;
            outcome.blowup_time = last_t;
            outcome.diagnostic = "non-finite values in the solution";
            break;
        case IntegrationStatus::too_many_steps:
            throw ConfigError("step budget exhausted at t = " + std::to_string(last_t));
    }

    if (final_state) {
        final_state->grid = config.grid;
        final_state->t = last_t;
        final_state->u_hat.assign(reinterpret_cast<const Complex*>(y.data()),
                                  reinterpret_cast<const Complex*>(y.data()) + ns);
        final_state->ut_hat.assign(reinterpret_cast<const Complex*>(y.data()) + ns,
                                   reinterpret_cast<const Complex*>(y.data()) + 2 * ns);
    }
    return outcome;
}

double tau_of_t(double t, double ell) {
    if (!(ell >= 0.0 && ell < 1.0)) throw DomainError("ell must satisfy 0 <= ell < 1");
    if (is_identity_frame(ell)) return t;
    const double e = 1.0 - ell;
    return std::pow(1.0 + t, e) / e - 1.0;
}

double t_of_tau(double tau, double ell) {
    if (!(ell >= 0.0 && ell < 1.0)) throw DomainError("ell must satisfy 0 <= ell < 1");
    if (is_identity_frame(ell)) return tau;
    const double e = 1.0 - ell;
    return std::pow(e * (1.0 + tau), 1.0 / e) - 1.0;
}

NonlinearRunConfig to_tau_frame(const NonlinearRunConfig& config) {
    if (config.tau_frame) throw ConfigError("configuration is already in the constant-speed frame");
    NonlinearRunConfig out = config;
    const double ell = config.params.ell;
    out.tau_frame = true;
    out.start_time = tau_of_t(config.start_time, ell);
    out.horizon = tau_of_t(config.horizon, ell);
    out.output_times.clear();
    for (double t : config.resolved_output_times()) out.output_times.push_back(tau_of_t(t, ell));
    out.output_times.front() = out.start_time;
    out.output_times.back() = out.horizon;
    return out;
}

DecaySeries from_tau_frame(const DecaySeries& series, double ell) {
    DecaySeries out = series;
    for (auto& row : out.rows) row.t = t_of_tau(row.t, ell);
    out.fit.reset();
    return out;
}

PicardIterates picard_iterates(const NonlinearRunConfig& config, double t, int quadrature_nodes) {
    config.validate();
    if (config.tau_frame) throw ConfigError("Picard iterates are computed in the physical frame");
    if (!(t > 0.0)) throw DomainError("Picard horizon must be positive");
    if (quadrature_nodes < 4) throw DomainError("need at least 4 quadrature intervals");
    check_causal_budget(config.grid, config.params.ell, t, config.bump_width);

    const SpectralGrid grid(config.grid);
    const std::size_t ns = grid.spectral_size();
    const auto& shell_xi = grid.shell_xi();
    const auto& shell_of = grid.shell_of();
    const ModelParams& params = config.params;
    const int m = quadrature_nodes;
    const double h = t / m;
    std::vector<double> nodes(m + 1);
    for (int j = 0; j <= m; ++j) nodes[j] = h * j;
    nodes[m] = t;

    std::vector<Complex> u1(ns);
    {
        SpectralState s0 = bump_state(grid, config.delta, config.bump_width, 0.0);
        grid.dealias(s0.ut_hat.data());
        u1 = s0.ut_hat;
    }

    // m1(nodes[i], nodes[j]) per shell for j <= i
    auto m1_table = [&](int i, int j) {
        std::vector<double> out(shell_xi.size());
        for (std::size_t k = 0; k < shell_xi.size(); ++k) {
            out[k] = i == j ? 0.0
                            : velocity_multiplier(PhasePoint{nodes[i], nodes[j], shell_xi[k], params.ell},
                                                  params.beta)
                                  .m1;
        }
        return out;
    };
    std::vector<std::vector<std::vector<double>>> kernel(m + 1);
    for (int i = 0; i <= m; ++i) {
        kernel[i].resize(i + 1);
        for (int j = 0; j <= i; ++j) kernel[i][j] = m1_table(i, j);
    }

    // fourth-order weights on [0, nodes[i]]: Simpson, with a 3/8 panel when i is odd
    auto weights = [&](int i) {
        std::vector<double> w(i + 1, 0.0);
        if (i == 0) return w;
        if (i == 1) {
            w[0] = w[1] = 0.5 * h;
            return w;
        }
        int simpson_end = i;
        if (i % 2 == 1) {
            simpson_end = i - 3;
            const double c = 3.0 * h / 8.0;
            w[i - 3] += c;
            w[i - 2] += 3.0 * c;
            w[i - 1] += 3.0 * c;
            w[i] += c;
        }
        for (int j = 0; j + 2 <= simpson_end; j += 2) {
            w[j] += h / 3.0;
            w[j + 1] += 4.0 * h / 3.0;
            w[j + 2] += h / 3.0;
        }
        return w;
    };

    auto shell_apply = [&](const std::vector<double>& mult, const std::vector<Complex>& in,
                           std::vector<Complex>& out, double weight) {
        for (std::size_t k = 0; k < ns; ++k) out[k] += weight * mult[shell_of[k]] * in[k];
    };

    // linear solution at every node
    std::vector<std::vector<Complex>> linear(m + 1, std::vector<Complex>(ns, 0.0));
    for (int i = 1; i <= m; ++i) {
        std::vector<double> mult(shell_xi.size());
        for (std::size_t k = 0; k < shell_xi.size(); ++k) {
            mult[k] = velocity_multiplier(PhasePoint{nodes[i], 0.0, shell_xi[k], params.ell}, params.beta).m1;
        }
        shell_apply(mult, u1, linear[i], 1.0);
    }

    std::vector<double> work;
    auto iterate = [&](const std::vector<std::vector<Complex>>& prev) {
        std::vector<std::vector<Complex>> src(m + 1, std::vector<Complex>(ns));
        for (int j = 0; j <= m; ++j) {
            nonlinear_source(grid, prev[j].data(), params.p, config.nonlinearity, work, src[j].data());
        }
        std::vector<std::vector<Complex>> next = linear;
        for (int i = 1; i <= m; ++i) {
            const std::vector<double> w = weights(i);
            for (int j = 0; j < i; ++j) shell_apply(kernel[i][j], src[j], next[i], w[j]);
        }
        return next;
    };

    const auto first = iterate(linear);
    const auto second = iterate(first);

    PicardIterates out;
    for (auto* target : {&out.linear, &out.first, &out.second}) target->resize(grid.physical_size());
    grid.inverse(linear[m].data(), out.linear.data());
    grid.inverse(first[m].data(), out.first.data());
    grid.inverse(second[m].data(), out.second.data());
    return out;
}

}  // namespace flrw
