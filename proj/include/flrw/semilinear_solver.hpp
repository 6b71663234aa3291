#pragma once

// Pseudospectral method of lines for
//
//     u_tt - c(t)^2 Lap u + b(t) u_t = a(t) f(u),   f(u) = |u|^p or |u|^{p-1} u,
//
// in the physical frame (c = (1+t)^{-ell}, b = beta/(1+t), a = 1) or in the
// constant-speed frame 1+tau = (1+t)^{1-ell}/(1-ell) (c = 1, b = mu/(1+tau),
// a = [(1-ell)(1+tau)]^{2 ell/(1-ell)}).

#include <optional>
#include <string>
#include <vector>

#include "flrw/decay.hpp"
#include "flrw/dopri.hpp"
#include "flrw/exponents.hpp"
#include "flrw/spectral_grid.hpp"

namespace flrw {

enum class Nonlinearity { abs_power, signed_power };

struct NonlinearRunConfig {
    ModelParams params;
    GridSpec grid;
    double horizon = 1000.0;   // final time in the frame being solved
    double delta = 0.01;       // amplitude of the velocity bump
    double bump_width = 1.0;
    double blowup_threshold = 1e6;
    double rtol = 1e-8;
    double atol = 1e-12;
    double fixed_step = 0.0;   // > 0: constant step, no error control
    Nonlinearity nonlinearity = Nonlinearity::abs_power;
    bool source_enabled = true;  // false solves the linear problem with the same integrator
    std::vector<double> q_list;
    int outputs_per_decade = 64;
    std::vector<double> output_times;  // overrides the log-spaced default when non-empty

    // Frame. In the constant-speed frame start_time is ell/(1-ell) and
    // horizon/output_times are tau values.
    bool tau_frame = false;
    double start_time = 0.0;

    /// ConfigError on inconsistent settings, including the causal budget.
    void validate() const;
    std::vector<double> resolved_output_times() const;
};

/// Coefficients of the equation actually integrated.
struct EquationCoefficients {
    double speed_exponent = 0.0;   // c(t)^2 = (1+t)^{-2 speed_exponent}
    double damping = 0.0;          // b(t) = damping/(1+t)
    double source_scale = 1.0;     // a(t) = source_scale (1+t)^{source_exponent}
    double source_exponent = 0.0;
};

EquationCoefficients equation_coefficients(const NonlinearRunConfig& config);

enum class RunStatus { completed, blowup_detected };

std::string_view to_string(RunStatus status);

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    DecaySeries series;
    std::optional<double> blowup_time;
    std::string diagnostic;
    IntegrationStats stats;
};

/// Pointwise |u|^p (or |u|^{p-1}u).
std::vector<double> nonlinearity(const std::vector<double>& field, double p,
                                 Nonlinearity kind = Nonlinearity::abs_power);

/// Spectral source term: transform of f(u) with the 2/3 mask applied.
void nonlinear_source(const SpectralGrid& grid, const Complex* u_hat, double p, Nonlinearity kind,
                      std::vector<double>& work, Complex* source_hat);

/// First time-like sample at which ||u||_inf reaches the threshold or stops being finite.
std::optional<double> detect_blowup(const std::vector<double>& field, double t, double threshold);
std::optional<double> detect_blowup(const SpectralGrid& grid, const SpectralState& state,
                                    double threshold);

RunOutcome solve_semilinear(const NonlinearRunConfig& config);

/// Same run but also returns the final spectral state.
RunOutcome solve_semilinear(const NonlinearRunConfig& config, SpectralState* final_state);

/// tau = (1+t)^{1-ell}/(1-ell) - 1 and its inverse.
double tau_of_t(double t, double ell);
double t_of_tau(double tau, double ell);

/// Constant-speed formulation of a physical-frame configuration; output times
/// are mapped so that rows match the physical ones. ell = 0 gives the same problem.
NonlinearRunConfig to_tau_frame(const NonlinearRunConfig& config);

/// Maps the time column of a constant-speed run back to physical time.
DecaySeries from_tau_frame(const DecaySeries& series, double ell);

/// Two Picard iterates of the Duhamel formula on a short horizon, for validation
/// of the time stepper. Returns the displacement fields of the linear part,
/// the first and the second iterate at time t.
struct PicardIterates {
    std::vector<double> linear;
    std::vector<double> first;
    std::vector<double> second;
};

PicardIterates picard_iterates(const NonlinearRunConfig& config, double t, int quadrature_nodes);

}  // namespace flrw
