#pragma once

// Spectral propagation of the linear problem by Fourier multipliers.

#include <vector>

#include "flrw/decay.hpp"
#include "flrw/exponents.hpp"
#include "flrw/spectral_grid.hpp"

namespace flrw {

struct LinearOptions {
    double support_radius = 1.0;  // radius of the data support, for the causal budget
    bool check_budget = true;
};

/// State at time t from the state at state.t. With zero displacement the
/// velocity multiplier m1 is applied shell by shell; otherwise every shell is
/// propagated by the per-mode ODE. Throws ConfigError when the grid cannot hold
/// the signal up to time t.
SpectralState propagate_linear(const SpectralGrid& grid, const SpectralState& state, double t,
                               const ModelParams& params, const LinearOptions& options = {});

SpectralState propagate_linear(const SpectralState& state, double t, const ModelParams& params,
                               const LinearOptions& options = {});

/// Norms of the linear solution at each output time, each propagated directly
/// from the initial state.
DecaySeries linear_norm_series(const SpectralGrid& grid, const SpectralState& initial,
                               const std::vector<double>& times, const ModelParams& params,
                               const std::vector<double>& q_list,
                               const LinearOptions& options = {});

/// L2, Linf and L^q norms of a physical field, in DecayRow form.
DecayRow norm_row(double t, const std::vector<double>& field, double cell_volume,
                  const std::vector<double>& q_list);

}  // namespace flrw
