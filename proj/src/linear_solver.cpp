#include "flrw/linear_solver.hpp"

#include <algorithm>
#include <cmath>

#include "flrw/errors.hpp"
#include "flrw/multipliers.hpp"

namespace flrw {

namespace {

bool all_zero(const std::vector<Complex>& v) {
    return std::all_of(v.begin(), v.end(), [](const Complex& c) { return c == Complex(0.0, 0.0); });
}

}  // namespace

SpectralState propagate_linear(const SpectralGrid& grid, const SpectralState& state, double t,
                               const ModelParams& params, const LinearOptions& options) {
    params.validate();
    if (params.n != grid.spec().n) throw ConfigError("model and grid dimensions differ");
    if (state.u_hat.size() != grid.spectral_size() || state.ut_hat.size() != grid.spectral_size()) {
        throw ConfigError("state does not match the grid");
    }
    const double s = state.t;
    if (!(t >= s)) throw DomainError("can only propagate forward in time");
    if (options.check_budget) {
        check_causal_budget(grid.spec(), params.ell, t, options.support_radius);
    }
    if (t == s) return state;

    const auto& shell_xi = grid.shell_xi();
    const auto& shell_of = grid.shell_of();
    const bool velocity_only = all_zero(state.u_hat);

    // per shell: (m0, dt m0) for the displacement and (m1, dt m1) for the velocity
    std::vector<double> m0(shell_xi.size(), 0.0), dm0(shell_xi.size(), 0.0);
    std::vector<double> m1(shell_xi.size()), dm1(shell_xi.size());
    for (std::size_t i = 0; i < shell_xi.size(); ++i) {
        const PhasePoint point{t, s, shell_xi[i], params.ell};
        if (velocity_only) {
            const VelocityMultiplier v = velocity_multiplier(point, params.beta);
            m1[i] = v.m1;
            dm1[i] = v.dt_m1;
        } else {
            const ModeValue a = mode_ode(point, params.beta, 1.0, 0.0);
            const ModeValue b = mode_ode(point, params.beta, 0.0, 1.0);
            m0[i] = a.u;
            dm0[i] = a.ut;
            m1[i] = b.u;
            dm1[i] = b.ut;
        }
    }

    SpectralState out;
    out.grid = state.grid;
    out.t = t;
    out.u_hat.resize(state.u_hat.size());
    out.ut_hat.resize(state.ut_hat.size());
    for (std::size_t k = 0; k < shell_of.size(); ++k) {
        const std::uint32_t i = shell_of[k];
        out.u_hat[k] = m0[i] * state.u_hat[k] + m1[i] * state.ut_hat[k];
        out.ut_hat[k] = dm0[i] * state.u_hat[k] + dm1[i] * state.ut_hat[k];
    }
    return out;
}

SpectralState propagate_linear(const SpectralState& state, double t, const ModelParams& params,
                               const LinearOptions& options) {
    const SpectralGrid grid(state.grid);
    return propagate_linear(grid, state, t, params, options);
}

DecayRow norm_row(double t, const std::vector<double>& field, double cell_volume,
                  const std::vector<double>& q_list) {
    DecayRow row;
    row.t = t;
    row.l2 = lq_norm(field, cell_volume, 2.0);
    row.linf = lq_norm(field, cell_volume, kInfinity);
    for (double q : q_list) row.lq.push_back(lq_norm(field, cell_volume, q));
    return row;
}

DecaySeries linear_norm_series(const SpectralGrid& grid, const SpectralState& initial,
                               const std::vector<double>& times, const ModelParams& params,
                               const std::vector<double>& q_list, const LinearOptions& options) {
    DecaySeries series;
    series.q_list = q_list;
    if (!times.empty() && options.check_budget) {
        check_causal_budget(grid.spec(), params.ell, times.back(), options.support_radius);
    }
    std::vector<double> field(grid.physical_size());
    for (double t : times) {
        const SpectralState state = propagate_linear(grid, initial, t, params, options);
        grid.inverse(state.u_hat.data(), field.data());
        series.rows.push_back(norm_row(t, field, grid.spec().cell_volume(), q_list));
    }
    return series;
}

}  // namespace flrw
