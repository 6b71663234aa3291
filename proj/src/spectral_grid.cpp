#include "flrw/spectral_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int signed_mode(std::size_t i, int n) {
    const int m = static_cast<int>(i);
    return m <= n / 2 ? m : m - n;
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 64) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

void GridSpec::validate() const {
    if (n != 1 && n != 2) throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(n));
    if (!is_power_of_two(points_per_axis) || points_per_axis < 8) {
        throw ConfigError("points_per_axis must be a power of two >= 8, got " +
                          std::to_string(points_per_axis));
    }
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw ConfigError("half_length must be positive");
    }
}

double GridSpec::cell_volume() const { return n == 1 ? dx() : dx() * dx(); }

std::size_t GridSpec::physical_size() const {
    const std::size_t N = static_cast<std::size_t>(points_per_axis);
    return n == 1 ? N : N * N;
}

std::size_t GridSpec::spectral_size() const {
    const std::size_t N = static_cast<std::size_t>(points_per_axis);
    return n == 1 ? N / 2 + 1 : N * (N / 2 + 1);
}

double propagation_radius(double ell, double s, double t) {
    if (!(ell >= 0.0 && ell < 1.0)) throw DomainError("ell must satisfy 0 <= ell < 1");
    const double e = 1.0 - ell;
    return (std::pow(1.0 + t, e) - std::pow(1.0 + s, e)) / e;
}

void check_causal_budget(const GridSpec& grid, double ell, double horizon, double support_radius) {
    grid.validate();
    const double needed = propagation_radius(ell, 0.0, horizon) + support_radius;
    if (!(grid.half_length > needed)) {
        throw ConfigError("half_length " + std::to_string(grid.half_length) +
                          " does not exceed the causal radius " + std::to_string(needed) +
                          " for horizon " + std::to_string(horizon));
    }
}

struct SpectralGrid::Plans {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    std::size_t nreal = 0;
    std::size_t nspec = 0;

    explicit Plans(const GridSpec& g) : nreal(g.physical_size()), nspec(g.spectral_size()) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        real = fftw_alloc_real(nreal);
        spec = fftw_alloc_complex(nspec);
        const int N = g.points_per_axis;
        if (g.n == 1) {
            forward = fftw_plan_dft_r2c_1d(N, real, spec, FFTW_ESTIMATE);
            inverse = fftw_plan_dft_c2r_1d(N, spec, real, FFTW_ESTIMATE);
        } else {
            forward = fftw_plan_dft_r2c_2d(N, N, real, spec, FFTW_ESTIMATE);
            inverse = fftw_plan_dft_c2r_2d(N, N, spec, real, FFTW_ESTIMATE);
        }
        if (!forward || !inverse) throw ConfigError("FFTW planning failed");
    }
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
        fftw_free(real);
        fftw_free(spec);
    }
};

SpectralGrid::SpectralGrid(const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    plans_ = std::make_unique<Plans>(spec_);

    const int N = spec_.points_per_axis;
    const std::size_t cols = static_cast<std::size_t>(N / 2 + 1);
    const std::size_t rows = spec_.n == 1 ? 1 : static_cast<std::size_t>(N);
    const double k0 = std::numbers::pi / spec_.half_length;
    const int keep = N / 3;  // |m| <= N/3 survives the 2/3 rule

    const std::size_t total = spectral_size();
    xi2_.resize(total);
    mask_.resize(total);
    std::vector<std::uint64_t> keys(total);
    for (std::size_t r = 0; r < rows; ++r) {
        const int my = spec_.n == 1 ? 0 : signed_mode(r, N);
        for (std::size_t c = 0; c < cols; ++c) {
            const int mx = static_cast<int>(c);
            const std::size_t k = r * cols + c;
            const std::uint64_t key = static_cast<std::uint64_t>(mx) * mx +
                                      static_cast<std::uint64_t>(my) * my;
            keys[k] = key;
            xi2_[k] = k0 * k0 * static_cast<double>(key);
            mask_[k] = (mx <= keep && std::abs(my) <= keep) ? 1 : 0;
        }
    }
    std::vector<std::uint64_t> unique = keys;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    shell_xi_.resize(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i) {
        shell_xi_[i] = k0 * std::sqrt(static_cast<double>(unique[i]));
    }
    shell_of_.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
        shell_of_[k] = static_cast<std::uint32_t>(
            std::lower_bound(unique.begin(), unique.end(), keys[k]) - unique.begin());
    }
}

SpectralGrid::~SpectralGrid() = default;

double SpectralGrid::coordinate(std::size_t i) const {
    return -spec_.half_length + static_cast<double>(i) * spec_.dx();
}

void SpectralGrid::forward(const double* field, Complex* coeffs) const {
    std::copy(field, field + plans_->nreal, plans_->real);
    fftw_execute(plans_->forward);
    const double scale = spec_.cell_volume();
    const auto* out = reinterpret_cast<const Complex*>(plans_->spec);
    for (std::size_t k = 0; k < plans_->nspec; ++k) coeffs[k] = out[k] * scale;
}

void SpectralGrid::inverse(const Complex* coeffs, double* field) const {
    auto* in = reinterpret_cast<Complex*>(plans_->spec);
    std::copy(coeffs, coeffs + plans_->nspec, in);
    fftw_execute(plans_->inverse);
    const double scale = 1.0 / (static_cast<double>(plans_->nreal) * spec_.cell_volume());
    for (std::size_t i = 0; i < plans_->nreal; ++i) field[i] = plans_->real[i] * scale;
}

void SpectralGrid::dealias(Complex* coeffs) const {
    for (std::size_t k = 0; k < mask_.size(); ++k) {
        if (!mask_[k]) coeffs[k] = 0.0;
    }
}

double SpectralGrid::max_dealiased_xi() const {
    const double k0 = std::numbers::pi / spec_.half_length;
    const double m = spec_.points_per_axis / 3;
    return spec_.n == 1 ? k0 * m : k0 * m * std::sqrt(2.0);
}

double SpectralGrid::hermitian_defect(const Complex* coeffs) const {
    const int N = spec_.points_per_axis;
    const std::size_t cols = static_cast<std::size_t>(N / 2 + 1);
    double largest = 0.0;
    for (std::size_t k = 0; k < spectral_size(); ++k) largest = std::max(largest, std::abs(coeffs[k]));
    if (largest == 0.0) return 0.0;
    double worst = 0.0;
    if (spec_.n == 1) {
        worst = std::max(std::abs(coeffs[0].imag()), std::abs(coeffs[cols - 1].imag()));
    } else {
        for (std::size_t c : {std::size_t{0}, cols - 1}) {
            for (std::size_t r = 0; r < static_cast<std::size_t>(N); ++r) {
                const std::size_t mirror = (static_cast<std::size_t>(N) - r) % N;
                const Complex a = coeffs[r * cols + c];
                const Complex b = coeffs[mirror * cols + c];
                worst = std::max(worst, std::abs(a - std::conj(b)));
            }
        }
    }
    return worst / largest;
}

std::size_t SpectralGrid::reflected_index(std::size_t index) const {
    const std::size_t N = static_cast<std::size_t>(spec_.points_per_axis);
    if (spec_.n == 1) return (N - index) % N;
    const std::size_t r = index / N;
    const std::size_t c = index % N;
    return ((N - r) % N) * N + (N - c) % N;
}

double lq_norm(const std::vector<double>& field, double cell_volume, double q) {
    if (!(q >= 1.0)) throw DomainError("L^q norm needs q >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : field) m = std::max(m, std::abs(v));
        return m;
    }
    // scale by the maximum so that large q neither overflows nor underflows
    double m = 0.0;
    for (double v : field) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    std::vector<double> powers(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double r = std::abs(field[i]) / m;
        powers[i] = q == 2.0 ? r * r : std::pow(r, q);
    }
    const double sum = pairwise_sum(powers.data(), powers.size());
    return m * std::pow(sum * cell_volume, 1.0 / q);
}

double lq_norm(const SpectralGrid& grid, const SpectralState& state, double q) {
    std::vector<double> field(grid.physical_size());
    grid.inverse(state.u_hat.data(), field.data());
    return lq_norm(field, grid.spec().cell_volume(), q);
}

double lq_norm(const SpectralState& state, double q) {
    const SpectralGrid grid(state.grid);
    return lq_norm(grid, state, q);
}

std::vector<double> bump_field(const SpectralGrid& grid, double amplitude, double width) {
    if (!(width > 0.0)) throw DomainError("bump width must be positive");
    const GridSpec& g = grid.spec();
    const std::size_t N = static_cast<std::size_t>(g.points_per_axis);
    std::vector<double> field(grid.physical_size(), 0.0);
    auto profile = [&](double r2) {
        const double s = r2 / (width * width);
        return s < 1.0 ? amplitude * std::exp(-1.0 / (1.0 - s)) : 0.0;
    };
    if (g.n == 1) {
        for (std::size_t i = 0; i < N; ++i) {
            const double x = grid.coordinate(i);
            field[i] = profile(x * x);
        }
    } else {
        for (std::size_t r = 0; r < N; ++r) {
            const double y = grid.coordinate(r);
            for (std::size_t c = 0; c < N; ++c) {
                const double x = grid.coordinate(c);
                field[r * N + c] = profile(x * x + y * y);
            }
        }
    }
    return field;
}

SpectralState bump_state(const SpectralGrid& grid, double amplitude, double width, double t0) {
    SpectralState state;
    state.grid = grid.spec();
    state.t = t0;
    state.u_hat.assign(grid.spectral_size(), Complex(0.0, 0.0));
    state.ut_hat.assign(grid.spectral_size(), Complex(0.0, 0.0));
    const std::vector<double> field = bump_field(grid, amplitude, width);
    grid.forward(field.data(), state.ut_hat.data());
    return state;
}

}  // namespace flrw
