#pragma once

// Periodic grids on [-a, a)^n (n = 1, 2) with FFTW real-to-complex transforms.
//
// Spectral coefficients approximate the continuous transform: they are the
// DFT of the samples times the cell volume dx^n (up to a unit phase), so they
// do not depend on the resolution.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace flrw {

using Complex = std::complex<double>;

struct GridSpec {
    int n = 1;                    // dimension, 1 or 2
    int points_per_axis = 1024;   // power of two
    double half_length = 64.0;    // the box is [-half_length, half_length)^n

    /// Throws ConfigError on unsupported dimension, non power of two, etc.
    void validate() const;

    double dx() const { return 2.0 * half_length / points_per_axis; }
    double cell_volume() const;
    std::size_t physical_size() const;
    std::size_t spectral_size() const;  // r2c layout: N (1D) or N x (N/2+1) (2D)
};

/// Distance travelled by a signal of speed (1+t)^{-ell} between s and t.
double propagation_radius(double ell, double s, double t);

/// ConfigError unless half_length exceeds the propagation radius over [0, horizon]
/// plus the support radius of the data.
void check_causal_budget(const GridSpec& grid, double ell, double horizon, double support_radius);

struct SpectralState {
    std::vector<Complex> u_hat;
    std::vector<Complex> ut_hat;
    double t = 0.0;
    GridSpec grid;
};

class SpectralGrid {
public:
    explicit SpectralGrid(const GridSpec& spec);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    const GridSpec& spec() const { return spec_; }
    std::size_t physical_size() const { return spec_.physical_size(); }
    std::size_t spectral_size() const { return spec_.spectral_size(); }

    /// Coordinate of sample i along one axis: -a + i dx.
    double coordinate(std::size_t i) const;

    /// Physical samples (row-major, x fastest in 1D; y rows of x in 2D) -> coefficients.
    void forward(const double* field, Complex* coeffs) const;
    /// Coefficients -> physical samples; exact inverse of forward.
    void inverse(const Complex* coeffs, double* field) const;

    /// |xi|^2 for each spectral index.
    const std::vector<double>& xi2() const { return xi2_; }
    /// Shells of equal |xi|: shell_of()[k] indexes shell_xi().
    const std::vector<std::uint32_t>& shell_of() const { return shell_of_; }
    const std::vector<double>& shell_xi() const { return shell_xi_; }
    /// 1 where the 2/3 rule keeps the mode, 0 where it is zeroed.
    const std::vector<unsigned char>& dealias_mask() const { return mask_; }

    void dealias(Complex* coeffs) const;

    /// Largest |xi| kept by the 2/3 rule.
    double max_dealiased_xi() const;

    /// Largest asymmetry of coefficients that must be Hermitian (k_x = 0 and
    /// Nyquist columns), relative to the largest coefficient. 0 for a real field.
    double hermitian_defect(const Complex* coeffs) const;

    /// Index of the sample at -x (periodic reflection i -> (N - i) mod N per axis).
    std::size_t reflected_index(std::size_t index) const;

private:
    struct Plans;
    GridSpec spec_;
    std::unique_ptr<Plans> plans_;
    std::vector<double> xi2_;
    std::vector<std::uint32_t> shell_of_;
    std::vector<double> shell_xi_;
    std::vector<unsigned char> mask_;
};

/// Discrete L^q norm (sum |u_i|^q dx^n)^{1/q} with a fixed pairwise summation
/// order; q = infinity gives the maximum.
double lq_norm(const std::vector<double>& field, double cell_volume, double q);

/// L^q norm of the displacement of a state.
double lq_norm(const SpectralGrid& grid, const SpectralState& state, double q);
double lq_norm(const SpectralState& state, double q);

/// Compactly supported smooth bump amplitude * exp(-1/(1 - (|x|/width)^2)) sampled on the grid.
std::vector<double> bump_field(const SpectralGrid& grid, double amplitude, double width = 1.0);

/// State with u = 0 and u_t = bump at time t0.
SpectralState bump_state(const SpectralGrid& grid, double amplitude, double width = 1.0,
                         double t0 = 0.0);

}  // namespace flrw
