#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flrw/errors.hpp"
#include "flrw/exponents.hpp"
#include "flrw/spectral_grid.hpp"

using namespace flrw;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((GridSpec{3, 64, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((GridSpec{1, 100, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((GridSpec{1, 64, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((GridSpec{2, 64, 1.0}.validate()));
    CHECK(GridSpec{2, 64, 4.0}.spectral_size() == 64u * 33u);
}

TEST_CASE("causal budget") {
    CHECK(propagation_radius(0.0, 0.0, 10.0) == doctest::Approx(10.0));
    CHECK(propagation_radius(0.5, 0.0, 3.0) == doctest::Approx(2.0));
    CHECK_NOTHROW(check_causal_budget(GridSpec{1, 64, 64.0}, 0.5, 1000.0, 1.0));
    CHECK_THROWS_AS(check_causal_budget(GridSpec{1, 64, 32.0}, 0.0, 40.0, 1.0), ConfigError);
}

TEST_CASE("round trip and Hermitian symmetry") {
    for (int n : {1, 2}) {
        const SpectralGrid grid(GridSpec{n, 64, 5.0});
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> field(grid.physical_size());
        for (double& x : field) x = u(rng);
        std::vector<Complex> c(grid.spectral_size());
        grid.forward(field.data(), c.data());
        CHECK(grid.hermitian_defect(c.data()) < 1e-14);
        std::vector<double> back(field.size());
        grid.inverse(c.data(), back.data());
        double worst = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i) worst = std::max(worst, std::abs(back[i] - field[i]));
        CHECK(worst < 1e-14);
    }
}

TEST_CASE("coefficients approximate the continuous transform") {
    // exp(-x^2/2) has transform sqrt(2 pi) exp(-xi^2/2); the zero mode carries no phase
    const SpectralGrid grid(GridSpec{1, 256, 20.0});
    std::vector<double> field(grid.physical_size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double x = grid.coordinate(i);
        field[i] = std::exp(-0.5 * x * x);
    }
    std::vector<Complex> c(grid.spectral_size());
    grid.forward(field.data(), c.data());
    CHECK(std::abs(c[0]) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    for (std::size_t k = 1; k < 20; ++k) {
        const double xi = std::sqrt(grid.xi2()[k]);
        CHECK(std::abs(c[k]) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi)).epsilon(1e-10));
    }
}

TEST_CASE("shells group equal frequencies") {
    const SpectralGrid grid(GridSpec{2, 32, 3.0});
    const auto& shell = grid.shell_of();
    const auto& xi = grid.shell_xi();
    for (std::size_t k = 0; k < shell.size(); ++k) {
        CHECK(xi[shell[k]] * xi[shell[k]] == doctest::Approx(grid.xi2()[k]).epsilon(1e-13));
    }
    for (std::size_t i = 1; i < xi.size(); ++i) CHECK(xi[i] > xi[i - 1]);
}

TEST_CASE("two-thirds mask") {
    const SpectralGrid grid(GridSpec{1, 96 / 3 * 2, 1.0});
    const int N = grid.spec().points_per_axis;
    int kept = 0;
    for (unsigned char m : grid.dealias_mask()) kept += m;
    CHECK(kept == N / 3 + 1);
    CHECK(grid.max_dealiased_xi() == doctest::Approx(std::numbers::pi * (N / 3)));
}

TEST_CASE("reflection index") {
    const SpectralGrid grid(GridSpec{2, 16, 1.0});
    for (std::size_t i = 0; i < grid.physical_size(); ++i) {
        CHECK(grid.reflected_index(grid.reflected_index(i)) == i);
    }
    // the sample at -x of (-a + dx, -a) row 0 col 1 is row 0 col N-1
    CHECK(grid.reflected_index(1) == 15u);
}

TEST_CASE("lq norms") {
    const GridSpec spec{1, 1024, 4.0};
    const SpectralGrid grid(spec);
    // indicator of height 1 on [-w/2, w/2): norm w^{1/q}
    const double w = 1.5;
    std::vector<double> field(grid.physical_size(), 0.0);
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double x = grid.coordinate(i);
        if (x >= -w / 2 && x < w / 2) field[i] = 1.0;
    }
    for (double q : {1.0, 2.0, 6.0}) {
        CHECK(std::abs(lq_norm(field, spec.cell_volume(), q) - std::pow(w, 1.0 / q)) < 1e-3);
    }
    CHECK(lq_norm(field, spec.cell_volume(), kInfinity) == 1.0);
    // scaling by 1e200 must not overflow at q = 6
    for (double& x : field) x *= 1e200;
    CHECK(lq_norm(field, spec.cell_volume(), 6.0) == doctest::Approx(1e200 * std::pow(w, 1.0 / 6.0)).epsilon(1e-3));
    CHECK_THROWS_AS(lq_norm(field, 1.0, 0.5), DomainError);
}

TEST_CASE("bump data") {
    const SpectralGrid grid(GridSpec{2, 64, 4.0});
    const auto f = bump_field(grid, 2.0, 1.0);
    double peak = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        peak = std::max(peak, f[i]);
        const std::size_t r = i / 64;
        const std::size_t c = i % 64;
        const double x = grid.coordinate(c);
        const double y = grid.coordinate(r);
        if (x * x + y * y >= 1.0) CHECK(f[i] == 0.0);
        CHECK(f[i] == f[grid.reflected_index(i)]);
    }
    CHECK(peak == doctest::Approx(2.0 * std::exp(-1.0)));
    const SpectralState s = bump_state(grid, 2.0);
    CHECK(lq_norm(grid, s, 2.0) == 0.0);
}
