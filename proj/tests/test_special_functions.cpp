#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "flrw/errors.hpp"
#include "flrw/special_functions.hpp"

using namespace flrw;

namespace {

constexpr double kPi = std::numbers::pi;

double boost_j(double g, double x) { return boost::math::cyl_bessel_j(g, x); }
double boost_y(double g, double x) { return boost::math::cyl_neumann(g, x); }

// |a - b| relative to the local oscillation amplitude sqrt(J^2 + Y^2).
double modulus_error(double got, double want, double g, double x) {
    const double amp = std::hypot(boost_j(g, x), boost_y(g, x));
    return std::abs(got - want) / amp;
}

}  // namespace

TEST_CASE("closed forms") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(2.5, 0.0) == 0.0);
    CHECK(bessel_j(-3.0, 0.0) == 0.0);
    CHECK(bessel_j(0.5, kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
    const double x = 1.0;
    const double amp = std::sqrt(2.0 / (kPi * x));
    CHECK(bessel_j(-0.5, x) == doctest::Approx(amp * std::cos(x)).epsilon(1e-13));
    CHECK(bessel_y(0.5, x) == doctest::Approx(-amp * std::cos(x)).epsilon(1e-13));
    for (double xx : {0.3, 2.5, 7.0, 40.0, 900.0}) {
        const double a = std::sqrt(2.0 / (kPi * xx));
        CHECK(std::abs(bessel_j(0.5, xx) - a * std::sin(xx)) <= 1e-13 * a);
        CHECK(std::abs(bessel_j(-0.5, xx) - a * std::cos(xx)) <= 1e-13 * a);
        CHECK(std::abs(bessel_y(-0.5, xx) - a * std::sin(xx)) <= 1e-13 * a);
        CHECK(std::abs(bessel_j(1.5, xx) - a * (std::sin(xx) / xx - std::cos(xx))) <= 1e-12 * a);
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(bessel_j(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(-0.5, 0.0), SingularityError);
    CHECK_THROWS_AS(bessel_y(1.0, 0.0), SingularityError);
    CHECK_THROWS_AS(bessel_y(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(hankel(HankelKind::plus, 1.0, 0.0), SingularityError);
}

TEST_CASE("sin_pi and cos_pi") {
    CHECK(sin_pi(3.0) == 0.0);
    CHECK(sin_pi(-2.0) == 0.0);
    CHECK(sin_pi(0.5) == 1.0);
    CHECK(sin_pi(1.5) == -1.0);
    CHECK(cos_pi(1.5) == 0.0);
    CHECK(cos_pi(2.0) == 1.0);
    CHECK(cos_pi(1.0) == -1.0);
    for (double v : {0.1, 0.37, 1.9, -2.3, 7.7}) {
        CHECK(sin_pi(v) == doctest::Approx(std::sin(kPi * v)).epsilon(1e-13));
        CHECK(cos_pi(v) == doctest::Approx(std::cos(kPi * v)).epsilon(1e-13));
    }
}

TEST_CASE("J against independent oracle, non-negative order") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> order(0.0, 10.0);
    std::uniform_real_distribution<double> logx(-3.0, 4.0);
    double worst_rel = 0.0;
    double worst_mod = 0.0;
    for (int i = 0; i < 4000; ++i) {
        const double g = order(rng);
        const double x = std::pow(10.0, logx(rng));
        const double got = bessel_j(g, x);
        const double want = boost_j(g, x);
        if (x < g) {  // monotone region before the first zero
            worst_rel = std::max(worst_rel, std::abs(got - want) / std::abs(want));
        } else {
            worst_mod = std::max(worst_mod, modulus_error(got, want, g, x));
        }
    }
    MESSAGE("J relative " << worst_rel << ", modulus-relative " << worst_mod);
    CHECK(worst_rel <= 1e-10);
    CHECK(worst_mod <= 1e-10);
}

TEST_CASE("J and Y against independent oracle, all orders") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> order(-10.0, 10.0);
    std::uniform_real_distribution<double> logx(-2.0, 4.0);
    double worst_j = 0.0;
    double worst_y = 0.0;
    for (int i = 0; i < 4000; ++i) {
        const double g = order(rng);
        const double x = std::pow(10.0, logx(rng));
        worst_j = std::max(worst_j, modulus_error(bessel_j(g, x), boost_j(g, x), g, x));
        worst_y = std::max(worst_y, modulus_error(bessel_y(g, x), boost_y(g, x), g, x));
    }
    MESSAGE("J modulus-relative " << worst_j << ", Y modulus-relative " << worst_y);
    CHECK(worst_j <= 1e-10);
    CHECK(worst_y <= 1e-8);
}

TEST_CASE("integer and half-integer orders used by the multipliers") {
    for (double g : {-3.0, -2.5, -2.0, -1.5, -1.0, 0.0, 1.0, 2.0, 3.0}) {
        for (double x : {1e-3, 0.05, 0.7, 1.0, 1.999, 2.0, 3.3, 19.0, 25.0, 150.0, 5000.0}) {
            CHECK(modulus_error(bessel_j(g, x), boost_j(g, x), g, x) <= 1e-10);
            CHECK(modulus_error(bessel_y(g, x), boost_y(g, x), g, x) <= 1e-9);
        }
    }
}

TEST_CASE("pair returns orders gamma and gamma - 1") {
    for (double g : {-2.2, -1.0, -0.4, 0.0, 0.3, 0.5, 1.0, 1.7, 4.0}) {
        for (double x : {0.2, 1.5, 6.0, 60.0}) {
            const BesselPair b = bessel_pair(g, x);
            CHECK(modulus_error(b.j, boost_j(g, x), g, x) <= 1e-10);
            CHECK(modulus_error(b.y, boost_y(g, x), g, x) <= 1e-9);
            CHECK(modulus_error(b.j_lower, boost_j(g - 1, x), g - 1, x) <= 1e-10);
            CHECK(modulus_error(b.y_lower, boost_y(g - 1, x), g - 1, x) <= 1e-9);
        }
    }
}

TEST_CASE("series agrees with the main evaluator where both apply") {
    for (double g : {-2.7, -1.3, -0.5, 0.0, 0.6, 3.2}) {
        for (double x : {0.01, 0.3, 0.9, 1.9}) {
            CHECK(modulus_error(bessel_j_series(g, x), boost_j(g, x), g, x) <= 1e-12);
        }
    }
}

TEST_CASE("Wronskian") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> order(-5.0, 5.0);
    std::uniform_real_distribution<double> logx(-2.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double g = order(rng);
        const double x = std::pow(10.0, logx(rng));
        const BesselPair b = bessel_pair(g + 1.0, x);  // orders g + 1 and g
        const double w = x * (b.j * b.y_lower - b.j_lower * b.y);
        // normalise by the size of the products to stay meaningful where Y is huge
        const double scale = x * (std::abs(b.j * b.y_lower) + std::abs(b.j_lower * b.y));
        worst = std::max(worst, std::abs(w - 2.0 / kPi) / std::max(1.0, scale));
    }
    MESSAGE("Wronskian defect " << worst);
    CHECK(worst <= 1e-8);
}

TEST_CASE("recurrence") {
    for (double g : {-4.3, -1.5, -0.2, 0.0, 0.8, 2.0, 6.6}) {
        for (double x : {0.5, 2.0, 9.0, 80.0, 3000.0}) {
            const double lhs = bessel_j(g - 1, x) + bessel_j(g + 1, x);
            const double rhs = 2 * g / x * bessel_j(g, x);
            const double amp = std::hypot(bessel_j(g, x), bessel_y(g, x)) * (1 + std::abs(2 * g / x));
            CHECK(std::abs(lhs - rhs) <= 1e-8 * amp);
            const double ly = bessel_y(g - 1, x) + bessel_y(g + 1, x);
            const double ry = 2 * g / x * bessel_y(g, x);
            CHECK(std::abs(ly - ry) <= 1e-8 * std::max({std::abs(ly), std::abs(ry), amp}));
        }
    }
}

TEST_CASE("connection formula at non-integer order") {
    const double g = 0.3;
    const double x = 2.0;
    const double y = (bessel_j(g, x) * std::cos(g * kPi) - bessel_j(-g, x)) / std::sin(g * kPi);
    CHECK(bessel_y(g, x) == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("Bessel ODE residual") {
    for (double g : {-2.5, -1.0, 0.4, 1.5, 3.0}) {
        for (double x : {0.8, 3.0, 12.0, 50.0}) {
            const double h = 1e-4 * std::min(1.0, x);
            for (int kind = 0; kind < 2; ++kind) {
                auto f = [&](double v) { return kind == 0 ? bessel_j(g, v) : bessel_y(g, v); };
                const double f0 = f(x);
                const double fp = (f(x + h) - f(x - h)) / (2 * h);
                const double fpp = (f(x + h) - 2 * f0 + f(x - h)) / (h * h);
                const double res = x * x * fpp + x * fp + (x * x - g * g) * f0;
                const double amp = std::hypot(bessel_j(g, x), bessel_y(g, x));
                CHECK(std::abs(res) <= 1e-5 * (1 + x * x) * std::max(std::abs(f0), 1e-2 * amp));
            }
        }
    }
}

TEST_CASE("Hankel combinations and bounds") {
    for (double g : {-2.0, -1.5, 0.5, 1.0}) {
        for (double x : {0.1, 1.0, 10.0}) {
            const Complex sum = hankel(HankelKind::plus, g, x) + hankel(HankelKind::minus, g, x);
            CHECK(std::abs(sum - Complex(2 * bessel_j(g, x), 0.0)) <= 1e-15 * std::abs(sum) + 1e-300);
        }
    }
    // |H(x)| sqrt(x) bounded for large x, |H(x)| x^{|g|} bounded for small x.
    // Constants are calibrated on a grid and must be stable when the grid is refined.
    for (double g : {-2.0, -1.5, -0.25, 0.5, 1.0, 2.0}) {
        auto calibrate = [&](int samples) {
            double high = 0.0;
            double low = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double u = (i + 0.5) / samples;
                const double xh = std::pow(10.0, 3.0 * u);  // [1, 1000]
                const double xl = std::pow(10.0, -4.0 + 4.0 * u);  // [1e-4, 1]
                high = std::max(high, std::abs(hankel(HankelKind::plus, g, xh)) * std::sqrt(xh));
                low = std::max(low, std::abs(hankel(HankelKind::minus, g, xl)) * std::pow(xl, std::abs(g)));
            }
            return std::pair{high, low};
        };
        const auto [h1, l1] = calibrate(500);
        const auto [h2, l2] = calibrate(1000);
        MESSAGE("order " << g << ": high-argument C " << h2 << ", low-argument C " << l2);
        CHECK(std::abs(h2 / h1 - 1.0) < 0.1);
        CHECK(std::abs(l2 / l1 - 1.0) < 0.1);
    }
}

TEST_CASE("small-argument power bounds") {
    for (double g : {0.5, 1.0, 2.5}) {
        double cj = 0.0;
        double cy = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = std::pow(10.0, -4.0 + 4.0 * i / 199.0);
            cj = std::max(cj, std::abs(bessel_j(g, x)) / std::pow(x, g));
            cy = std::max(cy, std::abs(bessel_y(g, x)) * std::pow(x, g));
        }
        MESSAGE("order " << g << ": C_J " << cj << ", C_Y " << cy);
        CHECK(std::isfinite(cj));
        CHECK(std::isfinite(cy));
        CHECK(cj < 1.0);
    }
}
