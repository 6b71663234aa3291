#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flrw/errors.hpp"
#include "flrw/multipliers.hpp"
#include "oracles.hpp"

using namespace flrw;

namespace {

constexpr double kPi = std::numbers::pi;

double rho_of(double beta, double ell) { return (1.0 - beta) / (2.0 * (1.0 - ell)); }

double scaled_error(double got, double want) { return std::abs(got - want) / (1.0 + std::abs(want)); }

}  // namespace

TEST_CASE("phase point arguments and validation") {
    const PhasePoint p{3.0, 0.0, 2.0, 0.5};
    CHECK(p.z_s() == doctest::Approx(4.0));
    CHECK(p.z_t() == doctest::Approx(8.0));
    CHECK_THROWS_AS((PhasePoint{1.0, 2.0, 1.0, 0.5}.validate()), DomainError);
    CHECK_THROWS_AS((PhasePoint{1.0, 0.0, 1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS(psi(0, -1.5, 0, PhasePoint{1.0, 0.0, 0.0, 0.5}), SingularityError);
}

TEST_CASE("psi at coinciding times") {
    for (double gamma : {-2.0, -1.5, -0.75, 0.3}) {
        for (double xi : {0.01, 0.7, 30.0}) {
            const PhasePoint p{2.0, 2.0, xi, 0.5};
            CHECK(std::abs(psi(0, gamma, 0, p)) == 0.0);
            const Complex w = psi(1, gamma, -1, p);
            const Complex want = xi * 4.0 * Complex(0, 1) / (kPi * p.z_s());
            CHECK(std::abs(w - want) <= 1e-12 * std::abs(want));
        }
    }
}

TEST_CASE("psi with delta = 0 is purely imaginary") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const PhasePoint p{5.0 * u(rng) + 1.0, u(rng), 10.0 * u(rng) + 1e-3, 0.5};
        CHECK(psi(0, -1.5 + u(rng), 0, p).real() == 0.0);
    }
}

TEST_CASE("Hankel, J/Y and reflection forms of psi agree") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_int = 0.0;
    double worst_frac = 0.0;
    double ratio_int = 0.0;
    double ratio_frac = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double s = 10.0 * u(rng);
        const PhasePoint p{s + 40.0 * u(rng) + 0.1, s, 0.01 + 10.0 * u(rng), 0.5};
        // integer order (beta = 3, ell = 1/2 gives rho = -2)
        for (auto [j, g, d] : {std::tuple{0.0, -2.0, 0}, {1.0, -2.0, -1}, {1.0, -3.0, 1}}) {
            const Complex h = psi(j, g, d, p);
            const Complex jy = psi_jy_form(j, g, d, p);
            worst_int = std::max(worst_int, std::abs(h - jy) / std::abs(h));
            ratio_int = (jy / h).real();
        }
        // non-integer order
        for (auto [j, g, d] : {std::tuple{0.0, -1.5, 0}, {1.0, -0.75, -1}, {2.0, -1.75, 0}}) {
            const Complex h = psi(j, g, d, p);
            const Complex jy = psi_jy_form(j, g, d, p);
            const Complex refl = psi_reflection_form(j, g, d, p);
            const double scale = std::abs(h);
            worst_frac = std::max({worst_frac, std::abs(h - jy) / scale, std::abs(h - refl) / scale});
            ratio_frac = (refl / h).real();
        }
    }
    MESSAGE("constant relating the forms: integer " << ratio_int << ", non-integer " << ratio_frac);
    MESSAGE("worst relative disagreement: integer " << worst_int << ", non-integer " << worst_frac);
    CHECK(worst_int <= 1e-8);
    CHECK(worst_frac <= 1e-8);
    CHECK_THROWS_AS(psi_reflection_form(0, -2.0, 0, PhasePoint{2, 1, 1, 0.5}), DomainError);
}

TEST_CASE("initial-time identities of the closed formula") {
    for (double ell : {0.0, 0.25, 0.5, 2.0 / 3.0}) {
        for (double beta : {1.5, 2.0, 3.0}) {
            for (double s : {0.0, 1.0, 7.5}) {
                for (double xi : {0.05, 1.0, 40.0}) {
                    const MultiplierEval m = multiplier_formula({s, s, xi, ell}, beta);
                    CHECK(std::abs(m.m1) <= 1e-8);
                    CHECK(std::abs(m.dt_m1 - 1.0) <= 1e-8);
                    CHECK(std::abs(m.dt_m0) <= 1e-8);
                    CHECK(std::abs(m.m0 - std::pow(1.0 + s, ell)) <= 1e-8 * std::pow(1.0 + s, ell));
                    CHECK(std::abs(m.m0_normalized - 1.0) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("constant-speed sanity case") {
    // ell = 0, beta = 2: u = v/(1+t) with v'' + xi^2 v = 0.
    for (double xi : {0.1, 1.0, 7.0}) {
        for (double t : {0.5, 3.0, 40.0}) {
            const double s = 0.25;
            const MultiplierEval m = multiplier_eval({t, s, xi, 0.0}, 2.0);
            const double want = (1.0 + s) / (1.0 + t) * std::sin(xi * (t - s)) / xi;
            CHECK(std::abs(m.m1.real() - want) <= 1e-10);
            CHECK(m.m1.imag() == 0.0);
        }
    }
}

TEST_CASE("spot value against the per-mode oracle") {
    const PhasePoint p{5.0, 0.0, 1.0, 0.5};
    const MultiplierEval m = multiplier_eval(p, 3.0);
    const oracle::Mode o = oracle::mode(5.0, 0.0, 1.0, 0.5, 3.0, 0.0, 1.0);
    CHECK(!m.from_ode);
    CHECK(std::abs(m.m1.real() - o.u) <= 1e-6 * std::abs(o.u));
    CHECK(std::abs(m.dt_m1.real() - o.ut) <= 1e-6 * std::abs(o.ut));
}

TEST_CASE("oracle equivalence on random samples") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double ells[] = {0.25, 0.5, 2.0 / 3.0};
    const double betas[] = {1.5, 2.0, 3.0};
    double worst_m1 = 0.0;
    double worst_dm1 = 0.0;
    double worst_m0 = 0.0;
    double worst_dm0 = 0.0;
    double worst_imag = 0.0;
    for (int i = 0; i < 150; ++i) {
        const double s = 10.0 * u(rng);
        const double t = s + (50.0 - s) * u(rng);
        const double xi = 20.0 * u(rng) + 1e-9;
        const double ell = ells[i % 3];
        const double beta = betas[(i / 3) % 3];
        const MultiplierEval m = multiplier_eval({t, s, xi, ell}, beta);
        const oracle::Mode v = oracle::mode(t, s, xi, ell, beta, 0.0, 1.0);
        const oracle::Mode d = oracle::mode(t, s, xi, ell, beta, 1.0, 0.0);
        worst_m1 = std::max(worst_m1, scaled_error(m.m1.real(), v.u));
        worst_dm1 = std::max(worst_dm1, scaled_error(m.dt_m1.real(), v.ut));
        worst_m0 = std::max(worst_m0, scaled_error(m.m0_normalized.real(), d.u));
        worst_dm0 = std::max(worst_dm0, scaled_error(m.dt_m0_normalized.real(), d.ut));
        worst_imag = std::max({worst_imag, std::abs(m.m1.imag()) / (1 + std::abs(m.m1)),
                               std::abs(m.m0.imag()) / (1 + std::abs(m.m0))});
        const VelocityMultiplier vm = velocity_multiplier({t, s, xi, ell}, beta);
        CHECK(vm.m1 == doctest::Approx(m.m1.real()).epsilon(1e-14));
        CHECK(vm.dt_m1 == doctest::Approx(m.dt_m1.real()).epsilon(1e-14));
    }
    MESSAGE("m1 " << worst_m1 << ", dt_m1 " << worst_dm1 << ", m0 (normalized) " << worst_m0
                  << ", dt_m0 (normalized) " << worst_dm0);
    CHECK(worst_m1 <= 1e-6);
    CHECK(worst_dm1 <= 1e-6);
    CHECK(worst_m0 <= 1e-6);
    CHECK(worst_dm0 <= 1e-6);
    CHECK(worst_imag <= 1e-8);
}

TEST_CASE("near-coincidence path uses the mode ODE") {
    const PhasePoint close{1.0 + 1e-6, 1.0, 5.0, 0.5};
    const MultiplierEval m = multiplier_eval(close, 2.0);
    CHECK(m.from_ode);
    CHECK(m.m1.real() == doctest::Approx(1e-6).epsilon(1e-5));
    const PhasePoint low{30.0, 0.0, 1e-5, 0.5};
    CHECK(multiplier_eval(low, 2.0).from_ode);
    const oracle::Mode o = oracle::mode(30.0, 0.0, 1e-5, 0.5, 2.0, 0.0, 1.0);
    CHECK(scaled_error(multiplier_eval(low, 2.0).m1.real(), o.u) <= 1e-8);
}

TEST_CASE("mode ODE matches the independent integrator") {
    for (double xi : {0.0, 0.3, 4.0}) {
        const PhasePoint p{20.0, 2.0, xi, 2.0 / 3.0};
        const ModeValue a = mode_ode(p, 1.5, 0.3, -0.7);
        const oracle::Mode b = oracle::mode(20.0, 2.0, xi, 2.0 / 3.0, 1.5, 0.3, -0.7);
        CHECK(scaled_error(a.u, b.u) <= 1e-9);
        CHECK(scaled_error(a.ut, b.ut) <= 1e-9);
    }
}

TEST_CASE("m1 satisfies the mode equation") {
    const double ell = 0.5;
    const double beta = 3.0;
    const double s = 1.0;
    const double xi = 2.0;
    const double h = 1e-2;
    for (double t : {3.0, 8.0, 20.0}) {
        auto m1 = [&](double r) { return multiplier_eval({r, s, xi, ell}, beta).m1.real(); };
        const double f0 = m1(t);
        const double fm2 = m1(t - 2 * h), fm1 = m1(t - h), fp1 = m1(t + h), fp2 = m1(t + 2 * h);
        const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        const double a = d2;
        const double b = beta / (1 + t) * d1;
        const double c = std::pow(1 + t, -2 * ell) * xi * xi * f0;
        const double largest = std::max({std::abs(a), std::abs(b), std::abs(c)});
        CHECK(std::abs(a + b + c) <= 1e-4 * largest);
    }
}

TEST_CASE("zero-frequency limit") {
    CHECK(zero_frequency_m1(2.0, 2.0, 2.0) == 0.0);
    CHECK(zero_frequency_m1(3.0, 0.0, 2.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(zero_frequency_m1(std::exp(1.0) - 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(zero_frequency_m1(3.0, 0.0, 1.0 + 1e-12) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-10));
    CHECK(zero_frequency_dt_m1(3.0, 0.0, 2.0) == doctest::Approx(1.0 / 16.0));
    const double limit = zero_frequency_m1(10.0, 1.0, 3.0);
    const MultiplierEval m = multiplier_eval({10.0, 1.0, 1e-6, 0.5}, 3.0);
    CHECK(std::abs(m.m1.real() - limit) <= 1e-6 * limit);
    const MultiplierEval f = multiplier_formula({10.0, 1.0, 1e-4, 0.5}, 3.0);
    CHECK(std::abs(f.m1.real() - limit) <= 1e-6 * limit);
    const MultiplierEval z = multiplier_eval({10.0, 1.0, 0.0, 0.5}, 3.0);
    CHECK(z.m1.real() == limit);
}

TEST_CASE("zones") {
    CHECK(zone_classify({0.0, 0.0, 2.0, 0.5}) == Zone::Z1);
    CHECK(zone_classify({99.0, 0.0, 0.05, 0.5}) == Zone::Z3);
    CHECK(zone_classify({99.0, 0.0, 0.5, 0.5}) == Zone::Z2);
    // ties go to the lower-numbered zone
    CHECK(zone_classify({99.0, 0.0, 1.0, 0.5}) == Zone::Z1);
    CHECK(zone_classify({99.0, 0.0, 0.1, 0.5}) == Zone::Z2);
    CHECK(to_string(Zone::Z2) == "Z2");
}

TEST_CASE("cutoffs") {
    const Cutoffs low = cutoffs({3.0, 0.0, 0.1, 0.5});  // 2*0.1 <= 1/2
    CHECK(low.chi1 == 0.0);
    CHECK(low.chi2 == 0.0);
    CHECK(low.chi3 == 1.0);
    const Cutoffs high = cutoffs({3.0, 0.0, 1.0, 0.5});
    CHECK(high.chi1 == 1.0);
    CHECK(high.chi2 == 0.0);
    CHECK(high.chi3 == 0.0);
    CHECK(smooth_cutoff(0.75) == doctest::Approx(0.5));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double s = 5 * u(rng);
        const Cutoffs c = cutoffs({s + 50 * u(rng), s, 1.5 * u(rng), 0.5 * u(rng)});
        CHECK(std::abs(c.chi1 + c.chi2 + c.chi3 - 1.0) <= 4e-16);
        for (double v : {c.chi1, c.chi2, c.chi3}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    // smooth and monotone across the glue region
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double v = smooth_cutoff(0.5 + 0.005 * i);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("zone-wise bound ratios") {
    CHECK_THROWS_AS(lemma1_margin(0.0, 0.0, {2, 1, 1, 0.5}), DomainError);
    const Lemma1Margin same = lemma1_margin(1.0, -1.5, {4.0, 4.0, 0.01, 0.5});
    CHECK(same.zone == Zone::Z3);
    CHECK(same.ratio == 0.0);
    for (double ell : {0.25, 0.5, 2.0 / 3.0}) {
        for (double beta : {1.5, 2.0, 3.0}) {
            const double gamma = rho_of(beta, ell);
            const ZoneBounds a = lemma1_survey(0.5, gamma, ell, 500, 42);
            const ZoneBounds b = lemma1_survey(0.5, gamma, ell, 1000, 42);
            for (int z = 0; z < 3; ++z) {
                CHECK(std::isfinite(a.max_ratio[z]));
                CHECK(b.max_ratio[z] >= a.max_ratio[z]);
                CHECK(b.max_ratio[z] <= 1.1 * a.max_ratio[z]);
            }
        }
    }
}
