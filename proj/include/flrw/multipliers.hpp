#pragma once

// Fourier multipliers of the linear problem
//
//     u_tt - (1+t)^{-2 ell} Lap u + beta/(1+t) u_t = 0,  u(s) = g1, u_t(s) = g2,
//
// written through Hankel determinants psi_{j,gamma,delta}, together with the
// frequency-zone bookkeeping used by the decay estimates.

#include <cstdint>
#include <string_view>

#include "flrw/special_functions.hpp"

namespace flrw {

struct PhasePoint {
    double t = 0.0;
    double s = 0.0;
    double xi = 0.0;  // |xi|
    double ell = 0.0;

    /// Bessel arguments (1+s)^{1-ell}|xi|/(1-ell) and (1+t)^{1-ell}|xi|/(1-ell).
    double z_s() const;
    double z_t() const;

    /// Throws DomainError unless t >= s >= 0, xi >= 0, 0 <= ell < 1.
    void validate() const;
};

enum class Zone { Z1, Z2, Z3 };

std::string_view to_string(Zone zone);

/// psi_{j,gamma,delta} = |xi|^j (H-_gamma(z_s) H+_{gamma+delta}(z_t) - H+_gamma(z_s) H-_{gamma+delta}(z_t)).
Complex psi(double j, double gamma, double delta, const PhasePoint& point);

/// Same determinant as 2i|xi|^j (J_gamma(z_s) Y_{gamma+delta}(z_t) - Y_gamma(z_s) J_{gamma+delta}(z_t)).
Complex psi_jy_form(double j, double gamma, double delta, const PhasePoint& point);

/// Same determinant through J of opposite orders:
/// 2i csc(gamma pi)|xi|^j (J_{-gamma}(z_s) J_{gamma+delta}(z_t) - (-1)^delta J_gamma(z_s) J_{-gamma-delta}(z_t)).
/// Requires integer delta and non-integer gamma.
Complex psi_reflection_form(double j, double gamma, int delta, const PhasePoint& point);

struct MultiplierEval {
    Complex m0;   // as given by the closed formula; equals (1+s)^ell at t = s
    Complex m1;
    Complex dt_m0;
    Complex dt_m1;
    Complex m0_normalized;     // m0 (1+s)^{-ell}: the solution with u(s) = 1, u_t(s) = 0
    Complex dt_m0_normalized;  // its t-derivative
    Zone zone = Zone::Z1;
    bool from_ode = false;     // true when the per-mode ODE replaced the closed formula
};

/// Closed formula only; xi > 0 and t >= s.
MultiplierEval multiplier_formula(const PhasePoint& point, double beta);

/// Closed formula where it is well conditioned; the per-mode ODE when
/// z_s < 1e-3 or z_t - z_s < 1e-3; the exact limit at xi = 0.
MultiplierEval multiplier_eval(const PhasePoint& point, double beta);

/// m1 and its t-derivative only, with the same path selection as multiplier_eval.
struct VelocityMultiplier {
    double m1 = 0.0;
    double dt_m1 = 0.0;
    bool from_ode = false;
};

VelocityMultiplier velocity_multiplier(const PhasePoint& point, double beta);

/// Threshold on z_s and z_t - z_s below which the formula is replaced by the ODE.
inline constexpr double kCoincidenceThreshold = 1e-3;

/// Solution at time t of one Fourier mode,
///   u'' + beta/(1+r) u' + (1+r)^{-2 ell} xi^2 u = 0,  u(s) = u_s, u'(s) = v_s.
struct ModeValue {
    double u = 0.0;
    double ut = 0.0;
};

ModeValue mode_ode(const PhasePoint& point, double beta, double u_s, double v_s,
                   double rtol = 1e-12, double atol = 1e-15);

/// xi -> 0 limit of m1: ((1+s)/(beta-1))(1 - ((1+s)/(1+t))^{beta-1}), or
/// (1+s) ln((1+t)/(1+s)) at beta = 1.
double zero_frequency_m1(double t, double s, double beta);
double zero_frequency_dt_m1(double t, double s, double beta);

Zone zone_classify(const PhasePoint& point);

/// Smooth cutoff: 1 on r <= 1/2, 0 on r >= 1, C-infinity in between.
double smooth_cutoff(double r);

struct Cutoffs {
    double chi1 = 0.0;  // high frequencies
    double chi2 = 0.0;  // intermediate
    double chi3 = 0.0;  // low
};

Cutoffs cutoffs(const PhasePoint& point);

struct Lemma1Margin {
    double ratio = 0.0;
    Zone zone = Zone::Z1;
};

/// |xi|^k |psi_{0,gamma,0}| divided by the zone-wise bound.
Lemma1Margin lemma1_margin(double k, double gamma, const PhasePoint& point);

struct ZoneBounds {
    double max_ratio[3] = {0.0, 0.0, 0.0};  // indexed by Zone
    long samples[3] = {0, 0, 0};
};

/// Largest lemma1_margin ratio per zone over `samples_per_zone` random points
/// with s in [0, 100], t - s in [0, 200] and |xi| up to a factor 100 beyond the
/// zone boundaries. The same seed with a larger count evaluates a superset.
ZoneBounds lemma1_survey(double k, double gamma, double ell, int samples_per_zone,
                         std::uint64_t seed);

}  // namespace flrw
