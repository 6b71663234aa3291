#include "flrw/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "flrw/dopri.hpp"
#include "flrw/errors.hpp"

namespace flrw {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

bool is_integer(double v) { return std::nearbyint(v) == v; }

// H-(a) H+(b) - H+(a) H-(b) from the real parts J, Y at two arguments.
Complex hankel_det(double ja, double ya, double jb, double yb) {
    const Complex hm_a(ja, -ya);
    const Complex hp_a(ja, ya);
    const Complex hp_b(jb, yb);
    const Complex hm_b(jb, -yb);
    return hm_a * hp_b - hp_a * hm_b;
}

void require_positive_frequency(const PhasePoint& point) {
    point.validate();
    if (point.xi == 0.0) {
        throw SingularityError("psi is singular at xi = 0; use the zero-frequency limit");
    }
}

// (+-) pi i / (4(1-ell)) (1+s)^{(1+beta)/2} (1+t)^{(1-beta)/2 - j ell}
Complex prefactor(int k, int j, const PhasePoint& p, double beta) {
    const double mag = kPi / (4.0 * (1.0 - p.ell)) *
                       std::exp(0.5 * (1.0 + beta) * std::log1p(p.s) +
                                ((1.0 - beta) / 2.0 - j * p.ell) * std::log1p(p.t));
    return (k % 2 == 0 ? 1.0 : -1.0) * mag * kI;
}

bool near_coincidence(const PhasePoint& p) {
    const double zs = p.z_s();
    return zs < kCoincidenceThreshold || p.z_t() - zs < kCoincidenceThreshold;
}

}  // namespace

double PhasePoint::z_s() const { return std::pow(1.0 + s, 1.0 - ell) * xi / (1.0 - ell); }

double PhasePoint::z_t() const { return std::pow(1.0 + t, 1.0 - ell) * xi / (1.0 - ell); }

void PhasePoint::validate() const {
    if (!(ell >= 0.0 && ell < 1.0)) throw DomainError("ell must satisfy 0 <= ell < 1");
    if (!(s >= 0.0)) throw DomainError("initial time s must be >= 0");
    if (!(t >= s)) throw DomainError("time t must be >= s");
    if (!(xi >= 0.0)) throw DomainError("frequency magnitude must be >= 0");
}

std::string_view to_string(Zone zone) {
    switch (zone) {
        case Zone::Z1: return "Z1";
        case Zone::Z2: return "Z2";
        case Zone::Z3: return "Z3";
    }
    return "?";
}

Complex psi(double j, double gamma, double delta, const PhasePoint& point) {
    require_positive_frequency(point);
    const double a = point.z_s();
    const double b = point.z_t();
    const Complex hm_a = hankel(HankelKind::minus, gamma, a);
    const Complex hp_a = hankel(HankelKind::plus, gamma, a);
    const Complex hp_b = hankel(HankelKind::plus, gamma + delta, b);
    const Complex hm_b = hankel(HankelKind::minus, gamma + delta, b);
    return std::pow(point.xi, j) * (hm_a * hp_b - hp_a * hm_b);
}

Complex psi_jy_form(double j, double gamma, double delta, const PhasePoint& point) {
    require_positive_frequency(point);
    const double a = point.z_s();
    const double b = point.z_t();
    const double det = bessel_j(gamma, a) * bessel_y(gamma + delta, b) -
                       bessel_y(gamma, a) * bessel_j(gamma + delta, b);
    return 2.0 * kI * std::pow(point.xi, j) * det;
}

Complex psi_reflection_form(double j, double gamma, int delta, const PhasePoint& point) {
    require_positive_frequency(point);
    if (is_integer(gamma)) throw DomainError("reflection form needs a non-integer order");
    const double a = point.z_s();
    const double b = point.z_t();
    const double sign = delta % 2 == 0 ? 1.0 : -1.0;
    const double det = bessel_j(-gamma, a) * bessel_j(gamma + delta, b) -
                       sign * bessel_j(gamma, a) * bessel_j(-gamma - delta, b);
    return 2.0 * kI * std::pow(point.xi, j) * det / sin_pi(gamma);
}

MultiplierEval multiplier_formula(const PhasePoint& point, double beta) {
    require_positive_frequency(point);
    const double rho = (1.0 - beta) / (2.0 * (1.0 - point.ell));
    const BesselPair at_s = bessel_pair(rho, point.z_s());
    const BesselPair at_t = bessel_pair(rho, point.z_t());
    const double xi = point.xi;

    // psi_{0,rho,0}, psi_{1,rho,-1}, psi_{1,rho-1,1}, psi_{2,rho-1,0}
    const Complex psi_m1 = hankel_det(at_s.j, at_s.y, at_t.j, at_t.y);
    const Complex psi_dm1 = xi * hankel_det(at_s.j, at_s.y, at_t.j_lower, at_t.y_lower);
    const Complex psi_m0 = xi * hankel_det(at_s.j_lower, at_s.y_lower, at_t.j, at_t.y);
    const Complex psi_dm0 =
        xi * xi * hankel_det(at_s.j_lower, at_s.y_lower, at_t.j_lower, at_t.y_lower);

    MultiplierEval out;
    out.m1 = prefactor(1, 0, point, beta) * psi_m1;
    out.dt_m1 = prefactor(1, 1, point, beta) * psi_dm1;
    out.m0 = prefactor(0, 0, point, beta) * psi_m0;
    out.dt_m0 = prefactor(0, 1, point, beta) * psi_dm0;
    const double norm = std::pow(1.0 + point.s, -point.ell);
    out.m0_normalized = out.m0 * norm;
    out.dt_m0_normalized = out.dt_m0 * norm;
    out.zone = zone_classify(point);
    return out;
}

MultiplierEval multiplier_eval(const PhasePoint& point, double beta) {
    point.validate();
    if (point.xi > 0.0 && !near_coincidence(point)) return multiplier_formula(point, beta);

    MultiplierEval out;
    out.zone = zone_classify(point);
    out.from_ode = true;
    const double lift = std::pow(1.0 + point.s, point.ell);
    if (point.xi == 0.0) {
        out.m1 = zero_frequency_m1(point.t, point.s, beta);
        out.dt_m1 = zero_frequency_dt_m1(point.t, point.s, beta);
        out.m0_normalized = 1.0;
        out.dt_m0_normalized = 0.0;
    } else {
        const ModeValue v = mode_ode(point, beta, 0.0, 1.0);
        const ModeValue d = mode_ode(point, beta, 1.0, 0.0);
        out.m1 = v.u;
        out.dt_m1 = v.ut;
        out.m0_normalized = d.u;
        out.dt_m0_normalized = d.ut;
    }
    out.m0 = out.m0_normalized * lift;
    out.dt_m0 = out.dt_m0_normalized * lift;
    return out;
}

VelocityMultiplier velocity_multiplier(const PhasePoint& point, double beta) {
    point.validate();
    VelocityMultiplier out;
    if (point.xi == 0.0) {
        out.m1 = zero_frequency_m1(point.t, point.s, beta);
        out.dt_m1 = zero_frequency_dt_m1(point.t, point.s, beta);
        out.from_ode = true;
        return out;
    }
    if (near_coincidence(point)) {
        const ModeValue v = mode_ode(point, beta, 0.0, 1.0);
        out.m1 = v.u;
        out.dt_m1 = v.ut;
        out.from_ode = true;
        return out;
    }
    const double rho = (1.0 - beta) / (2.0 * (1.0 - point.ell));
    const BesselPair at_s = bessel_pair(rho, point.z_s());
    const BesselPair at_t = bessel_pair(rho, point.z_t());
    // i * 2i * det is real: prefactor magnitude times -2 det (k = 1 carries a minus sign)
    const double det_m1 = at_s.j * at_t.y - at_s.y * at_t.j;
    const double det_dm1 = at_s.j * at_t.y_lower - at_s.y * at_t.j_lower;
    out.m1 = (prefactor(1, 0, point, beta) * (2.0 * kI * det_m1)).real();
    out.dt_m1 = (prefactor(1, 1, point, beta) * (2.0 * kI * point.xi * det_dm1)).real();
    return out;
}

ModeValue mode_ode(const PhasePoint& point, double beta, double u_s, double v_s, double rtol,
                   double atol) {
    point.validate();
    if (point.t == point.s) return {u_s, v_s};
    const double xi2 = point.xi * point.xi;
    const double ell = point.ell;
    auto rhs = [&](double r, const std::vector<double>& y, std::vector<double>& dy) {
        const double speed2 = std::pow(1.0 + r, -2.0 * ell);
        dy[0] = y[1];
        dy[1] = -beta / (1.0 + r) * y[1] - speed2 * xi2 * y[0];
    };
    StepControl control;
    control.rtol = rtol;
    control.atol = atol;
    DormandPrince integrator(control);
    std::vector<double> y{u_s, v_s};
    const auto status = integrator.integrate(rhs, y, point.s, {point.t},
                                             [](double, const std::vector<double>&, bool) {
                                                 return true;
                                             });
    if (status != IntegrationStatus::completed) {
        throw DomainError("per-mode integration failed");
    }
    return {y[0], y[1]};
}

double zero_frequency_m1(double t, double s, double beta) {
    if (!(s >= 0.0 && t >= s)) throw DomainError("need t >= s >= 0");
    const double log_ratio = std::log1p(t) - std::log1p(s);
    if (beta == 1.0) return (1.0 + s) * log_ratio;
    // (1+s)(1 - e^{-(beta-1) L})/(beta-1), accurate for beta near 1 and t near s
    return -(1.0 + s) * std::expm1(-(beta - 1.0) * log_ratio) / (beta - 1.0);
}

double zero_frequency_dt_m1(double t, double s, double beta) {
    if (!(s >= 0.0 && t >= s)) throw DomainError("need t >= s >= 0");
    return std::exp(-beta * (std::log1p(t) - std::log1p(s)));
}

Zone zone_classify(const PhasePoint& point) {
    point.validate();
    if (point.xi >= std::pow(1.0 + point.s, point.ell - 1.0)) return Zone::Z1;
    if (point.xi < std::pow(1.0 + point.t, point.ell - 1.0)) return Zone::Z3;
    return Zone::Z2;
}

double smooth_cutoff(double r) {
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    auto glue = [](double x) { return std::exp(-1.0 / x); };
    const double a = glue(1.0 - r);
    const double b = glue(r - 0.5);
    return a / (a + b);
}

Cutoffs cutoffs(const PhasePoint& point) {
    const double chi_s = smooth_cutoff(std::pow(1.0 + point.s, 1.0 - point.ell) * point.xi);
    const double chi_t = smooth_cutoff(std::pow(1.0 + point.t, 1.0 - point.ell) * point.xi);
    Cutoffs c;
    c.chi1 = 1.0 - chi_s;
    c.chi3 = chi_s * chi_t;
    c.chi2 = chi_s - c.chi3;
    return c;
}

Lemma1Margin lemma1_margin(double k, double gamma, const PhasePoint& point) {
    if (gamma == 0.0) throw DomainError("the zone bounds need gamma != 0");
    if (!(k >= 0.0)) throw DomainError("k must be >= 0");
    require_positive_frequency(point);
    Lemma1Margin out;
    out.zone = zone_classify(point);
    const Complex value = psi(0.0, gamma, 0.0, point);
    const double mag = std::abs(value);
    if (mag == 0.0) return out;
    const double lx = std::log(point.xi);
    const double ls = std::log1p(point.s);
    const double lt = std::log1p(point.t);
    const double g = std::abs(gamma);
    const double em = point.ell - 1.0;
    double log_bound = 0.0;
    switch (out.zone) {
        case Zone::Z1: log_bound = (k - 1.0) * lx + 0.5 * em * (ls + lt); break;
        case Zone::Z2: log_bound = (k - g - 0.5) * lx + em * g * ls + 0.5 * em * lt; break;
        case Zone::Z3: log_bound = k * lx + em * g * ls - em * g * lt; break;
    }
    out.ratio = std::exp(k * lx + std::log(mag) - log_bound);
    return out;
}

ZoneBounds lemma1_survey(double k, double gamma, double ell, int samples_per_zone,
                         std::uint64_t seed) {
    ZoneBounds out;
    for (int z = 0; z < 3; ++z) {
        const Zone zone = static_cast<Zone>(z);
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(z + 1)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int taken = 0;
        while (taken < samples_per_zone) {
            PhasePoint p;
            p.ell = ell;
            p.s = std::expm1(unit(rng) * std::log(101.0));
            p.t = p.s + std::expm1(unit(rng) * std::log(201.0));
            const double upper = std::pow(1.0 + p.s, ell - 1.0);  // Z1 above
            const double lower = std::pow(1.0 + p.t, ell - 1.0);  // Z3 below
            const double u = unit(rng);
            switch (zone) {
                case Zone::Z1: p.xi = upper * std::pow(100.0, u); break;
                case Zone::Z3: p.xi = lower * std::pow(100.0, -u); break;
                case Zone::Z2: p.xi = lower * std::pow(upper / lower, u); break;
            }
            ++taken;
            if (!(p.xi > 0.0) || zone_classify(p) != zone) continue;
            const Lemma1Margin m = lemma1_margin(k, gamma, p);
            out.max_ratio[z] = std::max(out.max_ratio[z], m.ratio);
            ++out.samples[z];
        }
    }
    return out;
}

}  // namespace flrw
