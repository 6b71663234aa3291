#include "flrw/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIterations = 200000;

// Below this argument J is summed from its power series: the Wronskian route
// through a large Y loses relative accuracy when J is tiny.
constexpr double kSeriesArgument = 2.0;

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
constexpr std::array<double, 27> kRecipGamma{
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
};

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2,
// |mu| <= 1/2. Even/odd parts of the 1/Gamma series, so mu -> 0 is exact.
void temme_gammas(double mu, double& gam1, double& gam2) {
    const double mu2 = mu * mu;
    double odd = 0.0;
    double even = 0.0;
    for (int k = static_cast<int>(kRecipGamma.size()) - 1; k >= 0; --k) {
        if (k % 2 == 1) {
            odd = odd * mu2 + kRecipGamma[k];
        } else {
            even = even * mu2 + kRecipGamma[k];
        }
    }
    gam1 = -odd;
    gam2 = even;
}

bool is_integer(double v) { return std::nearbyint(v) == v; }

struct JY {
    double j, y, jp, yp;  // J_nu, Y_nu and their x-derivatives
};

// Temme's series (x < 2) or Steed's continued fraction (x >= 2) for nu >= 0.
JY jy_temme_steed(double nu, double x) {
    constexpr double kSwitch = 2.0;
    const int nl = x < kSwitch ? static_cast<int>(nu + 0.5)
                               : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / kPi;

    // CF1: J'_nu / J_nu.
    int isign = 1;
    double h = nu * xi;
    if (h < kTiny) h = kTiny;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 0;
    for (; i < kMaxIterations; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b - 1.0 / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    if (i >= kMaxIterations) throw DomainError("Bessel CF1 did not converge");

    double rjl = isign * kTiny;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    const double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double rjmu = 0.0;
    double rymu = 0.0;
    double ry1 = 0.0;
    if (x < kSwitch) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * xmu;
        const double fact_a = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        const double dl = -std::log(x2);
        double e = xmu * dl;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1 = 0.0;
        double gam2 = 0.0;
        temme_gammas(xmu, gam1, gam2);
        const double gampl = gam2 - xmu * gam1;  // 1/Gamma(1+mu)
        const double gammi = gam2 + xmu * gam1;  // 1/Gamma(1-mu)
        double ff = 2.0 / kPi * fact_a * (gam1 * std::cosh(e) + gam2 * fact2 * dl);
        e = std::exp(e);
        double p = e / (gampl * kPi);
        double q = 1.0 / (e * kPi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fact3 = std::abs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = kPi * pimu2 * fact3 * fact3;
        double cc = 1.0;
        const double dd = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        int k = 1;
        for (; k <= kMaxIterations; ++k) {
            ff = (k * ff + p + q) / (k * static_cast<double>(k) - xmu2);
            cc *= dd / k;
            p /= k - xmu;
            q /= k + xmu;
            const double del = cc * (ff + r * q);
            sum += del;
            const double del1 = cc * p - k * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
        }
        if (k > kMaxIterations) throw DomainError("Temme series did not converge");
        rymu = -sum;
        ry1 = -sum1 * xi2;
        const double rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        double a = 0.25 - xmu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        int k = 1;
        for (; k < kMaxIterations; ++k) {
            a += 2 * k;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
        }
        if (k >= kMaxIterations) throw DomainError("Bessel CF2 did not converge");
        const double gam = (p - f) / q;
        rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
        rymu = rjmu * gam;
        const double rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    const double scale = rjmu / rjl;
    JY out{};
    out.j = rjl1 * scale;
    out.jp = rjp1 * scale;
    for (int k = 1; k <= nl; ++k) {
        const double rytemp = (xmu + k) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    out.y = rymu;
    out.yp = nu * xi * rymu - ry1;
    return out;
}

// Hankel's large-argument expansion with the phase split as cos(x - phi).
void jy_asymptotic(double nu, double x, double& j, double& y) {
    const double four_nu2 = 4.0 * nu * nu;
    double term = 1.0;
    double p = 1.0;
    double q = 0.0;
    double last = 1.0;
    for (int k = 1; k < 400; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (four_nu2 - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag > last && mag < 1e-3) break;  // expansion started to diverge
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
        }
        if (mag < kEps * 1e-2 * (std::abs(p) + std::abs(q))) break;
        last = mag;
    }
    const double phi = 0.5 * nu + 0.25;
    const double cphi = cos_pi(phi);
    const double sphi = sin_pi(phi);
    const double cx = std::cos(x);
    const double sx = std::sin(x);
    const double cchi = cx * cphi + sx * sphi;
    const double schi = sx * cphi - cx * sphi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    j = amp * (p * cchi - q * schi);
    y = amp * (p * schi + q * cchi);
}

bool use_asymptotic(double nu, double x) { return x >= 20.0 + nu * nu; }

// J and Y at orders nu and nu + 1, nu >= 0, x > 0.
BesselPair jy_up(double nu, double x) {
    BesselPair out;
    if (use_asymptotic(nu + 1.0, x)) {
        jy_asymptotic(nu, x, out.j, out.y);
        jy_asymptotic(nu + 1.0, x, out.j_lower, out.y_lower);
        return out;  // j_lower/y_lower hold order nu + 1 here
    }
    const JY r = jy_temme_steed(nu, x);
    out.j = r.j;
    out.y = r.y;
    out.j_lower = nu / x * r.j - r.jp;
    out.y_lower = nu / x * r.y - r.yp;
    return out;
}

// J_{-mu}, Y_{-mu} from J_mu, Y_mu.
void reflect(double mu, double j, double y, double& j_neg, double& y_neg) {
    if (is_integer(mu)) {
        const double sign = std::fmod(mu, 2.0) == 0.0 ? 1.0 : -1.0;
        j_neg = sign * j;
        y_neg = sign * y;
        return;
    }
    const double c = cos_pi(mu);
    const double s = sin_pi(mu);
    j_neg = c * j - s * y;
    y_neg = s * j + c * y;
}

void require_positive(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("Bessel argument must be >= 0");
    if (x == 0.0) throw SingularityError("Bessel function singular at x = 0");
}

}  // namespace

double sin_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    const double sign = x < 0.0 ? -1.0 : 1.0;
    double r = std::fmod(std::abs(x), 2.0);
    double s = sign;
    if (r >= 1.0) {
        r -= 1.0;
        s = -s;
    }
    if (r > 0.5) r = 1.0 - r;
    if (r == 0.0) return 0.0;
    if (r == 0.5) return s;
    return s * std::sin(kPi * r);
}

double cos_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    double r = std::fmod(std::abs(x), 2.0);
    if (r > 1.0) r = 2.0 - r;
    // cos(pi r) = sin(pi (1/2 - r)), r in [0, 1]
    return sin_pi(0.5 - r);
}

double bessel_j_series(double gamma, double x) {
    if (x < 0.0) throw DomainError("Bessel argument must be >= 0");
    const double half = 0.5 * x;
    const double h2 = half * half;
    int k0 = 0;
    if (gamma < 0.0 && is_integer(gamma)) k0 = static_cast<int>(-gamma);  // 1/Gamma vanishes below
    if (x == 0.0) {
        if (gamma == 0.0) return 1.0;
        if (gamma > 0.0 || is_integer(gamma)) return 0.0;
        throw SingularityError("J of negative non-integer order is singular at 0");
    }
    // First term (x/2)^{2 k0 + gamma} / (k0! Gamma(k0 + gamma + 1)), with sign (-1)^{k0}.
    const double order = 2.0 * k0 + gamma;
    double term = std::pow(half, order) / (std::tgamma(k0 + 1.0) * std::tgamma(k0 + gamma + 1.0));
    if (k0 % 2 == 1) term = -term;
    double sum = term;
    for (int k = k0 + 1; k < k0 + 500; ++k) {
        term *= -h2 / (k * (k + gamma));
        sum += term;
        if (std::abs(term) <= kEps * 0.5 * std::abs(sum) && k > k0 + 2) break;
    }
    return sum;
}

namespace {
BesselPair with_series(BesselPair b, double gamma, double x) {
    if (x <= kSeriesArgument) {
        b.j = bessel_j_series(gamma, x);
        b.j_lower = bessel_j_series(gamma - 1.0, x);
    }
    return b;
}
}  // namespace

BesselPair bessel_pair(double gamma, double x) {
    require_positive(x);
    if (!std::isfinite(gamma)) throw DomainError("Bessel order must be finite");

    if (gamma >= 1.0) {
        const double nu = gamma - 1.0;
        const BesselPair up = jy_up(nu, x);
        return with_series(BesselPair{up.j_lower, up.y_lower, up.j, up.y}, gamma, x);
    }
    if (gamma <= 0.0) {
        const double mu = -gamma;
        const BesselPair up = jy_up(mu, x);
        BesselPair out;
        reflect(mu, up.j, up.y, out.j, out.y);
        reflect(mu + 1.0, up.j_lower, up.y_lower, out.j_lower, out.y_lower);
        return with_series(out, gamma, x);
    }
    // 0 < gamma < 1: one downward recurrence step to gamma - 1.
    const BesselPair up = jy_up(gamma, x);
    BesselPair out;
    out.j = up.j;
    out.y = up.y;
    out.j_lower = 2.0 * gamma / x * up.j - up.j_lower;
    out.y_lower = 2.0 * gamma / x * up.y - up.y_lower;
    return with_series(out, gamma, x);
}

double bessel_j(double gamma, double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("Bessel argument must be >= 0");
    if (x == 0.0) return bessel_j_series(gamma, 0.0);
    if (x <= kSeriesArgument) return bessel_j_series(gamma, x);
    return bessel_pair(gamma, x).j;
}

double bessel_y(double gamma, double x) {
    require_positive(x);
    return bessel_pair(gamma, x).y;
}

Complex hankel(HankelKind kind, double gamma, double x) {
    const BesselPair b = bessel_pair(gamma, x);
    return kind == HankelKind::plus ? Complex(b.j, b.y) : Complex(b.j, -b.y);
}

}  // namespace flrw
