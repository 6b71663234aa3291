#include "flrw/exponents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

constexpr double kThresholdBand = 1e-12;

// Positive root of a p^2 + b p + c with a > 0 > c, without cancellation.
double positive_root(double a, double b, double c) {
    const double disc = b * b - 4.0 * a * c;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    return std::max(q / a, c / q);
}

void require_ell(double ell) {
    if (!(ell >= 0.0 && ell < 1.0)) {
        throw DomainError("ell must satisfy 0 <= ell < 1, got " + std::to_string(ell));
    }
}

void require_dimension(int n) {
    if (n < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(n));
}

// a < b outside the equality band.
bool strictly_less(double a, double b) { return a < b && !same_threshold(a, b); }

}  // namespace

double reciprocal(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

double conjugate(double q) {
    if (std::isinf(q)) return 1.0;
    if (q == 1.0) return kInfinity;
    return q / (q - 1.0);
}

bool same_threshold(double a, double b) {
    return std::abs(a - b) <= kThresholdBand * std::max({1.0, std::abs(a), std::abs(b)});
}

void ModelParams::validate() const {
    require_dimension(n);
    require_ell(ell);
    if (!(p > 1.0)) throw DomainError("nonlinearity power must exceed 1");
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
}

DerivedSymbols derive(const ModelParams& params) {
    require_dimension(params.n);
    require_ell(params.ell);
    const double one_minus = 1.0 - params.ell;
    DerivedSymbols d;
    d.rho = (1.0 - params.beta) / (2.0 * one_minus);
    d.mu = (params.beta - params.ell) / one_minus;
    d.alpha = 0.5 * d.mu;
    d.k_bar = d.alpha - 0.5 * params.n;
    d.p_c = critical_exponent(params.n, params.ell);
    return d;
}

namespace {
constexpr std::array<std::pair<CaseTag, std::string_view>, 11> kTagNames{{
    {CaseTag::PropLqI, "PropLq-i"},
    {CaseTag::PropLqII, "PropLq-ii"},
    {CaseTag::PropLqIII, "PropLq-iii"},
    {CaseTag::Thm1A, "Thm1-a"},
    {CaseTag::Thm1B, "Thm1-b"},
    {CaseTag::Thm2L2, "Thm2-L2"},
    {CaseTag::Thm2HkA, "Thm2-Hk-a"},
    {CaseTag::Thm2HkB, "Thm2-Hk-b"},
    {CaseTag::Thm2HkC, "Thm2-Hk-c"},
    {CaseTag::AbbiccoA, "Abbicco-a"},
    {CaseTag::AbbiccoB, "Abbicco-b"},
}};
}  // namespace

std::string_view to_string(CaseTag tag) {
    for (const auto& [t, name] : kTagNames) {
        if (t == tag) return name;
    }
    return "unknown";
}

std::optional<CaseTag> parse_case_tag(std::string_view text) {
    for (const auto& [t, name] : kTagNames) {
        if (name == text) return t;
    }
    return std::nullopt;
}

std::string_view to_string(Ineq2Variant variant) {
    return variant == Ineq2Variant::as_printed ? "as_printed" : "tau_consistent";
}

// ---------------------------------------------------------------------------

double fujita_exponent(double d) {
    if (!(d > 0.0)) throw DomainError("Fujita exponent needs d > 0");
    return 1.0 + 2.0 / d;
}

double critical_exponent(int n, double ell) {
    require_dimension(n);
    require_ell(ell);
    return fujita_exponent(n * (1.0 - ell));
}

double strauss_generalized(int n, double ell, double beta) {
    require_dimension(n);
    require_ell(ell);
    const double one_minus = 1.0 - ell;
    const double a = n - 1.0 + (beta - ell) / one_minus;
    if (!(a > 0.0)) {
        throw RegimeError("generalized Strauss exponent undefined: leading coefficient <= 0");
    }
    const double b = -(n + 1.0 + (beta + 3.0 * ell) / one_minus);
    return positive_root(a, b, -2.0);
}

double strauss_classic(double d) {
    if (!(d > 1.0)) throw DomainError("Strauss exponent needs d > 1");
    return positive_root(d - 1.0, -(d + 1.0), -2.0);
}

double beta_star(int n) {
    require_dimension(n);
    const double nn = n;
    return (nn * nn + nn + 2.0) / (nn + 2.0);
}

double beta_critical(int n, double ell) {
    const double pc = critical_exponent(n, ell);
    return ell + (1.0 - ell) * (n + 1.0 - 2.0 / pc);
}

double beta_critical_rational(int n, double ell) {
    require_dimension(n);
    require_ell(ell);
    const double d = n * (1.0 - ell);
    return (d * d + d * (1.0 + 2.0 * ell) + 2.0) / (2.0 + d);
}

double q_sharp(int n) {
    if (n < 2) throw DomainError("q_sharp needs n >= 2");
    return 2.0 * (n + 1.0) / (n - 1.0);
}

double q_bar(int n, double ell) {
    const double pc = critical_exponent(n, ell);
    return 2.0 * (n * pc - 1.0) / (n + 1.0);
}

double r_of_q(int n, double q) {
    require_dimension(n);
    if (!(q >= 2.0)) throw DomainError("r(q) needs q >= 2");
    return n / (0.5 + 0.5 * n + reciprocal(q));
}

double d_exponent(double r, double q, int n) {
    require_dimension(n);
    if (!(r >= 1.0) || !(q >= r)) throw DomainError("d(r, q) needs 1 <= r <= q");
    const double inv_r = reciprocal(r);
    const double inv_q = reciprocal(q);
    if (r <= conjugate(q)) return n * inv_r - 0.5 * (n - 1.0) - inv_q;
    return inv_r + 0.5 * (n - 1.0) - n * inv_q;
}

bool crucial_condition(int n, double ell) {
    require_dimension(n);
    return ell < 1.0 - (n - 1.0) / (2.0 * n);
}

// ---------------------------------------------------------------------------

std::optional<double> admissible_m(int n, double q, double k) {
    if (k >= 1.0) return 2.0;
    const double inv_q = reciprocal(q);
    // m > nq/(n+q(1-k)) written with 1/q so that q = inf is handled.
    const double lower = n / (n * inv_q + (1.0 - k));
    if (lower < 1.0) return 1.0;
    if (lower >= 2.0) return std::nullopt;
    return 0.5 * (lower + 2.0);
}

RatePrediction linear_rate(int n, double ell, double beta, double q, double k, double m,
                           double s) {
    require_dimension(n);
    require_ell(ell);
    if (!(beta > 1.0)) throw RegimeError("linear rates are stated for beta > 1");
    if (!(q >= 2.0)) throw DomainError("linear rates need q >= 2");
    if (!(k >= 0.0)) throw DomainError("linear rates need k >= 0");
    if (!(s >= 0.0)) throw DomainError("initial time s must be >= 0");
    if (k >= 1.0) {
        if (q != 2.0) throw DomainError("for k >= 1 the estimate is in homogeneous H^k (q = 2)");
    } else {
        if (!(m >= 1.0 && m <= 2.0)) throw DomainError("m must lie in [1, 2]");
        const double lower = n / (n * reciprocal(q) + (1.0 - k));
        if (!(m > lower)) throw DomainError("m must exceed nq/(n+q(1-k))");
    }

    const double one_minus = 1.0 - ell;
    const double spread = n * (1.0 - reciprocal(q)) + k;  // n(1-1/q) + k
    const double threshold = ell + 2.0 * one_minus * spread;

    RatePrediction out;
    if (same_threshold(beta, threshold)) {
        out.case_tag = CaseTag::PropLqII;
        out.t_exponent = (ell - 1.0) * spread;
        out.s_exponent = 1.0;
        out.log_power = 1.0 - reciprocal(q);  // equals 1/2 on the H^k branch
    } else if (beta < threshold) {
        out.case_tag = CaseTag::PropLqI;
        out.t_exponent = 0.5 * (ell - beta);
        out.s_exponent = 1.0 + 0.5 * (beta - ell) + (ell - 1.0) * spread;
    } else {
        out.case_tag = CaseTag::PropLqIII;
        out.t_exponent = (ell - 1.0) * spread;
        out.s_exponent = 1.0;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_theorem1_ell(int n, double ell) {
    if (n < 2 || n > 8) throw RegimeError("high-dimension L^q theorem covers 2 <= n <= 8");
    require_ell(ell);
    if (!crucial_condition(n, ell)) throw RegimeError("ell must be below 1 - (n-1)/(2n)");
    if (n >= 6 && ell < 1.0 - 2.0 * (n + 1.0) / (n * (n - 3.0))) {
        throw RegimeError("ell below the lower bound 1 - 2(n+1)/(n(n-3))");
    }
}

}  // namespace

double theorem1_beta_floor(int n, double ell) {
    return ell + (1.0 - ell) * (n + 1.0 - 2.0 / q_bar(n, ell));
}

double theorem1_beta_sharp(int n, double ell, double q) {
    return ell + (1.0 - ell) * (n + 1.0 - 2.0 * reciprocal(q));
}

RatePrediction theorem1_rate(int n, double ell, double beta, double q, double eps,
                             Ineq2Variant variant) {
    require_theorem1_ell(n, ell);
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    const double pc = critical_exponent(n, ell);
    const double qs = q_sharp(n);
    if (strictly_less(q, pc) || strictly_less(qs, q)) {
        throw RegimeError("q must lie in [p_c, q_sharp]");
    }
    if (strictly_less(beta, theorem1_beta_floor(n, ell))) {
        throw RegimeError("beta below ell + (n+1)(1-ell) - (2/q_bar)(1-ell)");
    }

    const double one_minus = 1.0 - ell;
    const double inv_q = reciprocal(q);
    RatePrediction out;
    const double sharp = theorem1_beta_sharp(n, ell, q);
    if (beta > sharp && !same_threshold(beta, sharp)) {
        out.case_tag = CaseTag::Thm1A;
        out.t_exponent = -n * (1.0 - inv_q) * one_minus;
        return out;
    }
    out.case_tag = CaseTag::Thm1B;
    const double wave = (eps - (n - 1.0) * (0.5 - inv_q)) * one_minus;
    out.t_exponent = variant == Ineq2Variant::as_printed
                         ? wave - (beta - ell) / (2.0 * one_minus)
                         : wave - 0.5 * (beta - ell);
    return out;
}

double theorem2_k(int n, double ell) { return 1.0 + 0.5 * n * ell; }

double theorem2_beta_floor(int n, double ell) {
    return ell + n * (1.0 - ell) * (1.0 + ell);
}

RatePrediction theorem2_rate(int n, double ell, double beta, NormKind norm, double k) {
    if (n < 2) throw RegimeError("higher-regularity theorem needs n >= 2");
    require_ell(ell);
    if (n <= 4) {
        if (!(ell > 1.0 - 2.0 / n)) throw RegimeError("ell must exceed 1 - 2/n");
    } else if (ell < 0.5 * (1.0 + std::sqrt(1.0 - 16.0 / (double(n) * n)))) {
        throw RegimeError("ell below (1 + sqrt(1 - 16/n^2))/2");
    }
    if (strictly_less(beta, theorem2_beta_floor(n, ell))) {
        throw RegimeError("beta below ell + n(1-ell)(1+ell)");
    }
    const double k_expected = theorem2_k(n, ell);
    if (!same_threshold(k, k_expected)) throw RegimeError("k must equal 1 + n ell/2");
    if (strictly_less(critical_exponent(n, ell), k)) throw RegimeError("k must not exceed p_c");

    RatePrediction out;
    if (norm == NormKind::l2) {
        out.case_tag = CaseTag::Thm2L2;
        out.t_exponent = 0.5 * n * (ell - 1.0);
        return out;
    }
    const double threshold = ell + (n + 2.0 * k) * (1.0 - ell);
    if (same_threshold(beta, threshold)) {
        out.case_tag = CaseTag::Thm2HkB;
        out.t_exponent = 0.5 * (ell - beta);
        out.log_power = 0.5;
    } else if (beta > threshold) {
        out.case_tag = CaseTag::Thm2HkA;
        out.t_exponent = (ell - 1.0) * (0.5 * n + k);
    } else {
        out.case_tag = CaseTag::Thm2HkC;
        out.t_exponent = 0.5 * (ell - beta);
    }
    return out;
}

RatePrediction abbicco_rate(int n, double mu, double q, double eps) {
    if (!(mu >= 2.0)) throw DomainError("constant-speed estimate needs mu >= 2");
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    bool in_range = false;
    if (n == 2) {
        in_range = q >= 2.0 && q <= q_sharp(2);
    } else if (n == 3) {
        in_range = q > 1.0 && q <= 4.0;
    } else if (n >= 4) {
        in_range = q >= 2.0 * (n - 1.0) / (n + 1.0) && q <= q_sharp(n);
    }
    if (!in_range) throw DomainError("q outside the admissible range for this dimension");

    const double inv_q = reciprocal(q);
    RatePrediction out;
    const double threshold = n + 1.0 - 2.0 * inv_q;
    if (mu > threshold && !same_threshold(mu, threshold)) {
        out.case_tag = CaseTag::AbbiccoA;
        out.t_exponent = -n * (1.0 - inv_q);
        out.s_exponent = 1.0;
    } else {
        out.case_tag = CaseTag::AbbiccoB;
        out.t_exponent = eps - (n - 1.0) * (0.5 - inv_q) - 0.5 * mu;
        out.s_exponent = 0.5 * mu - eps + inv_q - 0.5 * (n - 1.0);
    }
    return out;
}

}  // namespace flrw
