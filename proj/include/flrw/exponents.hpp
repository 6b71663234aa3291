#pragma once

// Critical exponents and decay-rate algebra for
//
//     u_tt - (1+t)^{-2 ell} Lap u + beta/(1+t) u_t = f(u),   f(u) = |u|^p.
//
// Everything here is a pure function of its arguments. Lebesgue exponents may
// be infinite; pass flrw::kInfinity and 1/q evaluates to 0.

#include <limits>
#include <optional>
#include <string_view>

namespace flrw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// 1/q with 1/inf = 0.
double reciprocal(double q);

/// Hoelder conjugate q' = q/(q-1); q = 1 maps to infinity and q = inf to 1.
double conjugate(double q);

/// Threshold comparison used for every branch selection in this module:
/// values closer than 1e-12 (relative, floored at 1) count as equal.
bool same_threshold(double a, double b);

struct ModelParams {
    int n = 1;          // spatial dimension
    double ell = 0.0;   // speed decay, 0 <= ell < 1
    double beta = 2.0;  // damping coefficient
    double p = 2.0;     // nonlinearity power, p > 1

    /// Throws DomainError when an invariant is violated.
    void validate() const;
};

struct DerivedSymbols {
    double rho = 0.0;    // Bessel order (1-beta)/(2(1-ell))
    double mu = 0.0;     // damping in the constant-speed frame (beta-ell)/(1-ell)
    double alpha = 0.0;  // (beta-ell)/(2(1-ell)) = mu/2
    double k_bar = 0.0;  // alpha - n/2
    double p_c = 0.0;    // 1 + 2/(n(1-ell))
};

DerivedSymbols derive(const ModelParams& params);

enum class CaseTag {
    PropLqI,
    PropLqII,
    PropLqIII,
    Thm1A,
    Thm1B,
    Thm2L2,
    Thm2HkA,
    Thm2HkB,
    Thm2HkC,
    AbbiccoA,
    AbbiccoB,
};

std::string_view to_string(CaseTag tag);
std::optional<CaseTag> parse_case_tag(std::string_view text);

/// Predicted bound (1+t)^{t_exponent} (1+s)^{s_exponent} (log)^{log_power}.
struct RatePrediction {
    double t_exponent = 0.0;
    double s_exponent = 0.0;
    double log_power = 0.0;
    CaseTag case_tag = CaseTag::PropLqIII;
};

// ---------------------------------------------------------------------------
// Critical exponents
// ---------------------------------------------------------------------------

/// p_F(d) = 1 + 2/d.
double fujita_exponent(double d);

/// p_c(n, ell) = p_F(n(1-ell)).
double critical_exponent(int n, double ell);

/// Positive root of
///   (n-1+(beta-ell)/(1-ell)) p^2 - (n+1+(beta+3 ell)/(1-ell)) p - 2 = 0.
double strauss_generalized(int n, double ell, double beta);

/// Positive root of (d-1) p^2 - (d+1) p - 2 = 0, d > 1.
double strauss_classic(double d);

/// (n^2+n+2)/(n+2); p_F(n) = p_S(n + beta_star(n)).
double beta_star(int n);

/// ell + (1-ell)(n+1-2/p_c). Verified against the rational closed form.
double beta_critical(int n, double ell);

/// (n^2(1-ell)^2 + n(1-ell)(1+2ell) + 2) / (2 + n(1-ell)).
double beta_critical_rational(int n, double ell);

/// 2(n+1)/(n-1), n >= 2.
double q_sharp(int n);

/// 2(n p_c - 1)/(n+1); the fixed point of q -> p_c r(q).
double q_bar(int n, double ell);

/// r with n/r = 1/2 + n/2 + 1/q.
double r_of_q(int n, double q);

/// Two-branch exponent d(r, q), split at r = q'.
double d_exponent(double r, double q, int n);

/// ell < 1 - (n-1)/(2n): the range in which r(q) p_c < q_sharp on [p_c, q_sharp].
bool crucial_condition(int n, double ell);

// ---------------------------------------------------------------------------
// Decay rates
// ---------------------------------------------------------------------------

/// Smallest convenient m in [1, 2] with m > nq/(n+q(1-k)); nullopt if none.
std::optional<double> admissible_m(int n, double q, double k);

/// Linear (g1 = 0) a priori L^q / H^k rate. For k >= 1 the estimate is the
/// homogeneous Sobolev one and q must be 2. `s` only has to be >= 0; the
/// s-dependence is reported through s_exponent.
RatePrediction linear_rate(int n, double ell, double beta, double q, double k, double m,
                           double s = 0.0);

/// The second branch of the high-dimension L^q estimate has a last term printed
/// as -(beta-ell)/(2(1-ell)); mapping the constant-speed rate back through
/// 1+tau ~ (1+t)^{1-ell} gives -(beta-ell)/2 instead. Both are exposed.
enum class Ineq2Variant { as_printed, tau_consistent };

std::string_view to_string(Ineq2Variant variant);

/// Lower end of the admissible beta band: ell + (n+1)(1-ell) - (2/q_bar)(1-ell).
double theorem1_beta_floor(int n, double ell);

/// Above this beta the sharp rate -n(1-1/q)(1-ell) holds.
double theorem1_beta_sharp(int n, double ell, double q);

RatePrediction theorem1_rate(int n, double ell, double beta, double q, double eps,
                             Ineq2Variant variant = Ineq2Variant::as_printed);

enum class NormKind { l2, hk };

/// k = 1 + n ell / 2.
double theorem2_k(int n, double ell);

/// ell + n(1-ell)(1+ell).
double theorem2_beta_floor(int n, double ell);

RatePrediction theorem2_rate(int n, double ell, double beta, NormKind norm, double k);

/// (L1 cap L2) - L^q estimate for v_tt - Lap v + mu/(1+tau) v_tau = 0, in tau.
RatePrediction abbicco_rate(int n, double mu, double q, double eps);

}  // namespace flrw
