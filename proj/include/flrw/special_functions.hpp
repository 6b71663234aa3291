#pragma once

// Real-order Bessel functions J, Y and the Hankel combinations H^{+-} = J +- iY
// for real arguments x > 0.

#include <complex>

namespace flrw {

using Complex = std::complex<double>;

enum class HankelKind { plus, minus };

/// J_gamma(x). x = 0 is accepted for gamma >= 0 and for negative integers.
double bessel_j(double gamma, double x);

/// Y_gamma(x), x > 0.
double bessel_y(double gamma, double x);

/// H^{+}_gamma(x) = J + iY, H^{-}_gamma(x) = J - iY.
Complex hankel(HankelKind kind, double gamma, double x);

/// J and Y at orders gamma and gamma - 1 from one shared evaluation.
struct BesselPair {
    double j = 0.0;        // J_gamma
    double y = 0.0;        // Y_gamma
    double j_lower = 0.0;  // J_{gamma-1}
    double y_lower = 0.0;  // Y_{gamma-1}
};

BesselPair bessel_pair(double gamma, double x);

/// Ascending power series sum_k (-1)^k (x/2)^{2k+gamma} / (k! Gamma(k+gamma+1)).
/// Accurate for small x only; used for negative non-integer orders near 0.
double bessel_j_series(double gamma, double x);

/// sin(pi x) and cos(pi x) with exact zeros at the integers / half-integers.
double sin_pi(double x);
double cos_pi(double x);

}  // namespace flrw
