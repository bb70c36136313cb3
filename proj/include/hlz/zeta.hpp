#pragma once

// Hardy's Z-function on the critical line, the Riemann-Siegel phase, zero
// location and prime counting.

#include <complex>
#include <cstdint>
#include <vector>

namespace hlz {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Smallest height accepted by theta().
inline constexpr double kThetaMinHeight = 2.0;
/// Smallest height accepted by z_eval() and zeros_in().
inline constexpr double kZMinHeight = 10.0;
/// Largest number of Riemann-Siegel correction terms (C0..C4).
inline constexpr int kMaxRsTerms = 5;
/// Default number of correction terms.
inline constexpr int kDefaultRsTerms = 5;
/// Below this height z_eval() evaluates zeta directly (Euler-Maclaurin)
/// instead of using the Riemann-Siegel expansion.
inline constexpr double kDirectBelow = 400.0;

struct ZSample {
  double t = 0.0;
  double z = 0.0;
  double z2 = 0.0;   // z * z
  double err = 0.0;  // bound on |z - Z(t)|
};

struct Zero {
  double gamma = 0.0;
  double bracket_width = 0.0;
};

/// Riemann-Siegel theta from its asymptotic expansion, through the t^-9 term.
/// Truncation error is below 1e-13 for t >= 10 and about 1e-6 at t = 2.
/// Throws std::domain_error for t < 2.
double theta(double t);

/// Hardy's Z(t) with `terms` Riemann-Siegel corrections C0..C_{terms-1}.
/// Below kDirectBelow the value comes from a direct zeta evaluation and
/// `terms` has no effect. Pure: identical arguments give identical bits.
/// Throws std::domain_error for t < 10 or terms outside [0, 5].
ZSample z_eval(double t, int terms = kDefaultRsTerms);

/// The Riemann-Siegel expansion alone, at any t >= 10. The err field is the
/// truncation bound plus a rounding allowance for the phase.
ZSample z_riemann_siegel(double t, int terms = kDefaultRsTerms);

/// zeta(s) by Euler-Maclaurin summation. Intended for |Im s| up to a few
/// thousand; cost grows linearly in |Im s|.
std::complex<double> zeta_em(std::complex<double> s);

/// Z(t)^2 for any t >= 0. Uses |zeta(1/2+it)|^2 below kZMinHeight and
/// z_eval(t, terms).z2 above it. This is the integrand of I(T).
double z_squared(double t, int terms = kDefaultRsTerms);

/// Riemann-Siegel correction coefficient C_k(p), k in [0, 4], p in [0, 1).
double rs_coefficient(int k, double p);

/// Mean gap between consecutive zeros near t, 2*pi / ln(t / 2*pi).
double mean_zero_spacing(double t);

/// All sign changes of Z in [a, b], bisected to width <= 1e-6, ascending.
/// Pairs of zeros closer than the scan step can be missed.
std::vector<Zero> zeros_in(double a, double b, int terms = kDefaultRsTerms);

/// The zero of Z nearest to t (searches outward in growing windows).
Zero nearest_zero(double t, int terms = kDefaultRsTerms);

/// Distance from t to the nearest zero of Z is below `radius`.
bool near_zero(double t, double radius, int terms = kDefaultRsTerms);

/// Count of primes <= x. The sieve grows on demand up to `budget`;
/// throws BudgetError beyond it. Thread-safe.
std::int64_t prime_pi(double x, double budget = 1e8);

}  // namespace hlz
