#pragma once

// Integrals of Z^2: over arbitrary intervals, the cumulative integral
// I(T) = int_0^T Z^2 with checkpoints, and the weighted transform
//   Phi(y) = int_0^{mu(y)} Z^2(t) e^{-2t/y} dt
// with its first two derivatives in y.

#include <cstdint>
#include <memory>
#include <string>

#include "hlz/checkpoint.hpp"
#include "hlz/panel_grid.hpp"
#include "hlz/zeta.hpp"

namespace hlz {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct IntegralResult {
  double value = 0.0;
  double err_est = 0.0;
  std::int64_t evals = 0;
  // false when err_est > tol * max(1, |value|)
  bool tolerance_met = true;
};

/// mu(y) = coeff * y^omega1 * (ln y)^omega2, the upper limit of Phi.
struct MuParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double coeff = 7.0;

  double value(double y) const;
  double prime(double y) const;
  double second(double y) const;
};

/// Throws std::invalid_argument unless omega1, omega2 >= 1 and coeff > 0.
void validate(const MuParams& mu);

/// g(t) = t (t/phi - 1) e^{-2t/phi}, the kernel of Phi''.
struct GFacts {
  double phi = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
  double min_val = 0.0;
  double max_val = 0.0;
};
double g_eval(double t, double phi);
/// Closed-form extrema of g on [0, inf). Requires phi > e.
GFacts g_extrema(double phi);

/// Everything one pass over the cached panels gives at a point y.
struct PhiEval {
  double y = 0.0;
  double phi = 0.0;           // Phi(y)
  double phi_err = 0.0;
  double phi_prime = 0.0;     // Phi'(y)
  double phi_prime_err = 0.0;
  double phi_second = 0.0;    // Phi''(y) = (4/y^3) s2 + Q
  double phi_second_err = 0.0;
  double integral_part = 0.0; // (4/y^3) s2
  double q = 0.0;             // boundary term Q(y)
  double boundary = 0.0;      // Z^2(mu) e^{-2mu/y} mu'
  double upper = 0.0;         // where the quadrature actually stops
  std::int64_t evals = 0;
};

struct IntegratorOptions {
  int terms = kDefaultRsTerms;
  double height_budget = 2e6;
  std::string checkpoint_path;  // empty: keep checkpoints in memory only
  MuParams mu;                  // recorded in the checkpoint header
  // Replace the Phi integrand beyond tail_cut by its mean value
  // ln t + 2c - ln 2pi. Never used by the identity checks.
  bool asymptotic_tail = false;
  double tail_cut = 2e6;
};

/// Past 2t/y = 40 the weight e^{-2t/y} is below 5e-18 and the remaining
/// part of Phi, Phi' and Phi'' is far below double precision relative to the
/// whole; the panel sums stop there.
inline constexpr double kWeightCutoff = 20.0;

class Integrator {
 public:
  explicit Integrator(IntegratorOptions options);
  ~Integrator();
  Integrator(const Integrator&) = delete;
  Integrator& operator=(const Integrator&) = delete;

  const IntegratorOptions& options() const { return options_; }

  /// Adaptive integral of Z^2 over iv on the global panel grid. Panels whose
  /// error exceeds their share of tol * max(1, value) are bisected.
  IntegralResult integrate_z2(Interval iv, double tol) const;

  /// I(T), continued from the last checkpoint below T.
  IntegralResult hl_integral(double T, double tol);

  /// Phi and its derivatives at y (y >= 20).
  PhiEval phi_eval(double y, const MuParams& mu, double tol);

  IntegralResult phi_transform(double y, const MuParams& mu, double tol);
  double phi_prime(double y, const MuParams& mu, double tol);
  double phi_second(double y, const MuParams& mu, double tol);
  /// Q(y) alone (needs Z and Z' at mu(y) only).
  double q_term(double y, const MuParams& mu) const;

  /// (4/y^3) int_a^b t (t/y - 1) e^{-2t/y} Z^2 dt, the piece of Phi'' over
  /// [a, b]; b is clipped at the weight cutoff.
  IntegralResult phi_second_part(double y, double a, double b);

  PanelCache& cache() { return *cache_; }
  CheckpointStore& checkpoints() { return *checkpoints_; }

 private:
  WeightedSums weighted_range(double lo, double hi, double y);
  void extend_checkpoints(std::int64_t blocks);

  IntegratorOptions options_;
  std::unique_ptr<PanelCache> cache_;
  std::unique_ptr<CheckpointStore> checkpoints_;
};

}  // namespace hlz
