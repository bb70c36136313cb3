#pragma once

// Jacob's ladder: phi(T) is the root of Phi(y) = I(T). Differentiating gives
// Z^2(T) = Phi'(phi(T)) phi'(T), so dphi/dT comes for free from one more
// Z evaluation. Chords of y = phi(T)/2 have slope
//   tan alpha(T, U) = (phi(T+U) - phi(T)) / (2U).

#include <optional>
#include <vector>

#include "hlz/quadrature.hpp"
#include "hlz/zeta.hpp"

namespace hlz {

/// U0(T) = T^(1/3 + 2 epsilon).
struct EpsilonConfig {
  double epsilon = 0.01;
  double u0(double T) const;
};
/// Throws std::invalid_argument unless 0 < epsilon < 1/24.
void validate(const EpsilonConfig& eps);

struct LadderPoint {
  double T = 0.0;
  double phi = 0.0;
  double dphi_dT = 0.0;
  double residual = 0.0;  // |Phi(phi) - I(T)|
  double I = 0.0;         // I(T)
  double phi_prime = 0.0; // Phi'(phi)
  int iterations = 0;
};

struct Chord {
  double N = 0.0;
  double M = 0.0;
  double tan_alpha = 0.0;
  bool is_fundamental = false;
  bool is_almost_parallel = false;
  LadderPoint lower;
  LadderPoint upper;
};

/// Threshold used for the almost-parallel flag when the caller gives none.
inline constexpr double kDefaultParallelEta = 0.1;

/// |tan alpha - 1| <= eta. eta must lie in (0, 1/2).
bool is_almost_parallel(const Chord& ch, double eta);

/// Safeguarded Newton iteration limits.
inline constexpr int kMaxSolverIterations = 80;
inline constexpr double kSolverStepTol = 1e-14;

class Ladder {
 public:
  Ladder(Integrator& integrator, MuParams mu, EpsilonConfig eps, double tol);

  /// phi(T) for T >= 100. `near` is a previously solved point used to seed
  /// the iteration (one Newton step from it is usually within 1e-6).
  LadderPoint solve_phi(double T, const std::optional<LadderPoint>& near = std::nullopt);

  Chord chord(double T, double U, double eta = kDefaultParallelEta);

  /// Smallest U in (0, U0(gamma)) found by a scan of step U0/400 where
  /// tan alpha(gamma, U) crosses tan_target, refined by bisection to 1e-6.
  /// Throws NumericError when the scan finds no crossing.
  Chord find_chord_with_angle(const Zero& gamma, double tan_target, double eta_bracket);

  /// Up to `count` disjoint intervals [N, N + len] in [T, T + U0(T)] whose
  /// mean of Z^2 is within 20% of ln T, scanning N with step len/4.
  std::vector<Interval> find_intervals_with_mean(double T, double target_len, int count);

  /// Chord through two solved points (lo.T < hi.T).
  Chord chord_between(const LadderPoint& lo, const LadderPoint& hi, double eta = kDefaultParallelEta) const;

  Integrator& integrator() { return integrator_; }
  const MuParams& mu() const { return mu_; }
  const EpsilonConfig& eps() const { return eps_; }
  double tol() const { return tol_; }

 private:
  Integrator& integrator_;
  MuParams mu_;
  EpsilonConfig eps_;
  double tol_;
};

/// Mean-value tolerance of find_intervals_with_mean.
inline constexpr double kMeanWindow = 0.2;
/// Target precision of find_chord_with_angle.
inline constexpr double kAngleTol = 1e-6;

}  // namespace hlz
