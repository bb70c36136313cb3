#include "hlz/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hlz/errors.hpp"

namespace hlz {

double EpsilonConfig::u0(double T) const { return std::pow(T, 1.0 / 3.0 + 2.0 * epsilon); }

void validate(const EpsilonConfig& eps) {
  if (!(eps.epsilon > 0.0) || !(eps.epsilon < 1.0 / 24.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/24)");
  }
}

bool is_almost_parallel(const Chord& ch, double eta) {
  if (!(eta > 0.0) || !(eta < 0.5)) throw std::domain_error("is_almost_parallel: eta must lie in (0, 1/2)");
  return std::abs(ch.tan_alpha - 1.0) <= eta;
}

Ladder::Ladder(Integrator& integrator, MuParams mu, EpsilonConfig eps, double tol)
    : integrator_(integrator), mu_(mu), eps_(eps), tol_(tol) {
  validate(mu_);
  validate(eps_);
  if (!(tol_ > 0.0)) throw std::invalid_argument("tol must be positive");
}

LadderPoint Ladder::solve_phi(double T, const std::optional<LadderPoint>& near) {
  if (!(T >= 100.0) || !std::isfinite(T)) throw std::domain_error("solve_phi: T must be >= 100");
  const double target = integrator_.hl_integral(T, tol_).value;

  double lo = std::max(20.0, 0.5 * T);
  double hi = 4.0 * T;
  bool widened = false;

  double y;
  if (near && near->phi_prime > 0.0) {
    y = near->phi + (target - near->I) / near->phi_prime;
  } else {
    y = 2.0 * T * (1.0 - (1.0 - kEulerGamma) / std::log(T));
  }
  y = std::clamp(y, lo, hi);

  // Points where F = Phi - I is known to be negative / positive.
  double below = -std::numeric_limits<double>::infinity();
  double above = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= kMaxSolverIterations; ++it) {
    const PhiEval e = integrator_.phi_eval(y, mu_, tol_);
    const double f = e.phi - target;
    const double step = f / e.phi_prime;
    const bool done = f == 0.0 || std::abs(step) <= kSolverStepTol * y ||
                      (above - below) <= kSolverStepTol * y;
    if (done) {
      LadderPoint p;
      p.T = T;
      p.phi = y;
      p.I = target;
      p.residual = std::abs(f);
      p.phi_prime = e.phi_prime;
      p.dphi_dT = z_squared(T, integrator_.options().terms) / e.phi_prime;
      p.iterations = it;
      return p;
    }
    if (f < 0.0) {
      below = y;
    } else {
      above = y;
    }

    // The root lies beyond a bracket end we are already sitting on.
    const bool outside = (f > 0.0 && y <= lo) || (f < 0.0 && y >= hi);
    if (outside) {
      if (widened) {
        throw NumericError("solve_phi: Phi(y) - I(T) has one sign on [T/4, 8T] at T = " + std::to_string(T));
      }
      lo = std::max(20.0, 0.25 * T);
      hi = 8.0 * T;
      widened = true;
    }

    double next = y - step;
    next = std::clamp(next, lo, hi);
    if (!(next > below && next < above)) {
      next = (std::isfinite(below) && std::isfinite(above)) ? 0.5 * (below + above) : std::clamp(next, lo, hi);
    }
    y = next;
  }
  throw NumericError("solve_phi: no convergence in 80 iterations at T = " + std::to_string(T));
}

Chord Ladder::chord_between(const LadderPoint& lo, const LadderPoint& hi, double eta) const {
  Chord ch;
  ch.N = lo.T;
  ch.M = hi.T;
  ch.lower = lo;
  ch.upper = hi;
  ch.tan_alpha = (hi.phi - lo.phi) / (2.0 * (hi.T - lo.T));
  const double u0 = eps_.u0(lo.T);
  ch.is_fundamental = std::abs((hi.T - lo.T) - u0) <= 1e-12 * u0;
  ch.is_almost_parallel = std::abs(ch.tan_alpha - 1.0) <= eta;
  return ch;
}

Chord Ladder::chord(double T, double U, double eta) {
  if (!(U > 0.0) || !std::isfinite(U)) throw std::domain_error("chord: U must be positive");
  const LadderPoint lo = solve_phi(T);
  const LadderPoint hi = solve_phi(T + U);
  return chord_between(lo, hi, eta);
}

Chord Ladder::find_chord_with_angle(const Zero& gamma, double tan_target, double eta_bracket) {
  if (!(gamma.gamma >= 100.0)) throw std::domain_error("find_chord_with_angle: gamma must be >= 100");
  if (!(eta_bracket > 0.0) || !(tan_target >= eta_bracket) || !(tan_target <= 1.0 - eta_bracket)) {
    throw std::domain_error("find_chord_with_angle: tan_target must lie in [eta, 1 - eta]");
  }
  const double u0 = eps_.u0(gamma.gamma);
  const double du = u0 / 400.0;
  const LadderPoint base = solve_phi(gamma.gamma);

  auto tan_at = [&](double U, const LadderPoint& seed, LadderPoint& out) {
    out = solve_phi(gamma.gamma + U, seed);
    return (out.phi - base.phi) / (2.0 * U);
  };

  LadderPoint prev_pt = base;
  double prev_u = 0.0;
  double prev_f = -tan_target;  // tan alpha -> phi'(gamma)/2 = 0 as U -> 0
  for (int i = 1; i < 400; ++i) {
    const double u = du * i;
    LadderPoint pt;
    const double f = tan_at(u, prev_pt, pt) - tan_target;
    if (std::abs(f) <= kAngleTol) return chord_between(base, pt, kDefaultParallelEta);
    if ((f > 0.0) != (prev_f > 0.0)) {
      double a = prev_u, b = u;
      double fa = prev_f;
      LadderPoint seed = prev_pt;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        LadderPoint mp;
        const double fm = tan_at(m, seed, mp) - tan_target;
        if (std::abs(fm) <= kAngleTol) return chord_between(base, mp, kDefaultParallelEta);
        if ((fm > 0.0) == (fa > 0.0)) {
          a = m;
          fa = fm;
          seed = mp;
        } else {
          b = m;
        }
        if (b - a <= 1e-13 * b) break;
      }
      throw NumericError("find_chord_with_angle: bisection stalled before reaching 1e-6");
    }
    prev_u = u;
    prev_f = f;
    prev_pt = pt;
  }
  throw NumericError("find_chord_with_angle: tan alpha never crosses the target in (0, U0) at gamma = " +
                     std::to_string(gamma.gamma));
}

std::vector<Interval> Ladder::find_intervals_with_mean(double T, double target_len, int count) {
  const double u0 = eps_.u0(T);
  if (!(target_len > 0.0) || !(target_len < u0)) {
    throw std::domain_error("find_intervals_with_mean: target_len must lie in (0, U0(T))");
  }
  if (count < 1) throw std::domain_error("find_intervals_with_mean: count must be >= 1");
  const double log_t = std::log(T);
  const double step = target_len / 4.0;
  std::vector<Interval> out;
  double free_from = T;
  for (int j = 0;; ++j) {
    const double n = T + step * j;
    if (n + target_len > T + u0) break;
    if (n < free_from) continue;
    const double mean = integrator_.integrate_z2({n, n + target_len}, tol_).value / target_len;
    if (std::abs(mean / log_t - 1.0) <= kMeanWindow) {
      out.push_back({n, n + target_len});
      free_from = n + target_len;
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

}  // namespace hlz
