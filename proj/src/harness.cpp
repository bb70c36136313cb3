#include "hlz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hlz/errors.hpp"

namespace hlz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 6.28318530717958647693;
// |lhs/rhs - 1| allowed by the additive check once quadrature and the
// asymptotic form of Phi' dominate the T^{-1/3+4 eps} remainder.
constexpr double kAdditiveTrendTolerance = 0.05;

double safe_ratio(double lhs, double rhs) { return rhs != 0.0 ? lhs / rhs : kNaN; }

double loglog_envelope(double T) { return std::log(std::log(T)) / std::log(T); }

Verdict within(double ratio, double K, double envelope) {
  return std::abs(ratio - 1.0) <= K * envelope ? Verdict::trend_ok : Verdict::fail;
}

void require_height(double T, double min, const char* what) {
  if (!(T >= min) || !std::isfinite(T)) {
    throw std::domain_error(std::string(what) + ": T must be >= " + std::to_string(static_cast<int>(min)));
  }
}

}  // namespace

const char* to_string(FormulaId id) {
  switch (id) {
    case FormulaId::F1_1: return "F1_1";
    case FormulaId::F1_2: return "F1_2";
    case FormulaId::F1_5: return "F1_5";
    case FormulaId::C2_2: return "C2_2";
    case FormulaId::C2_3: return "C2_3";
    case FormulaId::C2_4: return "C2_4";
    case FormulaId::L3_1: return "L3_1";
    case FormulaId::F3_5: return "F3_5";
    case FormulaId::F4_3: return "F4_3";
  }
  return "?";
}

std::optional<FormulaId> parse_formula_id(const std::string& s) {
  for (FormulaId id : kAllFormulas) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::trend_ok: return "trend_ok";
    case Verdict::fail: return "fail";
  }
  return "?";
}

double additive_constant() { return std::log(kTwoPi) - 1.0 - kEulerGamma; }

std::vector<double> smooth3(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += v[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

Harness::Harness(Ladder& ladder, HarnessOptions options) : ladder_(ladder), options_(std::move(options)) {}

const LadderPoint& Harness::point(double T) {
  auto it = points_.find(T);
  if (it != points_.end()) return it->second;
  // Unseeded, so the point is the same whichever check asks for it first.
  return points_.emplace(T, ladder_.solve_phi(T)).first->second;
}

const Chord& Harness::fundamental_chord(double T) {
  auto it = chords_.find(T);
  if (it != chords_.end()) return it->second;
  const double u0 = ladder_.eps().u0(T);
  const LadderPoint lo = point(T);
  const LadderPoint hi = point(T + u0);
  return chords_.emplace(T, ladder_.chord_between(lo, hi)).first->second;
}

FormulaReport Harness::check_additive(double T, double U) {
  require_height(T, 100.0, "check_additive");
  const double u0 = ladder_.eps().u0(T);
  if (!(U > 0.0) || !(U <= u0)) throw std::domain_error("check_additive: U must lie in (0, U0(T)]");
  const Chord ch = U == u0 ? fundamental_chord(T) : ladder_.chord_between(point(T), point(T + U));
  FormulaReport r;
  r.formula_id = FormulaId::F1_1;
  r.inputs = {{"T", T}, {"U", U}};
  r.K = options_.K;
  r.lhs = ladder_.integrator().integrate_z2({T, T + U}, ladder_.tol()).value;
  r.rhs = U * std::log(0.5 * ch.lower.phi * std::exp(-additive_constant())) * ch.tan_alpha;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  // The remainder is absolute, T^{-1/3+4 eps}; expressed relative to rhs.
  const double remainder = std::pow(T, -1.0 / 3.0 + 4.0 * ladder_.eps().epsilon);
  r.envelope = std::abs(remainder / r.rhs);
  if (std::abs(r.lhs - r.rhs) <= r.K * remainder) {
    r.verdict = Verdict::pass;
  } else if (std::abs(r.ratio - 1.0) <= kAdditiveTrendTolerance) {
    r.verdict = Verdict::trend_ok;
  } else {
    r.verdict = Verdict::fail;
  }
  return r;
}

FormulaReport Harness::check_multiplicative(double T, double U) {
  require_height(T, 100.0, "check_multiplicative");
  if (!(U > 0.0) || !(U <= T / std::log(T))) throw std::domain_error("check_multiplicative: U must lie in (0, T/ln T]");
  const double u0 = ladder_.eps().u0(T);
  const Chord ch = U == u0 ? fundamental_chord(T) : ladder_.chord_between(point(T), point(T + U));
  FormulaReport r;
  r.formula_id = FormulaId::F1_2;
  r.inputs = {{"T", T}, {"U", U}};
  r.K = options_.K;
  r.lhs = ladder_.integrator().integrate_z2({T, T + U}, ladder_.tol()).value;
  r.rhs = U * std::log(T) * ch.tan_alpha;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.envelope = loglog_envelope(T);
  r.verdict = std::isfinite(r.ratio) ? within(r.ratio, r.K, r.envelope) : Verdict::fail;
  return r;
}

FormulaReport Harness::check_pointwise(double T) {
  require_height(T, 1000.0, "check_pointwise");
  const int terms = ladder_.integrator().options().terms;
  if (near_zero(T, options_.zero_guard, terms)) {
    throw ProximityError("check_pointwise: T = " + std::to_string(T) + " is within " +
                         std::to_string(options_.zero_guard) + " of a zero of Z");
  }
  const LadderPoint& p = point(T);
  FormulaReport r;
  r.formula_id = FormulaId::F1_5;
  r.inputs = {{"T", T}};
  r.K = options_.K;
  r.lhs = z_squared(T, terms);
  r.rhs = 0.5 * std::log(T) * p.dphi_dT;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.envelope = loglog_envelope(T);
  r.verdict = within(r.ratio, r.K, r.envelope);
  return r;
}

std::vector<FormulaReport> Harness::check_mean_equivalence(double N, double M, const std::vector<double>& etas) {
  require_height(N, 100.0, "check_mean_equivalence");
  const double u0 = ladder_.eps().u0(N);
  if (!(M > N) || !(M - N <= u0 * (1.0 + 1e-12))) {
    throw std::domain_error("check_mean_equivalence: need N < M <= N + U0(N)");
  }
  const Chord ch = std::abs((M - N) - u0) <= 1e-12 * u0 ? fundamental_chord(N) : ladder_.chord_between(point(N), point(M));
  const double len = M - N;
  const double mean = ladder_.integrator().integrate_z2({N, M}, ladder_.tol()).value / len;
  const double corrected = mean / std::log(0.5 * ch.lower.phi * std::exp(-additive_constant()));
  const double dm = corrected - 1.0;
  const double dt = ch.tan_alpha - 1.0;
  const double slack = options_.equivalence_slack;
  const bool co_small = std::abs(dm) <= 2.0 * std::abs(dt) + slack && std::abs(dt) <= 2.0 * std::abs(dm) + slack;

  std::vector<FormulaReport> out;
  for (double eta : etas) {
    FormulaReport r;
    r.formula_id = FormulaId::C2_2;
    r.inputs = {{"T", N},
                {"N", N},
                {"M", M},
                {"eta", eta},
                {"mean_over_lnT", mean / std::log(N)},
                {"mean_within_eta", std::abs(dm) <= eta ? 1.0 : 0.0},
                {"tan_within_eta", std::abs(dt) <= eta ? 1.0 : 0.0}};
    r.K = options_.K;
    r.lhs = corrected;
    r.rhs = ch.tan_alpha;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.envelope = eta;
    r.verdict = co_small ? Verdict::pass : Verdict::fail;
    out.push_back(r);
  }
  return out;
}

TrendSeries Harness::check_lemma_bound(const std::vector<double>& y_grid, const MuParams& mu,
                                       std::vector<FormulaReport>* reports) {
  TrendSeries series;
  for (double y : y_grid) {
    if (!(y > 16.0)) throw std::domain_error("check_lemma_bound: y must exceed e^e");
    const PhiEval e = ladder_.integrator().phi_eval(y, mu, ladder_.tol());
    const double scale = std::log(y) * std::log(std::log(y)) / y;
    const double dev = std::abs(e.phi_second) / scale;
    series.points.emplace_back(y, dev);
    series.fitted_constant = std::max(series.fitted_constant, dev);
    if (reports) {
      FormulaReport r;
      r.formula_id = FormulaId::L3_1;
      r.inputs = {{"y", y}};
      r.K = options_.K;
      r.lhs = std::abs(e.phi_second);
      r.rhs = scale;
      r.ratio = dev;
      r.envelope = 1.0;
      r.verdict = dev <= r.K ? Verdict::trend_ok : Verdict::fail;
      reports->push_back(r);
    }
  }
  return series;
}

std::pair<FormulaReport, FormulaReport> Harness::check_hl_and_pi(double T) {
  require_height(T, 1000.0, "check_hl_and_pi");
  const double log_t = std::log(T);
  FormulaReport hl;
  hl.formula_id = FormulaId::F3_5;
  hl.inputs = {{"T", T}};
  hl.K = options_.K;
  hl.lhs = ladder_.integrator().hl_integral(T, ladder_.tol()).value;
  hl.rhs = T * log_t;
  hl.ratio = safe_ratio(hl.lhs, hl.rhs);
  hl.envelope = 1.0 / log_t;
  hl.verdict = within(hl.ratio, hl.K, hl.envelope);

  FormulaReport pi;
  pi.formula_id = FormulaId::F4_3;
  pi.inputs = {{"T", T}};
  pi.K = options_.K;
  pi.lhs = T - 0.5 * point(T).phi;
  pi.rhs = (1.0 - kEulerGamma) * static_cast<double>(prime_pi(T, options_.sieve_budget));
  pi.ratio = safe_ratio(pi.lhs, pi.rhs);
  pi.envelope = 1.0 / log_t;
  pi.verdict = within(pi.ratio, pi.K, pi.envelope);
  return {hl, pi};
}

std::vector<FormulaReport> Harness::check_witness_intervals(double T) {
  require_height(T, 100.0, "check_witness_intervals");
  const auto found = ladder_.find_intervals_with_mean(T, options_.witness_len, options_.witness_count);
  std::vector<FormulaReport> out;
  const double log_t = std::log(T);
  for (const Interval& iv : found) {
    FormulaReport r;
    r.formula_id = FormulaId::C2_3;
    r.inputs = {{"T", T}, {"N", iv.a}, {"M", iv.b}};
    r.K = options_.K;
    r.lhs = ladder_.integrator().integrate_z2(iv, ladder_.tol()).value / (iv.b - iv.a);
    r.rhs = log_t;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.envelope = kMeanWindow;
    r.verdict = std::abs(r.ratio - 1.0) <= kMeanWindow ? Verdict::pass : Verdict::fail;
    out.push_back(r);
  }
  if (out.empty()) {
    FormulaReport r;
    r.formula_id = FormulaId::C2_3;
    r.inputs = {{"T", T}, {"N", kNaN}, {"M", kNaN}};
    r.K = options_.K;
    r.lhs = kNaN;
    r.rhs = log_t;
    r.ratio = kNaN;
    r.envelope = kMeanWindow;
    r.verdict = Verdict::fail;
    out.push_back(r);
  }
  return out;
}

FormulaReport Harness::check_rotating_chord(double T) {
  require_height(T, 100.0, "check_rotating_chord");
  const int terms = ladder_.integrator().options().terms;
  const Zero gamma = nearest_zero(T, terms);
  FormulaReport r;
  r.formula_id = FormulaId::C2_4;
  r.K = options_.K;
  r.rhs = options_.rotation_tan;
  const double u0 = ladder_.eps().u0(gamma.gamma);
  r.envelope = loglog_envelope(gamma.gamma);
  try {
    const Chord ch = ladder_.find_chord_with_angle(gamma, options_.rotation_tan, options_.rotation_eta);
    const double U = ch.M - ch.N;
    r.inputs = {{"T", T}, {"gamma", gamma.gamma}, {"U", U}, {"U0", u0}, {"tan_alpha", ch.tan_alpha}};
    r.lhs = ladder_.integrator().integrate_z2({ch.N, ch.M}, ladder_.tol()).value / (U * std::log(gamma.gamma));
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.verdict = (U < u0) ? within(r.ratio, r.K, r.envelope) : Verdict::fail;
  } catch (const NumericError&) {
    r.inputs = {{"T", T}, {"gamma", gamma.gamma}, {"U", kNaN}, {"U0", u0}, {"tan_alpha", kNaN}};
    r.lhs = kNaN;
    r.ratio = kNaN;
    r.verdict = Verdict::fail;
  }
  return r;
}

double Harness::off_zero(double T) {
  const int terms = ladder_.integrator().options().terms;
  double t = T;
  for (int i = 0; i < 100; ++i, t += 2.0 * options_.zero_guard) {
    if (!near_zero(t, options_.zero_guard, terms)) return t;
  }
  throw NumericError("no height clear of zeros near T = " + std::to_string(T));
}

FormulaReport Harness::trend_record(FormulaId id, const std::vector<double>& t_grid,
                                    const std::vector<double>& deviations) {
  const auto s = smooth3(deviations);
  FormulaReport r;
  r.formula_id = id;
  r.inputs = {{"trend_points", static_cast<double>(t_grid.size())}, {"T_first", t_grid.front()}, {"T_last", t_grid.back()}};
  r.K = options_.K;
  r.lhs = s.back();
  r.rhs = s.front();
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.envelope = 1.0;
  r.verdict = non_increasing(s) ? Verdict::trend_ok : Verdict::fail;
  return r;
}

std::vector<FormulaReport> Harness::verify(FormulaId id, const std::vector<double>& t_grid) {
  std::vector<FormulaReport> out;
  std::vector<double> dev;
  auto add_dev = [&](double d) { dev.push_back(std::abs(d)); };
  for (double T : t_grid) {
    const double u0 = ladder_.eps().u0(T);
    switch (id) {
      case FormulaId::F1_1:
        out.push_back(check_additive(T, u0));
        break;
      case FormulaId::F1_2: {
        out.push_back(check_multiplicative(T, u0));
        add_dev(out.back().ratio - 1.0);
        out.push_back(check_multiplicative(T, 0.5));
        break;
      }
      case FormulaId::F1_5: {
        const double t = off_zero(T);
        FormulaReport r = check_pointwise(t);
        if (t != T) r.inputs.insert(r.inputs.begin(), {"T_requested", T});
        add_dev(r.ratio - 1.0);
        out.push_back(r);
        break;
      }
      case FormulaId::C2_2: {
        auto rs = check_mean_equivalence(T, T + u0, options_.eta_sequence);
        add_dev(fundamental_chord(T).tan_alpha - 1.0);
        out.insert(out.end(), rs.begin(), rs.end());
        break;
      }
      case FormulaId::C2_3: {
        auto rs = check_witness_intervals(T);
        out.insert(out.end(), rs.begin(), rs.end());
        break;
      }
      case FormulaId::C2_4:
        out.push_back(check_rotating_chord(T));
        break;
      case FormulaId::L3_1: {
        std::vector<FormulaReport> rs;
        const double y = point(T).phi;
        check_lemma_bound({y}, ladder_.mu(), &rs);
        rs.back().inputs.insert(rs.back().inputs.begin(), {"T", T});
        add_dev(rs.back().ratio);
        out.push_back(rs.back());
        break;
      }
      case FormulaId::F3_5: {
        auto [hl, pi] = check_hl_and_pi(T);
        add_dev(hl.ratio - 1.0);
        out.push_back(hl);
        break;
      }
      case FormulaId::F4_3: {
        auto [hl, pi] = check_hl_and_pi(T);
        add_dev(pi.ratio - 1.0);
        out.push_back(pi);
        break;
      }
    }
  }
  if (!dev.empty() && t_grid.size() >= 2) out.push_back(trend_record(id, t_grid, dev));
  return out;
}

std::vector<FormulaReport> Harness::verify_all(const std::vector<double>& t_grid) {
  std::vector<FormulaReport> out;
  for (FormulaId id : kAllFormulas) {
    auto rs = verify(id, t_grid);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

}  // namespace hlz
