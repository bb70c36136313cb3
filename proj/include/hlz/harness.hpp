#pragma once

// Numerical checks of the ladder formulas. Each check produces FormulaReport
// records; asymptotic statements are judged against an envelope scaled by a
// suite constant K, exact identities against a fixed tolerance.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hlz/ladder.hpp"

namespace hlz {

enum class FormulaId { F1_1, F1_2, F1_5, C2_2, C2_3, C2_4, L3_1, F3_5, F4_3 };
inline constexpr FormulaId kAllFormulas[] = {FormulaId::F1_1, FormulaId::F1_2, FormulaId::F1_5,
                                             FormulaId::C2_2, FormulaId::C2_3, FormulaId::C2_4,
                                             FormulaId::L3_1, FormulaId::F3_5, FormulaId::F4_3};
const char* to_string(FormulaId id);
std::optional<FormulaId> parse_formula_id(const std::string& s);

enum class Verdict { pass, trend_ok, fail };
const char* to_string(Verdict v);

struct FormulaReport {
  FormulaId formula_id = FormulaId::F1_1;
  std::vector<std::pair<std::string, double>> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;     // lhs / rhs (NaN when rhs = 0)
  double envelope = 1.0;  // predicted relative error scale
  double K = 5.0;
  Verdict verdict = Verdict::fail;
};

struct TrendSeries {
  std::vector<std::pair<double, double>> points;  // (T, deviation)
  double fitted_constant = 0.0;                   // max deviation / envelope(T)
};

/// a = ln 2pi - 1 - c.
double additive_constant();

/// Centered 3-point moving average; the end points average with their one
/// neighbour.
std::vector<double> smooth3(const std::vector<double>& v);
/// Every smoothed value is <= its predecessor.
bool non_increasing(const std::vector<double>& v);

struct HarnessOptions {
  double K = 5.0;
  double zero_guard = 0.05;
  double sieve_budget = 1e8;
  // Allowed gap between the two sides of the mean/chord equivalence beyond
  // twice the other deviation: covers Phi'(xi) != Phi'(phi(N)) and the
  // asymptotic form of Phi' used in the correction.
  double equivalence_slack = 0.01;
  double rotation_tan = 0.57735026918962576;  // 1/sqrt(3)
  double rotation_eta = 0.1;
  double witness_len = 0.5;
  int witness_count = 3;
  std::vector<double> eta_sequence = {0.5, 0.2, 0.1, 0.05};
};

class Harness {
 public:
  Harness(Ladder& ladder, HarnessOptions options = {});

  FormulaReport check_additive(double T, double U);
  FormulaReport check_multiplicative(double T, double U);
  /// Throws ProximityError when T is within zero_guard of a zero of Z.
  FormulaReport check_pointwise(double T);
  std::vector<FormulaReport> check_mean_equivalence(double N, double M, const std::vector<double>& etas);
  /// Deviation |Phi''(y)| y / (ln y ln ln y) over the grid. When `reports`
  /// is given, one L3_1 record per y is appended to it.
  TrendSeries check_lemma_bound(const std::vector<double>& y_grid, const MuParams& mu,
                                std::vector<FormulaReport>* reports = nullptr);
  std::pair<FormulaReport, FormulaReport> check_hl_and_pi(double T);
  std::vector<FormulaReport> check_witness_intervals(double T);
  FormulaReport check_rotating_chord(double T);

  /// The per-T plan for one formula over a height grid, followed by a trend
  /// record for the asymptotic formulas when the grid has >= 2 points.
  std::vector<FormulaReport> verify(FormulaId id, const std::vector<double>& t_grid);
  std::vector<FormulaReport> verify_all(const std::vector<double>& t_grid);

  const LadderPoint& point(double T);
  const Chord& fundamental_chord(double T);
  Ladder& ladder() { return ladder_; }
  const HarnessOptions& options() const { return options_; }

 private:
  FormulaReport trend_record(FormulaId id, const std::vector<double>& t_grid, const std::vector<double>& deviations);
  double off_zero(double T);

  Ladder& ladder_;
  HarnessOptions options_;
  std::map<double, LadderPoint> points_;
  std::map<double, Chord> chords_;
};

}  // namespace hlz
