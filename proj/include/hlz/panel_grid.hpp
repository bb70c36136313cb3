#pragma once

// The global panel decomposition of [0, inf) used by every Z^2 integral, the
// per-panel Gauss-Kronrod kernels (OpenMP and serial reference), and the
// cache of node values that makes repeated weighted integrals cheap.
//
// The grid depends only on t: block k covers [100k, 100(k+1)] and is split
// into equal panels no longer than half the mean zero spacing at the top of
// the block (and never longer than 0.5). Every integral, whichever thread
// computes it, sees the same panels and sums them in index order.

#include <array>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

namespace hlz {

inline constexpr double kBlockLength = 100.0;
inline constexpr int kNodesPerPanel = 15;
inline constexpr double kMaxPanelLength = 0.5;

/// 15-point Kronrod rule with its embedded 7-point Gauss rule, on [-1, 1].
/// Nodes are ordered from -1 to 1; gauss_w is zero on Kronrod-only nodes.
struct KronrodRule {
  std::array<double, kNodesPerPanel> x{};
  std::array<double, kNodesPerPanel> kronrod_w{};
  std::array<double, kNodesPerPanel> gauss_w{};
};
const KronrodRule& kronrod15();

struct PanelResult {
  double value = 0.0;
  double err = 0.0;
};

/// Integral of Z^2 over [a, b] with one Kronrod panel. Writes the 15 node
/// values to z2_out when it is non-empty.
PanelResult integrate_panel(double a, double b, int terms, std::span<double> z2_out = {});

/// QUADPACK-style error estimate from the Kronrod/Gauss pair.
PanelResult kronrod_estimate(std::span<const double, kNodesPerPanel> f, double half_length);

struct BlockLayout {
  std::int64_t index = 0;
  double start = 0.0;
  double panel_length = 0.0;
  int panels = 0;
  double panel_start(int p) const { return start + p * panel_length; }
  double panel_end(int p) const { return p + 1 == panels ? start + kBlockLength : start + (p + 1) * panel_length; }
};

BlockLayout block_layout(std::int64_t index);

struct Block {
  BlockLayout layout;
  std::vector<double> z2;            // panels * 15 node values
  std::vector<PanelResult> panels;   // per-panel integral and error
  double integral = 0.0;             // Kahan sum of panel values
  double err = 0.0;
};

/// Fills z2, panels, integral and err for each block from its layout.
void evaluate_blocks_parallel(std::span<Block> blocks, int terms);
/// Reference implementation of evaluate_blocks_parallel, kept for testing.
void evaluate_blocks_serial(std::span<Block> blocks, int terms);

/// Weighted sums over a range of panels:
///   s0 = int Z^2 e^{-2t/y},  s1 = int t Z^2 e^{-2t/y},
///   s2 = int t (t/y - 1) Z^2 e^{-2t/y}
/// with error estimates propagated from the panel errors.
struct WeightedSums {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double err0 = 0.0, err1 = 0.0, err2 = 0.0;
  std::int64_t evals = 0;
};

/// Weighted sums over panels [first, last) of one block.
WeightedSums block_weighted_sums(const Block& block, int first, int last, double y);

/// Weighted sums over [a, b] using freshly evaluated nodes (one Kronrod
/// panel, no cache). Used for the partial panels at the ends of a range.
WeightedSums fresh_weighted_sums(double a, double b, double y, int terms);

/// Weighted sums over whole blocks, merged in index order.
WeightedSums weighted_sums_parallel(std::span<const Block* const> blocks, double y);
/// Reference implementation of weighted_sums_parallel, kept for testing.
WeightedSums weighted_sums_serial(std::span<const Block* const> blocks, double y);

/// Adds b into a with compensated accumulation of each field.
void accumulate(WeightedSums& a, const WeightedSums& b);

/// Blocks of node values covering [0, covered()), grown on demand.
/// Reads are concurrent; growth is serialized.
class PanelCache {
 public:
  PanelCache(int terms, double height_budget);

  /// Makes sure every block overlapping [0, t] exists. Throws BudgetError if
  /// t exceeds the height budget.
  void ensure(double t);

  /// Blocks [0, count) as stable pointers. Requires ensure() first.
  std::vector<const Block*> snapshot(std::int64_t count) const;
  const Block* block(std::int64_t index) const;

  double covered() const;
  int terms() const { return terms_; }
  double height_budget() const { return height_budget_; }

 private:
  int terms_;
  double height_budget_;
  mutable std::shared_mutex mutex_;
  std::vector<std::unique_ptr<Block>> blocks_;
};

}  // namespace hlz
