#include "hlz/panel_grid.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "hlz/errors.hpp"
#include "hlz/kahan.hpp"
#include "hlz/zeta.hpp"

namespace hlz {

const KronrodRule& kronrod15() {
  static const KronrodRule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    // Boost stores the non-negative half, abscissa[0] = 0; Gauss nodes sit at
    // the even Kronrod indices.
    const auto& ka = gauss_kronrod<double, 15>::abscissa();
    const auto& kw = gauss_kronrod<double, 15>::weights();
    const auto& gw = gauss<double, 7>::weights();
    KronrodRule r;
    constexpr int kHalf = 7;
    for (int i = 0; i <= kHalf; ++i) {
      const double g = (i % 2 == 0) ? gw[i / 2] : 0.0;
      r.x[kHalf + i] = ka[i];
      r.kronrod_w[kHalf + i] = kw[i];
      r.gauss_w[kHalf + i] = g;
      r.x[kHalf - i] = -ka[i];
      r.kronrod_w[kHalf - i] = kw[i];
      r.gauss_w[kHalf - i] = g;
    }
    return r;
  }();
  return rule;
}

PanelResult kronrod_estimate(std::span<const double, kNodesPerPanel> f, double half_length) {
  const auto& rule = kronrod15();
  double resk = 0.0, resg = 0.0, resabs = 0.0;
  for (int j = 0; j < kNodesPerPanel; ++j) {
    resk += rule.kronrod_w[j] * f[j];
    resg += rule.gauss_w[j] * f[j];
    resabs += rule.kronrod_w[j] * std::abs(f[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = 0.0;
  for (int j = 0; j < kNodesPerPanel; ++j) resasc += rule.kronrod_w[j] * std::abs(f[j] - mean);

  const double h = half_length;
  PanelResult out;
  out.value = resk * h;
  resabs *= h;
  resasc *= h;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  out.err = err;
  return out;
}

PanelResult integrate_panel(double a, double b, int terms, std::span<double> z2_out) {
  const auto& rule = kronrod15();
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, kNodesPerPanel> f{};
  for (int j = 0; j < kNodesPerPanel; ++j) f[j] = z_squared(mid + h * rule.x[j], terms);
  if (!z2_out.empty()) std::copy(f.begin(), f.end(), z2_out.begin());
  return kronrod_estimate(f, h);
}

BlockLayout block_layout(std::int64_t index) {
  BlockLayout l;
  l.index = index;
  l.start = kBlockLength * static_cast<double>(index);
  const double top = l.start + kBlockLength;
  const double target = std::min(kMaxPanelLength, 0.5 * mean_zero_spacing(top));
  l.panels = static_cast<int>(std::ceil(kBlockLength / target));
  l.panel_length = kBlockLength / l.panels;
  return l;
}

WeightedSums block_weighted_sums(const Block& block, int first, int last, double y) {
  const auto& rule = kronrod15();
  const double h_nominal = 0.5 * block.layout.panel_length;
  std::array<double, kNodesPerPanel> wf{};
  for (int j = 0; j < kNodesPerPanel; ++j) wf[j] = rule.kronrod_w[j] * std::exp(-2.0 * h_nominal * rule.x[j] / y);

  KahanSum k0, k1, k2;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  for (int p = first; p < last; ++p) {
    const double a = block.layout.panel_start(p);
    const double b = block.layout.panel_end(p);
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double* f = block.z2.data() + static_cast<std::size_t>(p) * kNodesPerPanel;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    for (int j = 0; j < kNodesPerPanel; ++j) {
      const double t = mid + h * rule.x[j];
      const double v = wf[j] * f[j];
      p0 += v;
      p1 += v * t;
      p2 += v * t * (t / y - 1.0);
    }
    const double scale = h * std::exp(-2.0 * mid / y);
    k0 += p0 * scale;
    k1 += p1 * scale;
    k2 += p2 * scale;
    const double ep = block.panels[p].err * std::exp(-2.0 * mid / y);
    e0 += ep;
    e1 += ep * mid;
    e2 += ep * std::abs(mid * (mid / y - 1.0));
  }
  WeightedSums out;
  out.s0 = k0.value();
  out.s1 = k1.value();
  out.s2 = k2.value();
  out.err0 = e0;
  out.err1 = e1;
  out.err2 = e2;
  out.evals = static_cast<std::int64_t>(last - first) * kNodesPerPanel;
  return out;
}

WeightedSums fresh_weighted_sums(double a, double b, double y, int terms) {
  WeightedSums out;
  if (!(b > a)) return out;
  const auto& rule = kronrod15();
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, kNodesPerPanel> g0{}, g1{}, g2{};
  for (int j = 0; j < kNodesPerPanel; ++j) {
    const double t = mid + h * rule.x[j];
    const double v = z_squared(t, terms) * std::exp(-2.0 * t / y);
    g0[j] = v;
    g1[j] = v * t;
    g2[j] = v * t * (t / y - 1.0);
  }
  const PanelResult r0 = kronrod_estimate(g0, h);
  const PanelResult r1 = kronrod_estimate(g1, h);
  const PanelResult r2 = kronrod_estimate(g2, h);
  out.s0 = r0.value;
  out.s1 = r1.value;
  out.s2 = r2.value;
  out.err0 = r0.err;
  out.err1 = r1.err;
  out.err2 = r2.err;
  out.evals = kNodesPerPanel;
  return out;
}

PanelCache::PanelCache(int terms, double height_budget) : terms_(terms), height_budget_(height_budget) {}

void PanelCache::ensure(double t) {
  if (t > height_budget_) {
    throw BudgetError("quadrature up to t = " + std::to_string(t) + " exceeds the height budget " +
                      std::to_string(height_budget_));
  }
  const auto needed = static_cast<std::int64_t>(std::ceil(t / kBlockLength));
  {
    std::shared_lock lock(mutex_);
    if (static_cast<std::int64_t>(blocks_.size()) >= needed) return;
  }
  std::unique_lock lock(mutex_);
  const auto have = static_cast<std::int64_t>(blocks_.size());
  if (have >= needed) return;
  std::vector<Block> fresh(static_cast<std::size_t>(needed - have));
  for (std::int64_t i = 0; i < needed - have; ++i) fresh[i].layout = block_layout(have + i);
  evaluate_blocks_parallel(fresh, terms_);
  blocks_.reserve(static_cast<std::size_t>(needed));
  for (auto& b : fresh) blocks_.push_back(std::make_unique<Block>(std::move(b)));
}

std::vector<const Block*> PanelCache::snapshot(std::int64_t count) const {
  std::shared_lock lock(mutex_);
  std::vector<const Block*> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(blocks_.at(static_cast<std::size_t>(i)).get());
  return out;
}

const Block* PanelCache::block(std::int64_t index) const {
  std::shared_lock lock(mutex_);
  return blocks_.at(static_cast<std::size_t>(index)).get();
}

double PanelCache::covered() const {
  std::shared_lock lock(mutex_);
  return kBlockLength * static_cast<double>(blocks_.size());
}

}  // namespace hlz
