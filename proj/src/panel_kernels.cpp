// Data-parallel kernels over the panel grid. Each parallel kernel writes
// per-item results into a preallocated slot and the reduction runs serially
// in index order afterwards, so the output does not depend on the number of
// threads. The *_serial versions are the reference the tests compare against.

#include <cstddef>
#include <utility>
#include <vector>

#include "hlz/kahan.hpp"
#include "hlz/omp.hpp"
#include "hlz/panel_grid.hpp"

namespace hlz {

namespace {

std::vector<std::pair<std::size_t, int>> flatten(std::span<Block> blocks) {
  std::vector<std::pair<std::size_t, int>> items;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Block& blk = blocks[b];
    blk.z2.assign(static_cast<std::size_t>(blk.layout.panels) * kNodesPerPanel, 0.0);
    blk.panels.assign(static_cast<std::size_t>(blk.layout.panels), PanelResult{});
    for (int p = 0; p < blk.layout.panels; ++p) items.emplace_back(b, p);
  }
  return items;
}

void evaluate_item(Block& blk, int p, int terms) {
  std::span<double> out(blk.z2.data() + static_cast<std::size_t>(p) * kNodesPerPanel, kNodesPerPanel);
  blk.panels[static_cast<std::size_t>(p)] =
      integrate_panel(blk.layout.panel_start(p), blk.layout.panel_end(p), terms, out);
}

void reduce_blocks(std::span<Block> blocks) {
  for (Block& blk : blocks) {
    KahanSum value, err;
    for (const PanelResult& r : blk.panels) {
      value += r.value;
      err += r.err;
    }
    blk.integral = value.value();
    blk.err = err.value();
  }
}

WeightedSums merge_in_order(const std::vector<WeightedSums>& parts) {
  KahanSum s0, s1, s2, e0, e1, e2;
  WeightedSums out;
  for (const auto& p : parts) {
    s0 += p.s0;
    s1 += p.s1;
    s2 += p.s2;
    e0 += p.err0;
    e1 += p.err1;
    e2 += p.err2;
    out.evals += p.evals;
  }
  out.s0 = s0.value();
  out.s1 = s1.value();
  out.s2 = s2.value();
  out.err0 = e0.value();
  out.err1 = e1.value();
  out.err2 = e2.value();
  return out;
}

}  // namespace

void evaluate_blocks_parallel(std::span<Block> blocks, int terms) {
  const auto items = flatten(blocks);
  const auto n = static_cast<std::ptrdiff_t>(items.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) evaluate_item(blocks[items[i].first], items[i].second, terms);
  reduce_blocks(blocks);
}

void evaluate_blocks_serial(std::span<Block> blocks, int terms) {
  const auto items = flatten(blocks);
  for (const auto& [b, p] : items) evaluate_item(blocks[b], p, terms);
  reduce_blocks(blocks);
}

WeightedSums weighted_sums_parallel(std::span<const Block* const> blocks, double y) {
  std::vector<WeightedSums> parts(blocks.size());
  const auto n = static_cast<std::ptrdiff_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) parts[i] = block_weighted_sums(*blocks[i], 0, blocks[i]->layout.panels, y);
  return merge_in_order(parts);
}

WeightedSums weighted_sums_serial(std::span<const Block* const> blocks, double y) {
  std::vector<WeightedSums> parts(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) parts[i] = block_weighted_sums(*blocks[i], 0, blocks[i]->layout.panels, y);
  return merge_in_order(parts);
}

void accumulate(WeightedSums& a, const WeightedSums& b) {
  a = merge_in_order({a, b});
}

}  // namespace hlz
