#include "hlz/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlz/errors.hpp"
#include "hlz/kahan.hpp"
#include "hlz/omp.hpp"

namespace hlz {

namespace {

constexpr double kTwoPi = 6.28318530717958647693;
constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr int kMaxRefineRounds = 40;

// Index of the panel of `l` that contains t (start <= t < end; the block end
// maps to the last panel).
int panel_index(const BlockLayout& l, double t) {
  int p = static_cast<int>(std::floor((t - l.start) / l.panel_length));
  p = std::clamp(p, 0, l.panels - 1);
  while (p > 0 && l.panel_start(p) > t) --p;
  while (p < l.panels - 1 && l.panel_end(p) <= t) ++p;
  return p;
}

// Index of the panel with start < t <= end.
int panel_index_upper(const BlockLayout& l, double t) {
  int p = panel_index(l, t);
  if (p > 0 && t == l.panel_start(p)) --p;
  return p;
}

std::int64_t block_of(double t) { return static_cast<std::int64_t>(std::floor(t / kBlockLength)); }

struct Piece {
  double a = 0.0;
  double b = 0.0;
  PanelResult r;
};

void evaluate_pieces(std::vector<Piece>& pieces, int terms) {
  const auto n = static_cast<std::ptrdiff_t>(pieces.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) pieces[i].r = integrate_panel(pieces[i].a, pieces[i].b, terms);
}

WeightedSums merge(const std::vector<WeightedSums>& parts) {
  WeightedSums out;
  for (const auto& p : parts) accumulate(out, p);
  return out;
}

void check_y(double y, const char* what) {
  if (!(y >= 20.0) || !std::isfinite(y)) {
    throw std::domain_error(std::string(what) + ": y must be >= 20, got " + std::to_string(y));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// mu(y)

double MuParams::value(double y) const { return coeff * std::pow(y, omega1) * std::pow(std::log(y), omega2); }

double MuParams::prime(double y) const {
  const double l = std::log(y);
  return coeff * std::pow(y, omega1 - 1.0) * std::pow(l, omega2 - 1.0) * (omega1 * l + omega2);
}

double MuParams::second(double y) const {
  // mu' = A B with A = coeff y^(w1-1) L^(w2-1), B = w1 L + w2.
  const double l = std::log(y);
  const double a = coeff * std::pow(y, omega1 - 1.0) * std::pow(l, omega2 - 1.0);
  const double b = omega1 * l + omega2;
  const double da = coeff * std::pow(y, omega1 - 2.0) * std::pow(l, omega2 - 2.0) * ((omega1 - 1.0) * l + (omega2 - 1.0));
  const double db = omega1 / y;
  return da * b + a * db;
}

void validate(const MuParams& mu) {
  if (!(mu.omega1 >= 1.0) || !(mu.omega2 >= 1.0) || !(mu.coeff > 0.0) || !std::isfinite(mu.omega1) ||
      !std::isfinite(mu.omega2) || !std::isfinite(mu.coeff)) {
    throw std::invalid_argument("mu parameters need omega1 >= 1, omega2 >= 1, coeff > 0");
  }
}

// ---------------------------------------------------------------------------
// g(t)

double g_eval(double t, double phi) { return t * (t / phi - 1.0) * std::exp(-2.0 * t / phi); }

GFacts g_extrema(double phi) {
  if (!(phi > std::exp(1.0))) throw std::domain_error("g_extrema: phi must exceed e");
  GFacts g;
  g.phi = phi;
  g.argmin = (1.0 - kSqrtHalf) * phi;
  g.argmax = (1.0 + kSqrtHalf) * phi;
  g.min_val = -kSqrtHalf * (1.0 - kSqrtHalf) * std::exp(-2.0 + 2.0 * kSqrtHalf) * phi;
  g.max_val = kSqrtHalf * (1.0 + kSqrtHalf) * std::exp(-2.0 - 2.0 * kSqrtHalf) * phi;
  return g;
}

// ---------------------------------------------------------------------------
// Integrator

Integrator::Integrator(IntegratorOptions options) : options_(std::move(options)) {
  validate(options_.mu);
  if (options_.terms < 0 || options_.terms > kMaxRsTerms) throw std::invalid_argument("terms must be in [0, 5]");
  if (!(options_.height_budget > 0.0)) throw std::invalid_argument("height budget must be positive");
  cache_ = std::make_unique<PanelCache>(options_.terms, options_.height_budget);
  checkpoints_ = std::make_unique<CheckpointStore>(
      options_.checkpoint_path,
      checkpoint_header(options_.mu.coeff, options_.mu.omega1, options_.mu.omega2, options_.terms));
}

Integrator::~Integrator() = default;

IntegralResult Integrator::integrate_z2(Interval iv, double tol) const {
  if (!(iv.a >= 0.0) || !(iv.b >= iv.a) || !std::isfinite(iv.b)) {
    throw std::domain_error("integrate_z2: need 0 <= a <= b");
  }
  if (!(tol > 0.0)) throw std::domain_error("integrate_z2: tol must be positive");
  IntegralResult res;
  if (iv.b == iv.a) return res;
  if (iv.b > options_.height_budget) {
    throw BudgetError("integrate_z2: upper limit " + std::to_string(iv.b) + " exceeds the height budget");
  }

  // Clip the global grid to [a, b].
  std::vector<Piece> pieces;
  double t = iv.a;
  while (t < iv.b) {
    const BlockLayout l = block_layout(block_of(t));
    const int p = panel_index(l, t);
    const double end = std::min(l.panel_end(p), iv.b);
    pieces.push_back({t, end, {}});
    t = end;
  }
  evaluate_pieces(pieces, options_.terms);
  res.evals = static_cast<std::int64_t>(pieces.size()) * kNodesPerPanel;

  const double length = iv.b - iv.a;
  for (int round = 0;; ++round) {
    KahanSum value, err;
    for (const auto& pc : pieces) {
      value += pc.r.value;
      err += pc.r.err;
    }
    res.value = value.value();
    res.err_est = err.value();
    const double target = tol * std::max(1.0, std::abs(res.value));
    if (res.err_est <= target || round == kMaxRefineRounds) break;

    // Bisect every piece whose error exceeds its share of the target.
    std::vector<Piece> next;
    std::vector<Piece> fresh;
    std::vector<std::size_t> slots;
    for (const auto& pc : pieces) {
      const double len = pc.b - pc.a;
      if (pc.r.err > target * len / length && len > 1e-9 * std::max(1.0, pc.b)) {
        const double mid = 0.5 * (pc.a + pc.b);
        slots.push_back(next.size());
        next.push_back({pc.a, mid, {}});
        next.push_back({mid, pc.b, {}});
        fresh.push_back(next[next.size() - 2]);
        fresh.push_back(next.back());
      } else {
        next.push_back(pc);
      }
    }
    if (fresh.empty()) break;
    evaluate_pieces(fresh, options_.terms);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      next[slots[i]] = fresh[2 * i];
      next[slots[i] + 1] = fresh[2 * i + 1];
    }
    res.evals += static_cast<std::int64_t>(fresh.size()) * kNodesPerPanel;
    pieces = std::move(next);
  }
  res.tolerance_met = res.err_est <= tol * std::max(1.0, std::abs(res.value));
  return res;
}

void Integrator::extend_checkpoints(std::int64_t blocks) {
  static std::mutex extend_mutex;
  std::lock_guard guard(extend_mutex);
  std::int64_t have = checkpoints_->size();
  if (have >= blocks) return;

  Checkpoint last = checkpoints_->at_block(have);
  auto append_from = [&](const Block& b) {
    Checkpoint row;
    row.t = b.layout.start + kBlockLength;
    row.I = last.I + b.integral;
    row.err_accum = last.err_accum + b.err;
    last = row;
    return row;
  };

  const auto cached = static_cast<std::int64_t>(std::llround(cache_->covered() / kBlockLength));
  if (cached >= have) {
    // The cache is contiguous with the table: grow it (Phi needs it anyway).
    cache_->ensure(kBlockLength * static_cast<double>(blocks));
    std::vector<Checkpoint> rows;
    for (std::int64_t k = have; k < blocks; ++k) rows.push_back(append_from(*cache_->block(k)));
    checkpoints_->append(rows);
    return;
  }
  // Resumed from a file that is ahead of the cache: evaluate the missing
  // blocks on their own, a chunk at a time.
  constexpr std::int64_t kChunk = 64;
  while (have < blocks) {
    const std::int64_t n = std::min(kChunk, blocks - have);
    std::vector<Block> chunk(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) chunk[i].layout = block_layout(have + i);
    evaluate_blocks_parallel(chunk, options_.terms);
    std::vector<Checkpoint> rows;
    for (const auto& b : chunk) rows.push_back(append_from(b));
    checkpoints_->append(rows);
    have += n;
  }
}

IntegralResult Integrator::hl_integral(double T, double tol) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::domain_error("hl_integral: T must be >= 0");
  if (!(tol > 0.0)) throw std::domain_error("hl_integral: tol must be positive");
  IntegralResult res;
  if (T == 0.0) return res;
  if (T > options_.height_budget) {
    throw BudgetError("hl_integral: T = " + std::to_string(T) + " exceeds the height budget");
  }
  const std::int64_t k = block_of(T);
  extend_checkpoints(k);
  const Checkpoint base = checkpoints_->at_block(k);
  const double start = kBlockLength * static_cast<double>(k);
  IntegralResult partial = integrate_z2({start, T}, tol);
  res.value = base.I + partial.value;
  res.err_est = base.err_accum + partial.err_est;
  res.evals = partial.evals;
  res.tolerance_met = res.err_est <= tol * std::max(1.0, res.value);
  return res;
}

WeightedSums Integrator::weighted_range(double lo, double hi, double y) {
  if (!(hi > lo)) return {};
  cache_->ensure(hi);

  auto partial_block = [&](const Block& b, double a, double c) {
    const BlockLayout& l = b.layout;
    const int pa = panel_index(l, a);
    const int pc = panel_index_upper(l, c);
    std::vector<WeightedSums> parts;
    if (pa == pc) {
      if (a == l.panel_start(pa) && c == l.panel_end(pa)) {
        parts.push_back(block_weighted_sums(b, pa, pa + 1, y));
      } else {
        parts.push_back(fresh_weighted_sums(a, c, y, options_.terms));
      }
      return merge(parts);
    }
    int first = pa;
    if (a > l.panel_start(pa)) {
      parts.push_back(fresh_weighted_sums(a, l.panel_end(pa), y, options_.terms));
      first = pa + 1;
    }
    const bool tail = c < l.panel_end(pc);
    const int last = tail ? pc : pc + 1;
    if (last > first) parts.push_back(block_weighted_sums(b, first, last, y));
    if (tail) parts.push_back(fresh_weighted_sums(l.panel_start(pc), c, y, options_.terms));
    return merge(parts);
  };

  const std::int64_t k_lo = block_of(lo);
  const auto k_hi = static_cast<std::int64_t>(std::ceil(hi / kBlockLength)) - 1;  // block holding hi
  std::vector<WeightedSums> parts;
  std::int64_t inner_begin = k_lo;
  std::int64_t inner_end = k_hi + 1;
  const Block& first = *cache_->block(k_lo);
  if (lo > first.layout.start || (k_lo == k_hi && hi < first.layout.start + kBlockLength)) {
    parts.push_back(partial_block(first, lo, std::min(hi, first.layout.start + kBlockLength)));
    inner_begin = k_lo + 1;
  }
  bool last_partial = false;
  if (k_hi >= inner_begin) {
    const Block& lastb = *cache_->block(k_hi);
    if (hi < lastb.layout.start + kBlockLength) {
      last_partial = true;
      inner_end = k_hi;
    }
  }
  if (inner_end > inner_begin) {
    const auto blocks = cache_->snapshot(inner_end);
    std::span<const Block* const> inner(blocks.data() + inner_begin, static_cast<std::size_t>(inner_end - inner_begin));
    parts.push_back(weighted_sums_parallel(inner, y));
  }
  if (last_partial) {
    const Block& lastb = *cache_->block(k_hi);
    parts.push_back(partial_block(lastb, lastb.layout.start, hi));
  }
  return merge(parts);
}

double Integrator::q_term(double y, const MuParams& mu) const {
  check_y(y, "q_term");
  const double m = mu.value(y);
  const double w = std::exp(-2.0 * m / y);
  if (w == 0.0) return 0.0;
  constexpr double h = 1e-4;
  if (!(m - h >= kZMinHeight)) throw std::domain_error("q_term: mu(y) is below the Z evaluation range");
  const double z = z_eval(m, options_.terms).z;
  const double zp = (z_eval(m + h, options_.terms).z - z_eval(m - h, options_.terms).z) / (2.0 * h);
  const double mp = mu.prime(y);
  const double mpp = mu.second(y);
  const double z2 = z * z;
  return w * ((2.0 / (y * y)) * z2 * m * mp + (2.0 / (y * y)) * z2 * m * mp - (2.0 / y) * z2 * mp * mp +
              2.0 * z * zp * mp * mp + z2 * mpp);
}

PhiEval Integrator::phi_eval(double y, const MuParams& mu, double tol) {
  check_y(y, "phi");
  validate(mu);
  if (!(tol > 0.0)) throw std::domain_error("phi: tol must be positive");
  PhiEval out;
  out.y = y;
  const double m = mu.value(y);
  double upper = std::min(m, kWeightCutoff * y);
  out.upper = upper;

  WeightedSums s;
  if (options_.asymptotic_tail && upper > options_.tail_cut) {
    s = weighted_range(0.0, options_.tail_cut, y);
    // Mean value of Z^2 near t is ln(t / 2pi) + 2c.
    const double shift = 2.0 * kEulerGamma - std::log(kTwoPi);
    using boost::math::quadrature::gauss_kronrod;
    auto mean = [&](double t) { return (std::log(t) + shift) * std::exp(-2.0 * t / y); };
    WeightedSums tail;
    double e = 0.0;
    tail.s0 = gauss_kronrod<double, 31>::integrate(mean, options_.tail_cut, upper, 10, 1e-12, &e);
    tail.err0 = e;
    tail.s1 = gauss_kronrod<double, 31>::integrate([&](double t) { return t * mean(t); }, options_.tail_cut, upper,
                                                   10, 1e-12, &e);
    tail.err1 = e;
    tail.s2 = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return t * (t / y - 1.0) * mean(t); }, options_.tail_cut, upper, 10, 1e-12, &e);
    tail.err2 = e;
    accumulate(s, tail);
  } else {
    s = weighted_range(0.0, upper, y);
  }

  const double w = std::exp(-2.0 * m / y);
  out.boundary = w == 0.0 ? 0.0 : z_eval(m, options_.terms).z2 * w * mu.prime(y);
  out.q = q_term(y, mu);
  out.phi = s.s0;
  out.phi_err = s.err0;
  out.phi_prime = (2.0 / (y * y)) * s.s1 + out.boundary;
  out.phi_prime_err = (2.0 / (y * y)) * s.err1;
  out.integral_part = (4.0 / (y * y * y)) * s.s2;
  out.phi_second = out.integral_part + out.q;
  out.phi_second_err = (4.0 / (y * y * y)) * s.err2;
  out.evals = s.evals;
  return out;
}

IntegralResult Integrator::phi_transform(double y, const MuParams& mu, double tol) {
  const PhiEval e = phi_eval(y, mu, tol);
  IntegralResult r;
  r.value = e.phi;
  r.err_est = e.phi_err;
  r.evals = e.evals;
  r.tolerance_met = e.phi_err <= tol * std::max(1.0, e.phi);
  return r;
}

double Integrator::phi_prime(double y, const MuParams& mu, double tol) { return phi_eval(y, mu, tol).phi_prime; }

double Integrator::phi_second(double y, const MuParams& mu, double tol) { return phi_eval(y, mu, tol).phi_second; }

IntegralResult Integrator::phi_second_part(double y, double a, double b) {
  check_y(y, "phi_second_part");
  IntegralResult r;
  const double hi = std::min(b, kWeightCutoff * y);
  if (!(hi > a)) return r;
  const WeightedSums s = weighted_range(std::max(0.0, a), hi, y);
  const double scale = 4.0 / (y * y * y);
  r.value = scale * s.s2;
  r.err_est = scale * s.err2;
  r.evals = s.evals;
  return r;
}

}  // namespace hlz
