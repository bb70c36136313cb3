#include "hlz/zeta.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "hlz/errors.hpp"

namespace hlz {

namespace detail {
double rs_sum_kernel(const double* rsqrt_n, const double* log_n, int n_max, double th, double t);
}  // namespace detail

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647693;

// ---------------------------------------------------------------------------
// Riemann-Siegel correction coefficients.
//
// With Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) the coefficients are
//   C0 = Psi
//   C1 = -Psi'''/(96 pi^2)
//   C2 = Psi^(6)/(18432 pi^4) + Psi''/(64 pi^2)
//   C3 = -Psi^(9)/(5308416 pi^6) - Psi^(5)/(3840 pi^4) - Psi'/(64 pi^2)
//   C4 = Psi^(12)/(2038431744 pi^8) + 11 Psi^(8)/(5898240 pi^6)
//        + 19 Psi^(4)/(24576 pi^4) + Psi/(128 pi^2)
// Psi is entire (every pole of 1/cos(2 pi p) is cancelled by the numerator),
// so its Taylor series about p = 1/2 converges everywhere. The Taylor
// coefficients are taken from a Cauchy integral on |u| = 1, then each C_k is
// stored as a polynomial in u = p - 1/2.
// ---------------------------------------------------------------------------

constexpr int kPsiDegree = 48;
constexpr double kC5Envelope = 2e-4;
constexpr int kCauchyPoints = 192;

constexpr int kRsPolys = 5;

struct RsTables {
  std::array<std::array<double, kPsiDegree>, kRsPolys> poly{};
  // max over p in [0,1] of |C_k(p)|; the last entry bounds the remainder
  // after C4 (fitted, see below).
  std::array<double, kRsPolys + 1> max_abs{};
};

using cld = std::complex<long double>;

cld psi_of_u(cld u) {
  const long double two_pi = 6.283185307179586476925286766559L;
  return -std::cos(two_pi * (u * u - 5.0L / 16.0L)) / std::cos(two_pi * u);
}

std::array<long double, kPsiDegree> psi_taylor() {
  std::array<long double, kPsiDegree> a{};
  const long double two_pi = 6.283185307179586476925286766559L;
  std::array<cld, kCauchyPoints> samples;
  for (int m = 0; m < kCauchyPoints; ++m) {
    const long double ang = two_pi * m / kCauchyPoints;
    samples[m] = psi_of_u(cld(std::cos(ang), std::sin(ang)));
  }
  for (int k = 0; k < kPsiDegree; ++k) {
    cld acc = 0;
    for (int m = 0; m < kCauchyPoints; ++m) {
      const long double ang = -two_pi * k * m / kCauchyPoints;
      acc += samples[m] * cld(std::cos(ang), std::sin(ang));
    }
    // Psi is real on the real axis, so the coefficients are real.
    a[k] = acc.real() / kCauchyPoints;
  }
  return a;
}

// n-th derivative of the series `a`, as coefficients in u.
std::array<long double, kPsiDegree> derivative(const std::array<long double, kPsiDegree>& a, int n) {
  std::array<long double, kPsiDegree> d{};
  for (int j = 0; j + n < kPsiDegree; ++j) {
    long double f = 1.0L;
    for (int i = 1; i <= n; ++i) f *= static_cast<long double>(j + i);
    d[j] = a[j + n] * f;
  }
  return d;
}

double horner(const std::array<double, kPsiDegree>& c, double u) {
  double acc = 0.0;
  for (int k = kPsiDegree - 1; k >= 0; --k) acc = std::fma(acc, u, c[k]);
  return acc;
}

RsTables build_rs_tables() {
  const auto a = psi_taylor();
  const long double pi2 = 9.869604401089358618834490999876L;
  const long double pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;

  std::array<std::array<long double, kPsiDegree>, kRsPolys> c{};
  auto axpy = [](std::array<long double, kPsiDegree>& y, long double s,
                 const std::array<long double, kPsiDegree>& x) {
    for (int k = 0; k < kPsiDegree; ++k) y[k] += s * x[k];
  };
  axpy(c[0], 1.0L, a);
  axpy(c[1], -1.0L / (96.0L * pi2), derivative(a, 3));
  axpy(c[2], 1.0L / (18432.0L * pi4), derivative(a, 6));
  axpy(c[2], 1.0L / (64.0L * pi2), derivative(a, 2));
  axpy(c[3], -1.0L / (5308416.0L * pi6), derivative(a, 9));
  axpy(c[3], -1.0L / (3840.0L * pi4), derivative(a, 5));
  axpy(c[3], -1.0L / (64.0L * pi2), derivative(a, 1));
  axpy(c[4], 1.0L / (2038431744.0L * pi8), derivative(a, 12));
  axpy(c[4], 11.0L / (5898240.0L * pi6), derivative(a, 8));
  axpy(c[4], 19.0L / (24576.0L * pi4), derivative(a, 4));
  axpy(c[4], 1.0L / (128.0L * pi2), a);

  RsTables tables;
  for (int k = 0; k < kRsPolys; ++k) {
    for (int j = 0; j < kPsiDegree; ++j) tables.poly[k][j] = static_cast<double>(c[k][j]);
    double m = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      m = std::max(m, std::abs(horner(tables.poly[k], i / 1000.0 - 0.5)));
    }
    tables.max_abs[k] = m;
  }
  // C5 is not tabulated. Its role in the error bound is played by a constant
  // fitted against an extended-precision zeta over t in [10, 2e5].
  tables.max_abs[kRsPolys] = kC5Envelope;
  return tables;
}

const RsTables& rs_tables() {
  static const RsTables tables = build_rs_tables();
  return tables;
}

// ln n and n^{-1/2} for the main sum.
struct SumTables {
  static constexpr int kSize = 4096;
  std::array<double, kSize> log_n{};
  std::array<double, kSize> rsqrt_n{};
  SumTables() {
    for (int n = 1; n < kSize; ++n) {
      log_n[n] = std::log(static_cast<double>(n));
      rsqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }
  }
};

const SumTables& sum_tables() {
  static const SumTables tables;
  return tables;
}

// B_{2k} / (2k)! for k = 1..15.
const std::array<double, 15>& bernoulli_ratios() {
  static const std::array<double, 15> ratios = [] {
    constexpr std::array<long double, 15> num = {
        1.0L, -1.0L, 1.0L, -1.0L, 5.0L, -691.0L, 7.0L, -3617.0L, 43867.0L, -174611.0L,
        854513.0L, -236364091.0L, 8553103.0L, -23749461029.0L, 8615841276005.0L};
    constexpr std::array<long double, 15> den = {6.0L,   30.0L,   42.0L, 30.0L, 66.0L,
                                                 2730.0L, 6.0L,    510.0L, 798.0L, 330.0L,
                                                 138.0L,  2730.0L, 6.0L,   870.0L, 14322.0L};
    std::array<double, 15> r{};
    long double fact = 1.0L;
    for (int k = 1; k <= 15; ++k) {
      fact *= static_cast<long double>((2 * k - 1) * (2 * k));
      r[k - 1] = static_cast<double>(num[k - 1] / den[k - 1] / fact);
    }
    return r;
  }();
  return ratios;
}

double rs_main_sum(double t, double th, int n_max) {
  const auto& tab = sum_tables();
  const int n_tab = std::min(n_max, SumTables::kSize - 1);
  double sum = detail::rs_sum_kernel(tab.rsqrt_n.data(), tab.log_n.data(), n_tab, th, t);
  for (int n = n_tab + 1; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    sum += std::cos(th - t * std::log(dn)) / std::sqrt(dn);
  }
  return 2.0 * sum;
}

ZSample riemann_siegel_impl(double t, int terms) {
  const auto& rs = rs_tables();
  const double tau = std::sqrt(t / kTwoPi);
  const int n_max = static_cast<int>(std::floor(tau));
  const double p = tau - n_max;
  const double th = theta(t);

  double corr = 0.0;
  double scale = 1.0;
  for (int k = 0; k < terms; ++k) {
    corr += rs_coefficient(k, p) * scale;
    scale /= tau;
  }
  const double sign = (n_max % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N-1)
  const double lead = 1.0 / std::sqrt(tau);

  ZSample s;
  s.t = t;
  s.z = rs_main_sum(t, th, n_max) + sign * lead * corr;
  s.z2 = s.z * s.z;
  // Truncation: sum of max|C_j| tau^-j over the omitted j (C5 by its fitted
  // envelope), so the bound shrinks as `terms` grows. Rounding: a few ulps of
  // theta on each of the ~sqrt(N) effectively independent terms.
  double err = 0.0;
  for (int k = terms; k <= kRsPolys; ++k) err += rs.max_abs[k] * lead * std::pow(tau, -k);
  const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(th)) *
                          (1.0 + std::sqrt(static_cast<double>(n_max)));
  s.err = err + rounding;
  return s;
}

ZSample direct_z(double t) {
  const std::complex<double> zeta = zeta_em({0.5, t});
  const double th = theta(t);
  ZSample s;
  s.t = t;
  s.z = std::cos(th) * zeta.real() - std::sin(th) * zeta.imag();
  s.z2 = s.z * s.z;
  s.err = 1e-11;
  return s;
}

// ---------------------------------------------------------------------------
// Prime table: bitset over odd numbers with prefix counts per 64-bit word.
// ---------------------------------------------------------------------------
class PrimeTable {
 public:
  std::int64_t count(std::int64_t x, double budget) {
    if (x < 2) return 0;
    {
      std::shared_lock lock(mutex_);
      if (x <= limit_) return count_locked(x);
    }
    if (static_cast<double>(x) > budget) {
      throw BudgetError("prime_pi: x = " + std::to_string(x) + " exceeds sieve budget " +
                        std::to_string(budget));
    }
    std::unique_lock lock(mutex_);
    if (x > limit_) {
      const auto target = std::max<std::int64_t>(x, std::min<std::int64_t>(2 * limit_, static_cast<std::int64_t>(budget)));
      build(std::max<std::int64_t>(target, 1024));
    }
    return count_locked(x);
  }

 private:
  // Index i represents the odd number 2i+1.
  std::int64_t count_locked(std::int64_t x) const {
    const std::int64_t last = (x - 1) / 2;  // largest index with 2i+1 <= x
    const std::int64_t word = last / 64;
    const int bit = static_cast<int>(last % 64);
    const std::uint64_t mask = (bit == 63) ? ~0ULL : ((1ULL << (bit + 1)) - 1);
    return 1 + prefix_[word] + std::popcount(bits_[word] & mask);  // +1 for 2
  }

  void build(std::int64_t limit) {
    const std::int64_t n_odd = limit / 2 + 1;
    const std::int64_t n_words = n_odd / 64 + 1;
    bits_.assign(static_cast<std::size_t>(n_words), ~0ULL);
    bits_[0] &= ~1ULL;  // 1 is not prime
    for (std::int64_t i = 1;; ++i) {
      const std::int64_t p = 2 * i + 1;
      if (p * p > limit) break;
      if (!((bits_[i / 64] >> (i % 64)) & 1ULL)) continue;
      for (std::int64_t j = (p * p - 1) / 2; j < n_words * 64; j += p) bits_[j / 64] &= ~(1ULL << (j % 64));
    }
    prefix_.assign(static_cast<std::size_t>(n_words), 0);
    for (std::int64_t w = 1; w < n_words; ++w) prefix_[w] = prefix_[w - 1] + std::popcount(bits_[w - 1]);
    limit_ = limit;
  }

  std::shared_mutex mutex_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::int64_t> prefix_;
  std::int64_t limit_ = 0;
};

PrimeTable& prime_table() {
  static PrimeTable table;
  return table;
}

}  // namespace

double theta(double t) {
  if (!(t >= kThetaMinHeight) || !std::isfinite(t)) {
    throw std::domain_error("theta: t must be >= 2, got " + std::to_string(t));
  }
  const double r = 1.0 / t;
  const double r2 = r * r;
  const double tail =
      r * (1.0 / 48.0 +
           r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 + tail;
}

double rs_coefficient(int k, double p) {
  if (k < 0 || k >= kRsPolys) throw std::domain_error("rs_coefficient: k out of range");
  return horner(rs_tables().poly[k], p - 0.5);
}

std::complex<double> zeta_em(std::complex<double> s) {
  const double height = std::abs(s.imag());
  const int n = 20 + static_cast<int>(std::ceil(0.5 * height));
  const auto& tab = sum_tables();

  std::complex<double> sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const double ln_k = k < SumTables::kSize ? tab.log_n[k] : std::log(static_cast<double>(k));
    sum += std::exp(-s * ln_k);
  }
  const double ln_n = std::log(static_cast<double>(n));
  const std::complex<double> n_pow = std::exp(-s * ln_n);  // N^{-s}
  sum += n_pow * static_cast<double>(n) / (s - 1.0) + 0.5 * n_pow;

  // Bernoulli tail: sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  const auto& b = bernoulli_ratios();
  const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
  std::complex<double> rising = s * n_pow / static_cast<double>(n);  // s * N^{-s-1}
  for (std::size_t k = 0; k < b.size(); ++k) {
    const std::complex<double> term = b[k] * rising;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    const double j = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + j) * (s + j + 1.0) * inv_n2;
  }
  return sum;
}

ZSample z_eval(double t, int terms) {
  if (!(t >= kZMinHeight) || !std::isfinite(t)) {
    throw std::domain_error("z_eval: t must be >= 10, got " + std::to_string(t));
  }
  if (terms < 0 || terms > kMaxRsTerms) {
    throw std::domain_error("z_eval: terms must be in [0, 5], got " + std::to_string(terms));
  }
  if (t < kDirectBelow) return direct_z(t);
  return riemann_siegel_impl(t, terms);
}

ZSample z_riemann_siegel(double t, int terms) {
  if (!(t >= kZMinHeight) || !std::isfinite(t)) {
    throw std::domain_error("z_riemann_siegel: t must be >= 10, got " + std::to_string(t));
  }
  if (terms < 0 || terms > kMaxRsTerms) {
    throw std::domain_error("z_riemann_siegel: terms must be in [0, 5]");
  }
  return riemann_siegel_impl(t, terms);
}

double z_squared(double t, int terms) {
  if (t < kZMinHeight) return std::norm(zeta_em({0.5, t}));
  return z_eval(t, terms).z2;
}

double mean_zero_spacing(double t) {
  const double l = std::log(t / kTwoPi);
  return l > 1.0 ? kTwoPi / l : kTwoPi;
}

std::vector<Zero> zeros_in(double a, double b, int terms) {
  if (!(a >= kZMinHeight) || !(b > a)) {
    throw std::domain_error("zeros_in: need 10 <= a < b");
  }
  std::vector<Zero> out;
  auto z_at = [terms](double t) { return z_eval(t, terms).z; };

  double lo = a;
  double z_lo = z_at(lo);
  while (lo < b) {
    const double step = std::min(0.5, 0.4 * mean_zero_spacing(lo));
    const double hi = std::min(b, lo + step);
    const double z_hi = z_at(hi);
    if (z_lo == 0.0) {
      out.push_back({lo, 0.0});
    } else if (z_lo * z_hi < 0.0) {
      double l = lo, h = hi, zl = z_lo;
      while (h - l > 1e-9) {
        const double m = 0.5 * (l + h);
        const double zm = z_at(m);
        if (zm == 0.0) {
          l = h = m;
          break;
        }
        if ((zm < 0.0) == (zl < 0.0)) {
          l = m;
          zl = zm;
        } else {
          h = m;
        }
      }
      out.push_back({0.5 * (l + h), 0.5 * (h - l)});
    }
    lo = hi;
    z_lo = z_hi;
  }
  if (z_lo == 0.0 && (out.empty() || out.back().gamma != lo)) out.push_back({lo, 0.0});
  return out;
}

Zero nearest_zero(double t, int terms) {
  double w = mean_zero_spacing(std::max(t, kZMinHeight));
  for (int attempt = 0; attempt < 8; ++attempt, w *= 2.0) {
    const double a = std::max(kZMinHeight, t - w);
    const auto zeros = zeros_in(a, t + w, terms);
    if (zeros.empty()) continue;
    return *std::min_element(zeros.begin(), zeros.end(), [t](const Zero& x, const Zero& y) {
      return std::abs(x.gamma - t) < std::abs(y.gamma - t);
    });
  }
  throw NumericError("nearest_zero: no sign change of Z found near t = " + std::to_string(t));
}

bool near_zero(double t, double radius, int terms) {
  constexpr int kSamples = 8;
  double prev = z_eval(std::max(kZMinHeight, t - radius), terms).z;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = std::max(kZMinHeight, t - radius + 2.0 * radius * i / kSamples);
    const double z = z_eval(x, terms).z;
    if (z == 0.0 || (z < 0.0) != (prev < 0.0)) return true;
    prev = z;
  }
  return false;
}

std::int64_t prime_pi(double x, double budget) {
  if (!(x >= 0.0)) throw std::domain_error("prime_pi: x must be >= 0");
  return prime_table().count(static_cast<std::int64_t>(std::floor(x)), budget);
}

}  // namespace hlz
