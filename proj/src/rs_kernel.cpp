// Riemann-Siegel main sum. This translation unit is built with -ffast-math
// so the cosine loop vectorizes through libmvec; nothing else lives here.

#include <cmath>

namespace hlz::detail {

double rs_sum_kernel(const double* rsqrt_n, const double* log_n, int n_max, double th, double t) {
  double sum = 0.0;
#pragma omp simd reduction(+ : sum)
  for (int n = 1; n <= n_max; ++n) sum += rsqrt_n[n] * std::cos(th - t * log_n[n]);
  return sum;
}

}  // namespace hlz::detail
