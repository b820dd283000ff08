#include "kernels_impl.hpp"

#ifdef RIESZ_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <algorithm>
#include <limits>

// No "fma" in the target list: mul/sub pairs must not be fused, or the
// indicator ramp would round differently from the scalar path.
#define RIESZ_AVX2 __attribute__((target("avx2")))

namespace riesz::kernels::avx2 {
namespace {

RIESZ_AVX2 inline __m256d distance4(__m256d x, std::span<const ClosedInterval> parts) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  for (const auto& p : parts) {
    const __m256d below = _mm256_sub_pd(_mm256_set1_pd(p.lo), x);
    const __m256d above = _mm256_sub_pd(x, _mm256_set1_pd(p.hi));
    const __m256d d = _mm256_max_pd(_mm256_max_pd(below, above), zero);
    best = _mm256_min_pd(best, d);
  }
  return best;
}

inline double distance_one(double x, std::span<const ClosedInterval> parts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) best = std::min(best, std::max(std::max(p.lo - x, x - p.hi), 0.0));
  return best;
}

RIESZ_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

RIESZ_AVX2 double abel_sum(std::span<const double> f, std::span<const double> alpha) {
  const std::size_t n = f.size() - 1;
  std::size_t j = 1;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (; j + 8 <= n; j += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(f.data() + j + 1), _mm256_loadu_pd(f.data() + j));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(f.data() + j + 5), _mm256_loadu_pd(f.data() + j + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(alpha.data() + j), d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(alpha.data() + j + 4), d1));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) sum += alpha[j] * (f[j + 1] - f[j]);
  return sum;
}

RIESZ_AVX2 void distance_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                               std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, distance4(_mm256_loadu_pd(xs.data() + i), parts));
  }
  for (; i < xs.size(); ++i) out[i] = distance_one(xs[i], parts);
}

RIESZ_AVX2 void indicator_batch(std::span<const double> xs, std::span<const ClosedInterval> parts,
                                double k, std::span<double> out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d kv = _mm256_set1_pd(k);
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d d = distance4(_mm256_loadu_pd(xs.data() + i), parts);
    _mm256_storeu_pd(out.data() + i, _mm256_max_pd(zero, _mm256_sub_pd(one, _mm256_mul_pd(kv, d))));
  }
  for (; i < xs.size(); ++i) out[i] = std::max(0.0, 1.0 - k * distance_one(xs[i], parts));
}

RIESZ_AVX2 void urysohn_batch(std::span<const double> xs, std::span<const ClosedInterval> near,
                              std::span<const ClosedInterval> far, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d d_far = distance4(x, far);
    const __m256d d_near = distance4(x, near);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(d_far, _mm256_add_pd(d_far, d_near)));
  }
  for (; i < xs.size(); ++i) {
    const double d_far = distance_one(xs[i], far);
    const double d_near = distance_one(xs[i], near);
    out[i] = d_far / (d_far + d_near);
  }
}

}  // namespace riesz::kernels::avx2

#endif  // RIESZ_HAVE_AVX2_KERNELS
