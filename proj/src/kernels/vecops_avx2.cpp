#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "objnav/kernels/vecops.hpp"

// Compiled with target attributes so the rest of the project keeps the
// default ISA; these symbols are only reached after the runtime CPU check.

namespace objnav::vecops::detail {

__attribute__((target("avx2,fma"))) static double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double a, const double* x, double* y,
                                                   std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void scale_avx2(double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) x[i] *= s;
}

__attribute__((target("avx2,fma"))) void blend_avx2(const double* obs, const double* prior,
                                                    double k, double* out, std::size_t n) {
  const __m256d vk = _mm256_set1_pd(k);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vo = _mm256_loadu_pd(obs + i);
    __m256d vp = _mm256_loadu_pd(prior + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vk, _mm256_sub_pd(vp, vo), vo));
  }
  for (; i < n; ++i) out[i] = obs[i] + k * (prior[i] - obs[i]);
}

}  // namespace objnav::vecops::detail

#endif
