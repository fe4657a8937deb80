// AVX2 kernel variants. Elementwise kernels replicate the scalar reference
// expression op-for-op (mul/add order, min/max operand order) so results are
// bit-identical; reductions use 4-lane partial sums and differ from scalar
// only in accumulation order.
#include "evolba/kernels.hpp"

#include "kernels_table.hpp"

#if defined(EVOLBA_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace evolba::kernels {

bool avx2_supported_at_runtime() {
  return __builtin_cpu_supports("avx2") != 0;
}

namespace avx2_impl {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i),
                                    _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale(double s, double* v, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), vs));
  for (; i < n; ++i) v[i] = v[i] * s;
}

void lerp(const double* a, const double* b, double t, double* out, std::size_t n) {
  const double u = 1.0 - t;
  const __m256d vu = _mm256_set1_pd(u);
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(vu, _mm256_loadu_pd(a + i)),
                                    _mm256_mul_pd(vt, _mm256_loadu_pd(b + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = u * a[i] + t * b[i];
}

void clamp01(const double* in, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(in + i);
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(v, zero), one));
  }
  for (; i < n; ++i) out[i] = std::min(1.0, std::max(0.0, in[i]));
}

void roundtrip_f32(const double* in, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128 f = _mm256_cvtpd_ps(_mm256_loadu_pd(in + i));
    _mm256_storeu_pd(out + i, _mm256_cvtps_pd(f));
  }
  for (; i < n; ++i) out[i] = static_cast<double>(static_cast<float>(in[i]));
}

void sample_step(const double* mean, const double* diag_c, double sigma,
                 const double* z, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(sigma);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sd = _mm256_mul_pd(vs, _mm256_sqrt_pd(_mm256_loadu_pd(diag_c + i)));
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(mean + i),
                                    _mm256_mul_pd(sd, _mm256_loadu_pd(z + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i)
    out[i] = mean[i] + (sigma * std::sqrt(diag_c[i])) * z[i];
}

void mul_sqrt(const double* diag_c, const double* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_mul_pd(_mm256_sqrt_pd(_mm256_loadu_pd(diag_c + i)),
                                    _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = std::sqrt(diag_c[i]) * z[i];
}

void accum_w_sq(double w, const double* z, double* acc, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vz = _mm256_loadu_pd(z + i);
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                    _mm256_mul_pd(vw, _mm256_mul_pd(vz, vz)));
    _mm256_storeu_pd(acc + i, r);
  }
  for (; i < n; ++i) acc[i] = acc[i] + w * (z[i] * z[i]);
}

void cov_diag_update(double keep, double c1, const double* path, double cmu,
                     const double* wsq, double floor_v, double* diag_c,
                     std::size_t n) {
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d vcmu = _mm256_set1_pd(cmu);
  const __m256d vfloor = _mm256_set1_pd(floor_v);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(diag_c + i);
    const __m256d p = _mm256_loadu_pd(path + i);
    const __m256d w = _mm256_loadu_pd(wsq + i);
    __m256d v = _mm256_add_pd(_mm256_mul_pd(vkeep, c),
                              _mm256_mul_pd(vc1, _mm256_mul_pd(p, p)));
    v = _mm256_add_pd(v, _mm256_mul_pd(vcmu, _mm256_mul_pd(c, w)));
    _mm256_storeu_pd(diag_c + i, _mm256_max_pd(v, vfloor));
  }
  for (; i < n; ++i) {
    const double v =
        keep * diag_c[i] + c1 * (path[i] * path[i]) + cmu * (diag_c[i] * wsq[i]);
    diag_c[i] = std::max(floor_v, v);
  }
}

}  // namespace avx2_impl

const KernelTable kAvx2Table = {
    avx2_impl::dot,          avx2_impl::sum_sq_diff,
    avx2_impl::axpy,         avx2_impl::axpby,
    avx2_impl::scale,        avx2_impl::lerp,
    avx2_impl::clamp01,      avx2_impl::roundtrip_f32,
    avx2_impl::sample_step,  avx2_impl::mul_sqrt,
    avx2_impl::accum_w_sq,   avx2_impl::cov_diag_update,
};

}  // namespace evolba::kernels

#endif  // EVOLBA_HAVE_AVX2_KERNELS
