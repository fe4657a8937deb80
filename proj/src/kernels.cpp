#include "evolba/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernels_table.hpp"

namespace evolba::kernels {

namespace scalar_impl {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale(double s, double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] * s;
}

void lerp(const double* a, const double* b, double t, double* out, std::size_t n) {
  const double u = 1.0 - t;
  for (std::size_t i = 0; i < n; ++i) out[i] = u * a[i] + t * b[i];
}

void clamp01(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::min(1.0, std::max(0.0, in[i]));
}

void roundtrip_f32(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<double>(static_cast<float>(in[i]));
}

void sample_step(const double* mean, const double* diag_c, double sigma,
                 const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = mean[i] + (sigma * std::sqrt(diag_c[i])) * z[i];
}

void mul_sqrt(const double* diag_c, const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(diag_c[i]) * z[i];
}

void accum_w_sq(double w, const double* z, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + w * (z[i] * z[i]);
}

void cov_diag_update(double keep, double c1, const double* path, double cmu,
                     const double* wsq, double floor_v, double* diag_c,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v =
        keep * diag_c[i] + c1 * (path[i] * path[i]) + cmu * (diag_c[i] * wsq[i]);
    diag_c[i] = std::max(floor_v, v);
  }
}

}  // namespace scalar_impl

namespace {

constexpr KernelTable kScalarTable = {
    scalar_impl::dot,          scalar_impl::sum_sq_diff,
    scalar_impl::axpy,         scalar_impl::axpby,
    scalar_impl::scale,        scalar_impl::lerp,
    scalar_impl::clamp01,      scalar_impl::roundtrip_f32,
    scalar_impl::sample_step,  scalar_impl::mul_sqrt,
    scalar_impl::accum_w_sq,   scalar_impl::cov_diag_update,
};

}  // namespace

namespace {

Backend detect_backend() {
#if defined(EVOLBA_HAVE_AVX2_KERNELS)
  if (avx2_supported_at_runtime()) return Backend::avx2;
#endif
  return Backend::scalar;
}

Backend g_backend = detect_backend();

const KernelTable& table() {
#if defined(EVOLBA_HAVE_AVX2_KERNELS)
  if (g_backend == Backend::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

}  // namespace

Backend active_backend() { return g_backend; }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(EVOLBA_HAVE_AVX2_KERNELS)
      return avx2_supported_at_runtime();
#else
      return false;
#endif
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error("kernel backend not available on this CPU");
  g_backend = b;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}
double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return table().sum_sq_diff(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}
void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  table().axpby(a, x, b, y, n);
}
void scale(double s, double* v, std::size_t n) { table().scale(s, v, n); }
void lerp(const double* a, const double* b, double t, double* out, std::size_t n) {
  table().lerp(a, b, t, out, n);
}
void clamp01(const double* in, double* out, std::size_t n) {
  table().clamp01(in, out, n);
}
void roundtrip_f32(const double* in, double* out, std::size_t n) {
  table().roundtrip_f32(in, out, n);
}
void sample_step(const double* mean, const double* diag_c, double sigma,
                 const double* z, double* out, std::size_t n) {
  table().sample_step(mean, diag_c, sigma, z, out, n);
}
void mul_sqrt(const double* diag_c, const double* z, double* out, std::size_t n) {
  table().mul_sqrt(diag_c, z, out, n);
}
void accum_w_sq(double w, const double* z, double* acc, std::size_t n) {
  table().accum_w_sq(w, z, acc, n);
}
void cov_diag_update(double keep, double c1, const double* path, double cmu,
                     const double* wsq, double floor_v, double* diag_c,
                     std::size_t n) {
  table().cov_diag_update(keep, c1, path, cmu, wsq, floor_v, diag_c, n);
}

}  // namespace evolba::kernels
