// Vector arithmetic kernels used by the attack inner loops.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. Elementwise kernels are bit-identical across
// backends (one rounding per element, FMA contraction disabled at build
// time). Reductions accumulate in a different order per backend and may
// differ in the last ulps; the backend is fixed per process, so traces stay
// reproducible for a fixed seed.
#pragma once

#include <cstddef>

namespace evolba::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
void set_backend(Backend b);  // throws std::runtime_error if unsupported
const char* backend_name(Backend b);

// --- reductions ---------------------------------------------------------

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i (a[i]-b[i])^2
double sum_sq_diff(const double* a, const double* b, std::size_t n);

// --- elementwise --------------------------------------------------------

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y[i] = a*x[i] + b*y[i]
void axpby(double a, const double* x, double b, double* y, std::size_t n);
// v[i] *= s
void scale(double s, double* v, std::size_t n);
// out[i] = (1-t)*a[i] + t*b[i]
void lerp(const double* a, const double* b, double t, double* out, std::size_t n);
// out[i] = min(1, max(0, in[i]))
void clamp01(const double* in, double* out, std::size_t n);
// out[i] = (double)(float)in[i]  -- float32 oracle-handoff quantization
void roundtrip_f32(const double* in, double* out, std::size_t n);
// out[i] = mean[i] + sigma * sqrt(diag_c[i]) * z[i]
void sample_step(const double* mean, const double* diag_c, double sigma,
                 const double* z, double* out, std::size_t n);
// out[i] = sqrt(diag_c[i]) * z[i]
void mul_sqrt(const double* diag_c, const double* z, double* out, std::size_t n);
// acc[i] += w * z[i]^2
void accum_w_sq(double w, const double* z, double* acc, std::size_t n);
// diag_c[i] = max(floor_v, keep*diag_c[i] + c1*path[i]^2 + cmu*(diag_c[i]*wsq[i]))
void cov_diag_update(double keep, double c1, const double* path, double cmu,
                     const double* wsq, double floor_v, double* diag_c,
                     std::size_t n);

}  // namespace evolba::kernels
