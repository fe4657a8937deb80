// Dispatch table shared between the scalar and AVX2 kernel TUs.
#pragma once

#include <cstddef>

namespace evolba::kernels {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq_diff)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*axpby)(double, const double*, double, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*lerp)(const double*, const double*, double, double*, std::size_t);
  void (*clamp01)(const double*, double*, std::size_t);
  void (*roundtrip_f32)(const double*, double*, std::size_t);
  void (*sample_step)(const double*, const double*, double, const double*, double*, std::size_t);
  void (*mul_sqrt)(const double*, const double*, double*, std::size_t);
  void (*accum_w_sq)(double, const double*, double*, std::size_t);
  void (*cov_diag_update)(double, double, const double*, double, const double*, double, double*, std::size_t);
};

#if defined(EVOLBA_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
bool avx2_supported_at_runtime();
#endif

}  // namespace evolba::kernels
