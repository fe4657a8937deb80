#include "evolba/tensor.hpp"

#include <cmath>
#include <stdexcept>

#include "evolba/kernels.hpp"

namespace evolba {

double l2_distance(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("l2_distance: image dimensions differ");
  return std::sqrt(kernels::sum_sq_diff(a.data.data(), b.data.data(), a.size()));
}

double l2_distance(const FlatVector& a, const FlatVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("l2_distance: vector lengths differ");
  return std::sqrt(kernels::sum_sq_diff(a.data(), b.data(), a.size()));
}

double l2_norm(const FlatVector& v) {
  return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

ImageTensor blend(const ImageTensor& x, const ImageTensor& x_prime, double alpha) {
  if (!x.same_shape(x_prime))
    throw std::invalid_argument("blend: image dimensions differ");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("blend: alpha outside [0,1]");
  ImageTensor out(x.width, x.height);
  kernels::lerp(x.data.data(), x_prime.data.data(), alpha, out.data.data(), x.size());
  kernels::clamp01(out.data.data(), out.data.data(), out.size());
  return out;
}

ImageTensor clamp01(const FlatVector& v, int width, int height) {
  if (v.size() != static_cast<std::size_t>(3) * width * height)
    throw std::invalid_argument("clamp01: vector length does not match 3*w*h");
  ImageTensor out(width, height);
  kernels::clamp01(v.data(), out.data.data(), v.size());
  return out;
}

ImageTensor quantize_f32(const ImageTensor& img) {
  ImageTensor out(img.width, img.height);
  kernels::roundtrip_f32(img.data.data(), out.data.data(), img.size());
  return out;
}

}  // namespace evolba
