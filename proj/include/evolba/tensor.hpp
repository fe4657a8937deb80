// Image-as-vector core shared by all modules: storage, norms, interpolation
// and clamping. The optimizer works on unclamped FlatVectors; clamping to the
// valid pixel range happens only when a point is handed to an oracle.
#pragma once

#include <cstddef>
#include <vector>

namespace evolba {

// Unclamped working vector of length N = 3*w*h.
using FlatVector = std::vector<double>;

// w x h RGB image, row-major and channel-interleaved, every value in [0, 1].
struct ImageTensor {
  static constexpr int kChannels = 3;

  int width = 0;
  int height = 0;
  FlatVector data;

  ImageTensor() = default;
  ImageTensor(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(3) * w * h, 0.0) {}

  std::size_t size() const { return data.size(); }

  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  bool same_shape(const ImageTensor& o) const {
    return width == o.width && height == o.height;
  }
};

double l2_distance(const ImageTensor& a, const ImageTensor& b);
double l2_distance(const FlatVector& a, const FlatVector& b);
double l2_norm(const FlatVector& v);

// (1-alpha)*x + alpha*x_prime, clamped to [0,1]. alpha must be in [0,1].
ImageTensor blend(const ImageTensor& x, const ImageTensor& x_prime, double alpha);

// Projects a working vector into image space: per-element min(1, max(0, v)).
ImageTensor clamp01(const FlatVector& v, int width, int height);

// Oracle-handoff quantization: each value rounded through float32.
ImageTensor quantize_f32(const ImageTensor& img);

}  // namespace evolba
