#include "evolba/fractal.hpp"

#include <cmath>
#include <stdexcept>

#include "evolba/image_io.hpp"
#include "evolba/rng.hpp"
#include "evolba/spectral.hpp"

namespace evolba {

std::vector<double> det_probabilities(const std::vector<AffineMap>& maps) {
  std::vector<double> p(maps.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    p[i] = std::abs(maps[i].det()) + 1e-6;
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

IfsSystem sample_system(std::uint64_t seed, int n_maps) {
  if (n_maps < 2 || n_maps > 8)
    throw std::invalid_argument("sample_system: n_maps must be in [2,8]");
  Rng rng(seed);
  IfsSystem sys;
  sys.maps.reserve(n_maps);
  for (int i = 0; i < n_maps; ++i) {
    AffineMap m;
    m.a = rng.uniform(-1.0, 1.0);
    m.b = rng.uniform(-1.0, 1.0);
    m.c = rng.uniform(-1.0, 1.0);
    m.d = rng.uniform(-1.0, 1.0);
    m.e = rng.uniform(-1.0, 1.0);
    m.f = rng.uniform(-1.0, 1.0);
    sys.maps.push_back(m);
  }
  sys.probabilities = det_probabilities(sys.maps);
  return sys;
}

std::optional<ImageTensor> render(const IfsSystem& system, int width, int height,
                                  int n_points, std::uint64_t seed) {
  if (system.maps.size() < 2)
    throw std::invalid_argument("render: system needs at least 2 maps");
  if (n_points < 10000)
    throw std::invalid_argument("render: n_points must be >= 10000");

  Rng rng(seed);
  const auto pick_map = [&]() -> const AffineMap& {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < system.maps.size(); ++i) {
      acc += system.probabilities[i];
      if (u < acc) return system.maps[i];
    }
    return system.maps.back();
  };

  double x = 0.0, y = 0.0;
  constexpr double kDivergence = 1e9;
  for (int i = 0; i < 100; ++i) {  // burn-in
    const AffineMap& m = pick_map();
    const double nx = m.a * x + m.b * y + m.e;
    const double ny = m.c * x + m.d * y + m.f;
    x = nx;
    y = ny;
    if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > kDivergence ||
        std::abs(y) > kDivergence)
      return std::nullopt;
  }

  std::vector<double> xs(n_points), ys(n_points);
  double min_x = x, max_x = x, min_y = y, max_y = y;
  for (int i = 0; i < n_points; ++i) {
    const AffineMap& m = pick_map();
    const double nx = m.a * x + m.b * y + m.e;
    const double ny = m.c * x + m.d * y + m.f;
    x = nx;
    y = ny;
    if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > kDivergence ||
        std::abs(y) > kDivergence)
      return std::nullopt;
    xs[i] = x;
    ys[i] = y;
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }

  const double ext_x = max_x - min_x;
  const double ext_y = max_y - min_y;
  ImageTensor img(width, height);
  std::size_t filled = 0;
  for (int i = 0; i < n_points; ++i) {
    const int px = ext_x > 0.0
                       ? std::min(width - 1, static_cast<int>((xs[i] - min_x) /
                                                              ext_x * width))
                       : 0;
    const int py = ext_y > 0.0
                       ? std::min(height - 1, static_cast<int>((ys[i] - min_y) /
                                                               ext_y * height))
                       : 0;
    if (img.at(py, px, 0) == 0.0) ++filled;
    img.at(py, px, 0) = 1.0;
    img.at(py, px, 1) = 1.0;
    img.at(py, px, 2) = 1.0;
  }
  if (filled <= 1) return std::nullopt;  // degenerate attractor
  return img;
}

bool passes_fractal_filter(const ImageTensor& img) {
  std::size_t filled = 0;
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < pixels; ++i)
    if (img.data[i * 3] > 0.0) ++filled;
  const double ratio = static_cast<double>(filled) / pixels;
  if (ratio < 0.05 || ratio > 0.95) return false;

  // Demand high-frequency content where the attack operators take it from.
  // Radii are capped for small images whose grid ends before 25/50.
  const int r_max = max_radius(img.width, img.height);
  const int r_lo = std::min(25, r_max - 1);
  const int r_hi = std::min(50, r_max - 1);
  return highpass_energy(img, r_lo) > 0.0 && highpass_energy(img, r_hi) > 0.0;
}

ImageTensor generate_fractal(std::uint64_t seed, int width, int height,
                             int n_points) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(attempt));
    const int n_maps = 2 + static_cast<int>(s % 7);  // 2..8
    const IfsSystem sys = sample_system(mix_seed(s, 0xA1), n_maps);
    auto img = render(sys, width, height, n_points, mix_seed(s, 0xB2));
    if (img && passes_fractal_filter(*img)) return std::move(*img);
  }
  throw std::runtime_error("generate_fractal: no acceptable system in 100 attempts");
}

ImageTensor load_fractal(const std::string& path, int width, int height) {
  ImageTensor img = load_image(path);
  if (img.width != width || img.height != height)
    throw std::runtime_error("fractal image dimensions do not match attack size");
  return img;
}

}  // namespace evolba
