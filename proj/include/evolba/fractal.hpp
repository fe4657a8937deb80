// Fractal donor images: an iterated-function-system generator (chaos game)
// standing in for an external fractal dataset, plus a loader for externally
// supplied images.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evolba/tensor.hpp"

namespace evolba {

struct AffineMap {
  // (x, y) -> (a*x + b*y + e, c*x + d*y + f)
  double a, b, c, d, e, f;
  double det() const { return a * d - b * c; }
};

struct IfsSystem {
  std::vector<AffineMap> maps;          // 2..8 maps
  std::vector<double> probabilities;    // nonnegative, sum to 1
};

// Selection weights proportional to |det| of each map's linear part,
// with a 1e-6 floor.
std::vector<double> det_probabilities(const std::vector<AffineMap>& maps);

// Coefficients uniform in [-1,1]; deterministic for a fixed seed.
IfsSystem sample_system(std::uint64_t seed, int n_maps);

// Chaos game from the origin, 100-iteration burn-in discarded, points
// rescaled to the image box and splatted as 1 on 0 across all channels.
// nullopt when the attractor is degenerate (all points in one pixel) or the
// orbit diverges; the caller resamples the system.
std::optional<ImageTensor> render(const IfsSystem& system, int width, int height,
                                  int n_points, std::uint64_t seed);

// Accepts a render with filled-pixel ratio in [0.05, 0.95] and nonzero
// high-pass energy near the top of the usable radius range.
bool passes_fractal_filter(const ImageTensor& img);

// sample + render + filter loop, at most 100 attempts.
ImageTensor generate_fractal(std::uint64_t seed, int width, int height,
                             int n_points = 100000);

// Loads a fractal image (PNG or EVB1); dimensions must match exactly.
ImageTensor load_fractal(const std::string& path, int width, int height);

}  // namespace evolba
