#include "evolba/oracle.hpp"

#include <cmath>

#include "evolba/kernels.hpp"
#include "evolba/rng.hpp"
#include "evolba/spectral.hpp"

namespace evolba {

namespace {

void require_shape(const Oracle& o, const ImageTensor& x) {
  if (x.width != o.width() || x.height != o.height())
    throw std::invalid_argument("oracle: input dimensions do not match");
}

}  // namespace

LinearOracle::LinearOracle(FlatVector w, double b, int width, int height)
    : w_(std::move(w)), b_(b), width_(width), height_(height) {
  if (w_.size() != static_cast<std::size_t>(3) * width * height)
    throw std::invalid_argument("LinearOracle: weight length != 3*w*h");
  w_norm_ = l2_norm(w_);
  if (!(w_norm_ > 0.0))
    throw std::invalid_argument("LinearOracle: ||w|| must be positive");
}

Label LinearOracle::classify(const ImageTensor& x) {
  require_shape(*this, x);
  const double t = kernels::dot(w_.data(), x.data.data(), w_.size()) + b_;
  return Label{t > 0.0 ? 1 : 0};
}

double LinearOracle::signed_distance(const ImageTensor& x) const {
  return (kernels::dot(w_.data(), x.data.data(), w_.size()) + b_) / w_norm_;
}

SphereOracle::SphereOracle(FlatVector center, double radius, int width, int height)
    : center_(std::move(center)), radius_(radius), width_(width), height_(height) {
  if (center_.size() != static_cast<std::size_t>(3) * width * height)
    throw std::invalid_argument("SphereOracle: center length != 3*w*h");
  if (!(radius_ > 0.0))
    throw std::invalid_argument("SphereOracle: radius must be positive");
}

Label SphereOracle::classify(const ImageTensor& x) {
  require_shape(*this, x);
  const double d = l2_distance(x.data, center_);
  return Label{d < radius_ ? 1 : 0};
}

HighFreqOracle::HighFreqOracle(int cutoff, double threshold, int width, int height)
    : cutoff_(cutoff), threshold_(threshold), width_(width), height_(height) {
  if (cutoff <= 0 || cutoff >= std::min(width, height) / 2)
    throw std::invalid_argument("HighFreqOracle: cutoff out of range");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("HighFreqOracle: threshold must be in (0,1)");
}

Label HighFreqOracle::classify(const ImageTensor& x) {
  require_shape(*this, x);
  return Label{highpass_energy_ratio(x, cutoff_) > threshold_ ? 1 : 0};
}

double minimal_adversarial_l2(const Oracle& oracle, const ImageTensor& x) {
  if (auto* lin = dynamic_cast<const LinearOracle*>(&oracle))
    return std::abs(lin->signed_distance(x));
  if (auto* sph = dynamic_cast<const SphereOracle*>(&oracle))
    return std::abs(l2_distance(x.data, sph->center()) - sph->radius());
  throw UnsupportedOracleError(
      "minimal_adversarial_l2: only analytic oracles have a closed form");
}

std::unique_ptr<LinearOracle> make_linear_for(const ImageTensor& x_orig,
                                              std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x11));
  const std::size_t n = x_orig.size();
  FlatVector w(n);
  for (auto& v : w) v = rng.normal();
  kernels::scale(1.0 / l2_norm(w), w.data(), n);

  // Place the boundary between the original image and the uniform-noise
  // mass so random-noise initialization can cross it.
  const double t_orig = kernels::dot(w.data(), x_orig.data.data(), n);
  double t_noise = 0.0;
  for (const double v : w) t_noise += 0.5 * v;
  double gap = t_noise - t_orig;
  if (gap == 0.0) gap = 1e-3;
  const double sign = gap > 0.0 ? 1.0 : -1.0;
  const double dist = std::max(0.05, 0.5 * std::abs(gap));
  const double b = -(t_orig + sign * dist);
  return std::make_unique<LinearOracle>(std::move(w), b, x_orig.width,
                                        x_orig.height);
}

std::unique_ptr<SphereOracle> make_sphere_for(const ImageTensor& x_orig,
                                              std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x22));
  const std::size_t n = x_orig.size();
  // Original image inside the sphere, noise far outside; the minimal
  // adversarial distance is radius - ||x_orig - center||.
  FlatVector dir(n);
  for (auto& v : dir) v = rng.normal();
  kernels::scale(1.0 / l2_norm(dir), dir.data(), n);
  const double off = rng.uniform(0.2, 1.0);
  FlatVector center = x_orig.data;
  kernels::axpy(off, dir.data(), center.data(), n);
  const double radius = off + rng.uniform(1.0, 3.0);
  return std::make_unique<SphereOracle>(std::move(center), radius, x_orig.width,
                                        x_orig.height);
}

QueryStream::QueryStream(Oracle& oracle, std::uint32_t max_queries,
                         const ImageTensor& x_orig, bool quantize_handoff)
    : oracle_(oracle),
      budget_{max_queries, 0},
      x_orig_(x_orig),
      quantize_(quantize_handoff) {}

Label QueryStream::classify(const ImageTensor& x, Event event) {
  if (budget_.exhausted()) throw BudgetExhausted{};
  ImageTensor quantized;
  const ImageTensor* handed = &x;
  if (quantize_) {
    quantized = quantize_f32(x);
    handed = &quantized;
  }
  ++budget_.used;
  const Label label = oracle_.classify(*handed);
  if (original_ && !(label == *original_)) {
    const double d = l2_distance(*handed, x_orig_);
    if (d < best_l2_) {
      best_l2_ = d;
      best_image_ = *handed;
    }
  }
  trace_.records.push_back({budget_.used, best_l2_, event});
  trace_.total_queries = budget_.used;
  trace_.final_l2 = best_l2_;
  return label;
}

bool QueryStream::is_adversarial(const ImageTensor& x, Event event) {
  if (!original_)
    throw std::logic_error("QueryStream: original label not set");
  return !(classify(x, event) == *original_);
}

AttackTrace QueryStream::take_trace() { return std::move(trace_); }

}  // namespace evolba
