#include "evolba/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "evolba/kernels.hpp"

namespace evolba {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft is.
// Plans are created FFTW_UNALIGNED so they can run on any buffer.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair>& plan_cache() {
  static std::map<std::pair<int, int>, PlanPair> cache;
  return cache;
}

PlanPair plans_for(int width, int height) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  const auto key = std::make_pair(width, height);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> in(static_cast<std::size_t>(width) * height);
  std::vector<std::complex<double>> out(in.size());
  auto* fin = reinterpret_cast<fftw_complex*>(in.data());
  auto* fout = reinterpret_cast<fftw_complex*>(out.data());
  PlanPair p;
  p.forward = fftw_plan_dft_2d(height, width, fin, fout, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_2d(height, width, fin, fout, FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.forward || !p.backward)
    throw std::runtime_error("fftw plan creation failed");
  cache[key] = p;
  return p;
}

// DC lands at (height/2, width/2) after the shift.
inline std::size_t shifted_index(int y, int x, int width, int height, int cy,
                                 int cx) {
  const int sy = (y + cy) % height;
  const int sx = (x + cx) % width;
  return static_cast<std::size_t>(sy) * width + sx;
}

}  // namespace

int max_radius(int width, int height) {
  const double half_w = width / 2.0;
  const double half_h = height / 2.0;
  return static_cast<int>(std::ceil(std::hypot(half_w, half_h)));
}

Spectrum dft2_flat(const FlatVector& v, int width, int height) {
  if (v.size() != static_cast<std::size_t>(3) * width * height)
    throw std::invalid_argument("dft2: vector length does not match 3*w*h");
  const PlanPair plans = plans_for(width, height);
  const std::size_t plane = static_cast<std::size_t>(width) * height;
  const int cy = height / 2;
  const int cx = width / 2;

  Spectrum spec(width, height);
  std::vector<std::complex<double>> in(plane), out(plane);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < plane; ++i) in[i] = v[i * 3 + c];
    fftw_execute_dft(plans.forward, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    auto* dst = spec.coeffs.data() + c * plane;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        dst[shifted_index(y, x, width, height, cy, cx)] =
            out[static_cast<std::size_t>(y) * width + x];
  }
  return spec;
}

Spectrum dft2(const ImageTensor& x) { return dft2_flat(x.data, x.width, x.height); }

FlatVector idft2_raw(const Spectrum& f) {
  const int width = f.width, height = f.height;
  const PlanPair plans = plans_for(width, height);
  const std::size_t plane = f.plane_size();
  const int cy = height / 2;
  const int cx = width / 2;
  const double norm = 1.0 / static_cast<double>(plane);

  FlatVector v(3 * plane);
  std::vector<std::complex<double>> in(plane), out(plane);
  for (int c = 0; c < 3; ++c) {
    const auto* src = f.coeffs.data() + c * plane;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        in[static_cast<std::size_t>(y) * width + x] =
            src[shifted_index(y, x, width, height, cy, cx)];
    fftw_execute_dft(plans.backward, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (std::size_t i = 0; i < plane; ++i) v[i * 3 + c] = out[i].real() * norm;
  }
  return v;
}

ImageTensor idft2(const Spectrum& f) {
  return clamp01(idft2_raw(f), f.width, f.height);
}

namespace {

// true iff the coefficient at (y, x) belongs to the low band (distance <= r).
inline bool in_low_band(int y, int x, int cy, int cx, long r2) {
  const long dy = y - cy;
  const long dx = x - cx;
  return dy * dy + dx * dx <= r2;
}

Spectrum masked(const Spectrum& f, int r, bool keep_low) {
  if (r < 0) throw std::invalid_argument("cutoff radius must be nonnegative");
  const long r2 = static_cast<long>(r) * r;
  const int cy = f.height / 2;
  const int cx = f.width / 2;
  Spectrum out(f.width, f.height);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x)
        if (in_low_band(y, x, cy, cx, r2) == keep_low)
          out.at(c, y, x) = f.at(c, y, x);
  return out;
}

}  // namespace

Spectrum lowpass(const Spectrum& f, int r) { return masked(f, r, true); }
Spectrum highpass(const Spectrum& f, int r) { return masked(f, r, false); }

std::size_t lowpass_mask_size(int width, int height, int r) {
  const long r2 = static_cast<long>(r) * r;
  const int cy = height / 2;
  const int cx = width / 2;
  std::size_t n = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (in_low_band(y, x, cy, cx, r2)) ++n;
  return n;
}

namespace {

Spectrum merge_spectra(const Spectrum& base, const Spectrum& donor, int r) {
  if (r < 0) throw std::invalid_argument("cutoff radius must be nonnegative");
  const long r2 = static_cast<long>(r) * r;
  const int cy = base.height / 2;
  const int cx = base.width / 2;
  Spectrum out(base.width, base.height);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < base.height; ++y)
      for (int x = 0; x < base.width; ++x)
        out.at(c, y, x) = in_low_band(y, x, cy, cx, r2) ? base.at(c, y, x)
                                                        : donor.at(c, y, x);
  return out;
}

}  // namespace

ImageTensor merge_high(const ImageTensor& base, const ImageTensor& donor, int r) {
  if (!base.same_shape(donor))
    throw std::invalid_argument("merge_high: image dimensions differ");
  return idft2(merge_spectra(dft2(base), dft2(donor), r));
}

double highpass_energy(const ImageTensor& x, int cutoff) {
  const Spectrum f = dft2(x);
  const long r2 = static_cast<long>(cutoff) * cutoff;
  const int cy = f.height / 2;
  const int cx = f.width / 2;
  double hp = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < f.height; ++y)
      for (int x2 = 0; x2 < f.width; ++x2)
        if (!in_low_band(y, x2, cy, cx, r2)) hp += std::norm(f.at(c, y, x2));
  return hp;
}

double highpass_energy_ratio(const ImageTensor& x, int cutoff) {
  const Spectrum f = dft2(x);
  const long r2 = static_cast<long>(cutoff) * cutoff;
  const int cy = f.height / 2;
  const int cx = f.width / 2;
  double hp = 0.0, total = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < f.height; ++y)
      for (int x2 = 0; x2 < f.width; ++x2) {
        const double e = std::norm(f.at(c, y, x2));
        total += e;
        if (!in_low_band(y, x2, cy, cx, r2)) hp += e;
      }
  return total > 0.0 ? hp / total : 0.0;
}

std::optional<InitResult> init_candidate(const ImageTensor& x_orig,
                                         const ImageTensor& fractal,
                                         int r_start, QueryStream& stream) {
  if (r_start < 0) throw std::invalid_argument("init_candidate: r_start < 0");
  const Spectrum f_o = dft2(x_orig);
  const Spectrum f_i = dft2(fractal);
  for (int r = r_start; r >= 0; --r) {
    ImageTensor x_oi = idft2(merge_spectra(f_o, f_i, r));
    if (stream.is_adversarial(x_oi, Event::init))
      return InitResult{std::move(x_oi), r};
  }
  return std::nullopt;
}

FlatVector jump(const FlatVector& m, const ImageTensor& fractal, int r,
                int width, int height) {
  const Spectrum f_t = dft2_flat(m, width, height);
  const Spectrum f_i = dft2(fractal);
  return idft2_raw(merge_spectra(f_t, f_i, r));
}

}  // namespace evolba
