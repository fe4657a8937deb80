// 2D frequency-domain machinery: per-channel DFT/IDFT with centered zero
// frequency, hard circular low/high-pass masks, the fractal initialization
// operator and the jump operator.
//
// Conventions: unnormalized forward transform, 1/(w*h) inverse, per channel
// independently. The low band owns distances <= r on the centered grid;
// distances are compared as exact integers, so lowpass + highpass partition
// the grid exactly.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "evolba/oracle.hpp"
#include "evolba/tensor.hpp"

namespace evolba {

struct Spectrum {
  int width = 0;
  int height = 0;
  // 3 planes of height*width coefficients, channel-major, DC at
  // (height/2, width/2).
  std::vector<std::complex<double>> coeffs;

  Spectrum() = default;
  Spectrum(int w, int h)
      : width(w), height(h), coeffs(static_cast<std::size_t>(3) * w * h) {}

  std::size_t plane_size() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::complex<double>& at(int c, int y, int x) {
    return coeffs[c * plane_size() + static_cast<std::size_t>(y) * width + x];
  }
  std::complex<double> at(int c, int y, int x) const {
    return coeffs[c * plane_size() + static_cast<std::size_t>(y) * width + x];
  }
};

// Largest centered-grid distance: ceil(hypot(w/2, h/2)).
int max_radius(int width, int height);

Spectrum dft2(const ImageTensor& x);
Spectrum dft2_flat(const FlatVector& v, int width, int height);

// Inverse transform; imaginary residue discarded, result clamped to [0,1].
ImageTensor idft2(const Spectrum& f);
// Unclamped inverse, used where the result feeds optimizer state.
FlatVector idft2_raw(const Spectrum& f);

Spectrum lowpass(const Spectrum& f, int r);   // keeps distance <= r
Spectrum highpass(const Spectrum& f, int r);  // keeps distance >  r

// Count of per-plane coefficients at centered distance <= r.
std::size_t lowpass_mask_size(int width, int height, int r);

// idft2(lowpass(dft2(base), r) + highpass(dft2(donor), r)): base's
// frequencies survive at/below r, the donor's above r.
ImageTensor merge_high(const ImageTensor& base, const ImageTensor& donor, int r);

// Fraction of spectral energy (|F|^2 summed over channels) beyond the cutoff
// radius; 0 for an all-zero image.
double highpass_energy_ratio(const ImageTensor& x, int cutoff);
double highpass_energy(const ImageTensor& x, int cutoff);

struct InitResult {
  ImageTensor image;
  int r = 0;  // cutoff at which the candidate turned adversarial
};

// Fractal initialization: merges the fractal's high band into x_orig,
// lowering r by 1 from r_start until the candidate is adversarial. One query
// per iteration; nullopt once r would drop below 0 (the caller falls back to
// random-noise initialization).
std::optional<InitResult> init_candidate(const ImageTensor& x_orig,
                                         const ImageTensor& fractal,
                                         int r_start, QueryStream& stream);

// Jump operator: replaces frequencies of m above r with the fractal's,
// preserving the <= r band. Returns the jumped mean unclamped.
FlatVector jump(const FlatVector& m, const ImageTensor& fractal, int r,
                int width, int height);

}  // namespace evolba
