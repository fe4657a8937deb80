// Boundary Attack baseline for comparative runs: random orthogonal steps on
// the sphere around the original image followed by contractions toward it,
// with the canonical success-rate-tracking step adaptation.
#pragma once

#include <cstdint>

#include "evolba/attack.hpp"
#include "evolba/oracle.hpp"

namespace evolba::ba {

struct BaConfig {
  double delta = 0.1;            // orthogonal step, relative to distance
  double epsilon = 0.1;          // toward step, relative to distance
  int adaptation_window = 30;
  double target_ortho = 0.5;     // aimed success rate of orthogonal steps
  double target_toward = 0.25;   // aimed success rate of toward steps
};

attack::AttackResult run_ba(const ImageTensor& x_orig, Oracle& oracle,
                            std::uint32_t budget, const BaConfig& config,
                            std::uint64_t seed);

}  // namespace evolba::ba
