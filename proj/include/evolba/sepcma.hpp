// Sep-CMA-ES engine: diagonal covariance with rank-one and rank-mu updates,
// log-rank weights over all lambda offspring (mu = lambda), learning rates
// scaled by (n+2)/3, and the attack-specific weighted direction that pushes
// away from the worst non-adversarial samples.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evolba/rng.hpp"
#include "evolba/tensor.hpp"

namespace evolba::cma {

struct CmaState {
  FlatVector m;        // distribution mean (unclamped)
  FlatVector diag_c;   // diagonal of C, strictly positive
  FlatVector p_c;      // rank-one evolution path
  double sigma = 1e-3; // fixed sampling scale (no step-size adaptation)
  int lambda = 0;
  int mu = 0;          // == lambda
  std::vector<double> weights;  // positive, strictly decreasing, sum 1
  double c_1 = 0.0;
  double c_mu = 0.0;
  double c_c = 0.0;
  double mu_w = 0.0;
  std::int64_t generation = 0;

  std::size_t dim() const { return diag_c.size(); }
};

// Population-size fallback formula: 4 + floor(3*ln(n)).
int fallback_lambda(std::size_t n);

// Log-rank weights w_i proportional to ln(mu+1/2) - ln(i), normalized.
std::vector<double> log_rank_weights(int mu);

// Initial state: diag_c = ones, p_c = zero, m left empty for the caller.
// c_mu_override replaces the formula value (the tuned default is 0.1);
// pass nullopt to keep the formula.
CmaState default_params(std::size_t n, int lambda = 117, double sigma = 1e-3,
                        std::optional<double> c_mu_override = 0.1);

struct Offspring {
  FlatVector z;      // standard normal draw
  FlatVector x_raw;  // m + sigma * sqrt(diag_c) .* z, unclamped
};

std::vector<Offspring> sample_offspring(const CmaState& state, Rng& rng);

struct RankedOffspring {
  struct Entry {
    FlatVector z;
    double f = 0.0;        // penalized objective
    bool adversarial = false;
  };
  std::vector<Entry> entries;  // ascending by f (stable on ties)

  std::size_t adversarial_count() const;
  static RankedOffspring from(std::vector<Entry> entries);
};

// Unit mean-shift direction: weighted sum of adversarial z's (best ranked
// first) minus weighted sum of non-adversarial z's walked from the overall
// worst to the best, so the largest leftover weights repel the worst
// offenders. nullopt when the numerator is exactly zero.
std::optional<FlatVector> direction(const RankedOffspring& ranked,
                                    const std::vector<double>& weights);

// Rank-one + rank-mu update of the diagonal covariance; ranking by the
// penalized objective over all mu entries. Steps enter in y-space
// (y = sqrt(diag_c) .* z). Increments the generation counter.
void update_covariance(CmaState& state, const RankedOffspring& ranked);

// Conventional mean shift m += sigma * sqrt(diag_c) .* sum_i w_i z_{i:mu},
// used by the plain optimizer (numeric-core sanity runs), not by the attack.
void conventional_mean_update(CmaState& state, const RankedOffspring& ranked);

}  // namespace evolba::cma
