#include "evolba/sepcma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evolba/kernels.hpp"

namespace evolba::cma {

namespace {
constexpr double kDiagFloor = 1e-20;
}

int fallback_lambda(std::size_t n) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

std::vector<double> log_rank_weights(int mu) {
  if (mu < 1) throw std::invalid_argument("log_rank_weights: mu must be >= 1");
  std::vector<double> w(mu);
  const double lead = std::log(mu + 0.5);
  double sum = 0.0;
  for (int i = 0; i < mu; ++i) {
    w[i] = lead - std::log(static_cast<double>(i + 1));
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

CmaState default_params(std::size_t n, int lambda, double sigma,
                        std::optional<double> c_mu_override) {
  if (n < 1) throw std::invalid_argument("default_params: n must be >= 1");
  if (lambda < 1) throw std::invalid_argument("default_params: lambda must be >= 1");

  CmaState s;
  s.lambda = lambda;
  s.mu = lambda;  // all offspring feed the updates
  s.sigma = sigma;
  s.weights = log_rank_weights(s.mu);

  double sq = 0.0;
  for (const double w : s.weights) sq += w * w;
  s.mu_w = 1.0 / sq;

  const double nd = static_cast<double>(n);
  const double boost = (nd + 2.0) / 3.0;  // diagonal-covariance rate scaling
  s.c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + s.mu_w) * boost;
  const double c_mu_formula =
      std::min(1.0 - s.c_1,
               2.0 * (s.mu_w - 2.0 + 1.0 / s.mu_w) / ((nd + 2.0) * (nd + 2.0) + s.mu_w)) *
      boost;
  s.c_mu = c_mu_override ? *c_mu_override : c_mu_formula;
  if (s.c_1 + s.c_mu > 1.0)
    throw std::invalid_argument("default_params: c_1 + c_mu exceeds 1");
  s.c_c = 4.0 / (nd + 4.0);

  s.diag_c.assign(n, 1.0);
  s.p_c.assign(n, 0.0);
  return s;
}

std::vector<Offspring> sample_offspring(const CmaState& state, Rng& rng) {
  const std::size_t n = state.dim();
  if (n == 0) throw std::invalid_argument("sample_offspring: empty state");
  if (state.m.size() != n)
    throw std::invalid_argument("sample_offspring: mean not initialized");

  std::vector<Offspring> out(state.lambda);
  for (auto& o : out) {
    o.z.resize(n);
    for (auto& zi : o.z) zi = rng.normal();
    o.x_raw.resize(n);
    kernels::sample_step(state.m.data(), state.diag_c.data(), state.sigma,
                         o.z.data(), o.x_raw.data(), n);
  }
  return out;
}

std::size_t RankedOffspring::adversarial_count() const {
  std::size_t l = 0;
  for (const auto& e : entries)
    if (e.adversarial) ++l;
  return l;
}

RankedOffspring RankedOffspring::from(std::vector<Entry> entries) {
  RankedOffspring r;
  r.entries = std::move(entries);
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const Entry& a, const Entry& b) { return a.f < b.f; });
  return r;
}

std::optional<FlatVector> direction(const RankedOffspring& ranked,
                                    const std::vector<double>& weights) {
  const auto& entries = ranked.entries;
  if (entries.empty()) throw std::invalid_argument("direction: no offspring");
  if (weights.size() < entries.size())
    throw std::invalid_argument("direction: weights shorter than population");

  const std::size_t n = entries.front().z.size();
  std::vector<const FlatVector*> adv, non;
  for (const auto& e : entries)
    (e.adversarial ? adv : non).push_back(&e.z);
  const std::size_t l = adv.size();
  const std::size_t mu = entries.size();

  FlatVector v(n, 0.0);
  // Adversarial candidates, best objective first, get the leading weights.
  for (std::size_t i = 0; i < l; ++i)
    kernels::axpy(weights[i], adv[i]->data(), v.data(), n);
  // Non-adversarial candidates enter negated, worst candidate first, so the
  // largest remaining weight repels the worst offender.
  for (std::size_t j = l; j < mu; ++j) {
    const FlatVector& z = *non[mu - 1 - j];
    kernels::axpy(-weights[j], z.data(), v.data(), n);
  }

  const double norm = l2_norm(v);
  if (norm == 0.0) return std::nullopt;
  kernels::scale(1.0 / norm, v.data(), n);
  return v;
}

void update_covariance(CmaState& state, const RankedOffspring& ranked) {
  const std::size_t n = state.dim();
  const auto& entries = ranked.entries;
  if (entries.size() != static_cast<std::size_t>(state.mu))
    throw std::invalid_argument("update_covariance: population size mismatch");

  // Weighted mean step and weighted squared steps over the full ranking.
  FlatVector z_w(n, 0.0), w_sq(n, 0.0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    kernels::axpy(state.weights[i], entries[i].z.data(), z_w.data(), n);
    kernels::accum_w_sq(state.weights[i], entries[i].z.data(), w_sq.data(), n);
  }

  // Evolution path in y-space: p_c <- (1-c_c) p_c + k * sqrt(diag_c) .* z_w.
  FlatVector y_w(n);
  kernels::mul_sqrt(state.diag_c.data(), z_w.data(), y_w.data(), n);
  const double k = std::sqrt(state.c_c * (2.0 - state.c_c) * state.mu_w);
  kernels::axpby(k, y_w.data(), 1.0 - state.c_c, state.p_c.data(), n);

  // diag_c <- (1-c1-cmu) diag_c + c1 p_c^2 + cmu * diag_c .* sum_i w_i z_i^2,
  // the rank-mu term being sum_i w_i y_i^2 written in terms of z.
  const double keep = 1.0 - state.c_1 - state.c_mu;
  kernels::cov_diag_update(keep, state.c_1, state.p_c.data(), state.c_mu,
                           w_sq.data(), kDiagFloor, state.diag_c.data(), n);
  ++state.generation;
}

void conventional_mean_update(CmaState& state, const RankedOffspring& ranked) {
  const std::size_t n = state.dim();
  FlatVector z_w(n, 0.0);
  for (std::size_t i = 0; i < ranked.entries.size(); ++i)
    kernels::axpy(state.weights[i], ranked.entries[i].z.data(), z_w.data(), n);
  FlatVector y_w(n);
  kernels::mul_sqrt(state.diag_c.data(), z_w.data(), y_w.data(), n);
  kernels::axpy(state.sigma, y_w.data(), state.m.data(), n);
}

}  // namespace evolba::cma
