#include "evolba/attack.hpp"

#include <cmath>
#include <stdexcept>

#include "evolba/fractal.hpp"
#include "evolba/kernels.hpp"
#include "evolba/sepcma.hpp"
#include "evolba/spectral.hpp"

namespace evolba::attack {

double objective(const ImageTensor& x_tilde, const ImageTensor& x_orig,
                 bool adversarial, double c_pen) {
  return l2_distance(x_tilde, x_orig) + (adversarial ? 0.0 : c_pen);
}

FlatVector binary_search_flat(const FlatVector& x_adv, const FlatVector& x_nonadv,
                              int width, int height, QueryStream& stream,
                              int iters) {
  if (iters < 1) throw std::invalid_argument("binary_search: iters must be >= 1");
  if (x_adv.size() != x_nonadv.size())
    throw std::invalid_argument("binary_search: endpoint lengths differ");

  const std::size_t n = x_adv.size();
  double alpha_l = 0.0, alpha_u = 1.0;
  FlatVector candidate(n);
  try {
    for (int i = 0; i < iters; ++i) {
      const double alpha_m = 0.5 * (alpha_l + alpha_u);
      kernels::lerp(x_nonadv.data(), x_adv.data(), alpha_m, candidate.data(), n);
      if (stream.is_adversarial(clamp01(candidate, width, height),
                                Event::binsearch))
        alpha_u = alpha_m;
      else
        alpha_l = alpha_m;
    }
  } catch (const BudgetExhausted&) {
    // Fall through: alpha_u still marks the best adversarial point seen.
  }
  FlatVector out(n);
  kernels::lerp(x_nonadv.data(), x_adv.data(), alpha_u, out.data(), n);
  return out;
}

ImageTensor binary_search(const ImageTensor& x_adv, const ImageTensor& x_nonadv,
                          QueryStream& stream, int iters) {
  if (!x_adv.same_shape(x_nonadv))
    throw std::invalid_argument("binary_search: image dimensions differ");
  FlatVector out = binary_search_flat(x_adv.data, x_nonadv.data, x_adv.width,
                                      x_adv.height, stream, iters);
  // Endpoints live in [0,1], so the interpolation already does.
  return clamp01(out, x_adv.width, x_adv.height);
}

double step_size(const FlatVector& m, const ImageTensor& x_orig, std::int64_t t) {
  if (t < 1)
    throw std::invalid_argument("step_size: generations are 1-indexed");
  return l2_distance(m, x_orig.data) / std::sqrt(static_cast<double>(t));
}

namespace {

ImageTensor fetch_fractal(const std::string& source, int width, int height) {
  constexpr std::string_view kSeedPrefix = "seed:";
  if (source.rfind(kSeedPrefix, 0) == 0) {
    const std::uint64_t seed = std::stoull(source.substr(kSeedPrefix.size()));
    return generate_fractal(seed, width, height);
  }
  return load_fractal(source, width, height);
}

}  // namespace

AttackResult run(const ImageTensor& x_orig, Oracle& oracle,
                 const AttackConfig& config,
                 std::optional<Label> expected_label) {
  const int width = x_orig.width, height = x_orig.height;
  const std::size_t n = x_orig.size();
  if (config.budget == 0) throw std::invalid_argument("run: budget must be > 0");
  if (!(config.c_pen > std::sqrt(static_cast<double>(n))))
    throw std::invalid_argument(
        "run: c_pen must exceed sqrt(N) to rank adversarial offspring first");

  QueryStream stream(oracle, config.budget, x_orig, /*quantize_handoff=*/true);
  Rng rng(mix_seed(config.rng_seed, 0xEB01));

  ImageTensor fractal_init, fractal_jump;
  if (config.use_init_operator || config.use_jump_operator) {
    fractal_init = fetch_fractal(config.fractal_source, width, height);
    fractal_jump = config.fractal_source_jump.empty()
                       ? fractal_init
                       : fetch_fractal(config.fractal_source_jump, width, height);
  }

  AttackResult result;
  try {
    const Label original = stream.classify(x_orig, Event::init);
    if (expected_label && !(original == *expected_label))
      throw MisclassifiedInput("original image is not classified as expected");
    stream.set_original_label(original);

    // --- initial adversarial candidate --------------------------------
    std::optional<ImageTensor> x0;
    if (config.use_init_operator) {
      if (auto init = init_candidate(x_orig, fractal_init, config.r_init, stream))
        x0 = std::move(init->image);
      // nullopt: fall back to the random-noise path below.
    }
    while (!x0) {
      ImageTensor noise(width, height);
      for (auto& v : noise.data) v = rng.uniform();
      if (stream.is_adversarial(noise, Event::init)) x0 = std::move(noise);
    }

    // Move the candidate onto the decision boundary.
    const ImageTensor x_boundary =
        binary_search(*x0, x_orig, stream, config.binsearch_iters);

    const int lambda = config.use_lambda_formula
                           ? cma::fallback_lambda(n)
                           : config.lambda;
    cma::CmaState state =
        cma::default_params(n, lambda, config.sigma, config.c_mu);
    state.m = x_boundary.data;

    bool jumped = false;
    for (std::int64_t t = 0;; ++t) {
      if (config.use_jump_operator && !jumped &&
          stream.budget().used >= config.jump_query_threshold) {
        jumped = true;  // fires at most once per run
        FlatVector m_jumped = jump(state.m, fractal_jump, config.r_jump,
                                   width, height);
        // Keep the pre-jump mean when the jump lands non-adversarial.
        if (stream.is_adversarial(clamp01(m_jumped, width, height), Event::jump))
          state.m = std::move(m_jumped);
      }

      // Sample and evaluate lambda offspring (one query each).
      std::vector<cma::Offspring> offspring = cma::sample_offspring(state, rng);
      std::vector<cma::RankedOffspring::Entry> entries;
      entries.reserve(offspring.size());
      for (auto& o : offspring) {
        ImageTensor img = clamp01(o.x_raw, width, height);
        const bool adv = stream.is_adversarial(img, Event::sample);
        const double f = objective(img, x_orig, adv, config.c_pen);
        entries.push_back({std::move(o.z), f, adv});
      }
      const cma::RankedOffspring ranked =
          cma::RankedOffspring::from(std::move(entries));
      cma::update_covariance(state, ranked);

      const auto v = cma::direction(ranked, state.weights);
      if (!v) continue;  // degenerate direction: no mean move this generation

      // Step size, halved until the moved mean is adversarial.
      double xi = step_size(state.m, x_orig, t + 1);
      FlatVector moved(n);
      bool admissible = false;
      for (int h = 0; h <= config.max_halvings; ++h) {
        moved = state.m;
        kernels::axpy(xi, v->data(), moved.data(), n);
        if (stream.is_adversarial(clamp01(moved, width, height),
                                  Event::boundary_move)) {
          admissible = true;
          break;
        }
        xi *= 0.5;
      }
      if (!admissible) continue;  // boundary not reachable along v this time

      // Move toward the original image; back off up to tau times if the
      // distance got worse, otherwise keep the old mean.
      const double d_old = l2_distance(state.m, x_orig.data);
      FlatVector m_new = binary_search_flat(moved, x_orig.data, width, height,
                                            stream, config.binsearch_iters);
      for (int back = 0;
           l2_distance(m_new, x_orig.data) > d_old && back < config.tau; ++back) {
        xi *= 0.5;
        moved = state.m;
        kernels::axpy(xi, v->data(), moved.data(), n);
        if (!stream.is_adversarial(clamp01(moved, width, height),
                                   Event::boundary_move))
          continue;  // failed attempt still counts against tau
        m_new = binary_search_flat(moved, x_orig.data, width, height, stream,
                                   config.binsearch_iters);
      }
      if (l2_distance(m_new, x_orig.data) <= d_old) state.m = std::move(m_new);
    }
  } catch (const BudgetExhausted&) {
    // Normal termination: report the best adversarial point ever seen.
  }

  result.found = stream.found();
  if (result.found) {
    result.best_image = stream.best_image();
    result.best_l2 = stream.best_l2();
  }
  result.trace = stream.take_trace();
  return result;
}

}  // namespace evolba::attack
