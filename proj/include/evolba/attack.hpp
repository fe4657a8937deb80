// EvolBA orchestrator: penalized objective, bisection toward the original
// image, step-size schedule, the main loop with bounded backtracking, and
// jump scheduling.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "evolba/oracle.hpp"
#include "evolba/tensor.hpp"
#include "evolba/trace.hpp"

namespace evolba::attack {

struct AttackConfig {
  std::uint32_t budget = 30000;
  double sigma = 1e-3;
  double c_mu = 0.1;
  int lambda = 117;
  bool use_lambda_formula = false;  // 4 + floor(3 ln N) instead of lambda
  double c_pen = 1000.0;            // must exceed sqrt(3*w*h)
  int tau = 3;                      // backtrack limit per generation
  int binsearch_iters = 26;
  int r_init = 25;
  int r_jump = 50;
  std::uint32_t jump_query_threshold = 1000;
  bool use_init_operator = false;
  bool use_jump_operator = false;
  std::string fractal_source = "seed:1";   // "seed:<n>" or a file path
  std::string fractal_source_jump;         // empty: same image as init's
  std::uint64_t rng_seed = 1;
  int max_halvings = 30;  // cap on the step-size halving loop
};

// Thrown when the supplied expected label does not match the oracle's answer
// for the original image: there is nothing to attack.
struct MisclassifiedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// L2 perturbation plus c_pen for non-adversarial candidates.
double objective(const ImageTensor& x_tilde, const ImageTensor& x_orig,
                 bool adversarial, double c_pen);

// Bisection along the segment from x_nonadv (alpha=0) to x_adv (alpha=1);
// exactly `iters` queries, final bracket width 2^-iters, returned point
// adversarial. The caller guarantees the endpoints' labels. On budget
// exhaustion mid-search, returns the best adversarial point seen.
ImageTensor binary_search(const ImageTensor& x_adv, const ImageTensor& x_nonadv,
                          QueryStream& stream, int iters);
FlatVector binary_search_flat(const FlatVector& x_adv, const FlatVector& x_nonadv,
                              int width, int height, QueryStream& stream,
                              int iters);

// ||m - x_orig|| / sqrt(t); generations are 1-indexed at first use.
double step_size(const FlatVector& m, const ImageTensor& x_orig, std::int64_t t);

struct AttackResult {
  bool found = false;
  ImageTensor best_image;
  double best_l2 = 0.0;
  AttackTrace trace;
};

AttackResult run(const ImageTensor& x_orig, Oracle& oracle,
                 const AttackConfig& config,
                 std::optional<Label> expected_label = std::nullopt);

}  // namespace evolba::attack
