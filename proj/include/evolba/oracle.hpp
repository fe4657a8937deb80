// Hard-label classification abstraction with exact query accounting. The
// analytic oracles have closed-form minimal adversarial distances and are the
// ground truth for all optimality-gap tests; the remote client talks to a
// model server over the wire protocol in wire.hpp.
#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "evolba/tensor.hpp"
#include "evolba/trace.hpp"

namespace evolba {

struct Label {
  int id = 0;
  bool operator==(const Label&) const = default;
};

struct QueryBudget {
  std::uint32_t max_queries = 0;
  std::uint32_t used = 0;
  bool exhausted() const { return used >= max_queries; }
};

// Thrown by QueryStream::classify once the budget is spent; the attack
// terminates and reports its best-so-far.
struct BudgetExhausted {};

// Remote I/O failure, distinguishable from budget exhaustion.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedOracleError : std::logic_error {
  using std::logic_error::logic_error;
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Label classify(const ImageTensor& x) = 0;
  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual int n_classes() const = 0;
};

// label 1 iff w.x + b > 0. Minimal adversarial L2 from x is |w.x+b| / ||w||.
class LinearOracle : public Oracle {
 public:
  LinearOracle(FlatVector w, double b, int width, int height);
  Label classify(const ImageTensor& x) override;
  int width() const override { return width_; }
  int height() const override { return height_; }
  int n_classes() const override { return 2; }

  double signed_distance(const ImageTensor& x) const;  // (w.x+b)/||w||
  const FlatVector& w() const { return w_; }
  double b() const { return b_; }
  double w_norm() const { return w_norm_; }

 private:
  FlatVector w_;
  double b_;
  double w_norm_;
  int width_, height_;
};

// label 1 (inside) iff ||x - center|| < radius. Minimal adversarial L2 from x
// is | ||x-center|| - radius |.
class SphereOracle : public Oracle {
 public:
  SphereOracle(FlatVector center, double radius, int width, int height);
  Label classify(const ImageTensor& x) override;
  int width() const override { return width_; }
  int height() const override { return height_; }
  int n_classes() const override { return 2; }

  const FlatVector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  FlatVector center_;
  double radius_;
  int width_, height_;
};

// label 1 iff (high-pass energy / total spectral energy) > threshold, with
// the spectral module's centered-DFT convention.
class HighFreqOracle : public Oracle {
 public:
  HighFreqOracle(int cutoff, double threshold, int width, int height);
  Label classify(const ImageTensor& x) override;
  int width() const override { return width_; }
  int height() const override { return height_; }
  int n_classes() const override { return 2; }

  int cutoff() const { return cutoff_; }
  double threshold() const { return threshold_; }

 private:
  int cutoff_;
  double threshold_;
  int width_, height_;
};

// Ground truth for acceptance tests; does not consume queries and is only
// defined for the analytic oracles above.
double minimal_adversarial_l2(const Oracle& oracle, const ImageTensor& x);

// Seeded constructions that place a reachable decision boundary around a
// given original image (used by the CLI and the experiment harness).
std::unique_ptr<LinearOracle> make_linear_for(const ImageTensor& x_orig,
                                              std::uint64_t seed);
std::unique_ptr<SphereOracle> make_sphere_for(const ImageTensor& x_orig,
                                              std::uint64_t seed);

// The attack's single channel to the target model: budgets every classify
// call, appends one trace record per query, tracks the best adversarial
// point, and (by default) quantizes the handoff through float32 so local and
// remote oracles observe identical inputs.
class QueryStream {
 public:
  QueryStream(Oracle& oracle, std::uint32_t max_queries,
              const ImageTensor& x_orig, bool quantize_handoff = true);

  Label classify(const ImageTensor& x, Event event);
  bool is_adversarial(const ImageTensor& x, Event event);

  void set_original_label(Label l) { original_ = l; }
  std::optional<Label> original_label() const { return original_; }

  const QueryBudget& budget() const { return budget_; }
  const AttackTrace& trace() const { return trace_; }
  AttackTrace take_trace();

  double best_l2() const { return best_l2_; }
  const ImageTensor& best_image() const { return best_image_; }
  bool found() const { return best_l2_ < std::numeric_limits<double>::infinity(); }

 private:
  Oracle& oracle_;
  QueryBudget budget_;
  const ImageTensor& x_orig_;
  bool quantize_;
  std::optional<Label> original_;
  AttackTrace trace_;
  double best_l2_ = std::numeric_limits<double>::infinity();
  ImageTensor best_image_;
};

}  // namespace evolba
