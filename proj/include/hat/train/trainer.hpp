#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hat/autodiff/gradient_map.hpp"
#include "hat/data/batch.hpp"
#include "hat/model/forward.hpp"
#include "hat/train/optimizer.hpp"

namespace hat::train {

using model::DropoutMasks;
using model::HierarchicalModel;

enum class TrainMode { standard, post_adv, event_adv, full_hat };

const char* to_string(TrainMode mode);
// Accepts "standard", "post-adv", "event-adv", "full-hat". Throws ConfigError otherwise.
TrainMode parse_mode(const std::string& text);

struct HatConfig {
  double eps_p = 1.0;
  double eps_e = 0.3;
  double alpha = 0.1;
  double learning_rate = 1e-4;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::full_hat;
  OptimizerKind optimizer = OptimizerKind::adam;
  double clip_norm = 5.0;  // 0 disables clipping
  double dropout = 0.5;
  data::BatchOptions batch;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  OptimizerConfig optimizer_config() const;
};

// Parameter gradients only; the watched input blocks are split off.
struct StandardPass {
  GradientMap grad;        // d L_t / d theta
  GradientMap grad_event;  // d L_e / d theta
  Tensor word_grad;        // d L_t / d word block
  Tensor post_grad;        // d L_e / d post block
  double loss_total = 0.0;
  double loss_post = 0.0;
  double loss_event = 0.0;
};

struct AdversarialPass {
  GradientMap grad;
  double loss = 0.0;  // total loss for the word-level pass, event loss for the post-level pass
};

StandardPass standard_pass(const HierarchicalModel& model, const data::Batch& batch, double alpha,
                           const DropoutMasks* dropout = nullptr);

// Fresh forward with the word block displaced by r_p; gradient of the total loss.
AdversarialPass post_adv_pass(const HierarchicalModel& model, const data::Batch& batch, const Tensor& r_p,
                              double alpha, const DropoutMasks* dropout = nullptr);

// Fresh forward with the post block displaced by r_e; gradient of the event loss only.
AdversarialPass event_adv_pass(const HierarchicalModel& model, const data::Batch& batch, const Tensor& r_e,
                               double alpha, const DropoutMasks* dropout = nullptr);

// g + g_post + g_event, skipping absent terms. Throws ShapeError on a leaf-set mismatch.
GradientMap combine_gradients(const GradientMap& g, const GradientMap* g_post, const GradientMap* g_event);

// Clips to clip_norm (when positive) and applies the optimizer. Returns true
// if the gradient was clipped.
bool apply_gradient(const ParameterSet& params, GradientMap grad, Optimizer& optimizer, double clip_norm);

// Sums the three gradients and takes one optimizer step.
bool hat_update(const ParameterSet& params, const GradientMap& g, const GradientMap* g_post,
                const GradientMap* g_event, Optimizer& optimizer, double clip_norm = 0.0);

struct StepResult {
  GradientMap grad;
  double loss_total = 0.0;
  double loss_post = 0.0;
  double loss_event = 0.0;
  double loss_post_adv = std::numeric_limits<double>::quiet_NaN();
  double loss_event_adv = std::numeric_limits<double>::quiet_NaN();
};

// Runs the passes the mode calls for and returns the summed gradient.
StepResult hat_step(const HierarchicalModel& model, const data::Batch& batch, const HatConfig& config,
                    const DropoutMasks* dropout);

using StepFn = std::function<StepResult(const HierarchicalModel&, const data::Batch&, const DropoutMasks*)>;

struct EpochStats {
  double loss_total = 0.0;
  double loss_post = 0.0;
  double loss_event = 0.0;
  double loss_post_adv = std::numeric_limits<double>::quiet_NaN();
  double loss_event_adv = std::numeric_limits<double>::quiet_NaN();
  std::size_t batches = 0;
  std::size_t clipped = 0;
};

// One pass over shuffled mini-batches. Event-weighted mean losses. Throws
// NumericError if a loss or gradient is not finite.
EpochStats run_epoch(HierarchicalModel& model, std::span<const data::Event> train, const HatConfig& config,
                     Optimizer& optimizer, std::mt19937_64& rng, const StepFn& step);

struct EpochRecord {
  std::size_t epoch = 0;
  EpochStats stats;
  double val_accuracy = 0.0;
};

struct TrainState {
  HierarchicalModel model;       // parameters after the last epoch
  HierarchicalModel best_model;  // parameters at the best validation accuracy
  std::size_t epoch = 0;
  std::size_t best_epoch = 0;
  double best_val_accuracy = -1.0;
  bool stopped_early = false;
  std::vector<EpochRecord> history;
};

struct TrainOptions {
  std::ostream* log = nullptr;  // one JSON object per epoch
  StepFn step;                  // defaults to hat_step with the config
};

// Throws DataError for an empty train or validation split.
TrainState train(std::span<const data::Event> train_events, std::span<const data::Event> validation,
                 HierarchicalModel model, const HatConfig& config, const TrainOptions& options = {});

}  // namespace hat::train
