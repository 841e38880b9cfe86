#pragma once

#include <span>
#include <vector>

#include "hat/eval/predict.hpp"

namespace hat::eval {

// Predictions after displacing each event's word vectors by
// eps * g / ||g||_2, where g is the gradient of the event loss at the true
// label with respect to that event's word block. Parameters are untouched.
// Throws ConfigError for eps < 0.
std::vector<Prediction> fgm_attack(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                   double eps, const EvalOptions& options = {});

struct AttackReport {
  double epsilon = 0.0;
  Metrics clean;
  Metrics attacked;
  double degradation = 0.0;  // clean accuracy minus attacked accuracy
  std::size_t flipped = 0;   // events whose prediction changed
};

AttackReport attack_report(const model::HierarchicalModel& model, std::span<const data::Event> events, double eps,
                           const EvalOptions& options = {});

}  // namespace hat::eval
