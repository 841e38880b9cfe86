#pragma once

#include <vector>

#include "hat/autodiff/tensor.hpp"
#include "hat/data/batch.hpp"

namespace hat::train {

using ad::Tensor;

// Scales the rows of `grad` owned by each event (row_events[r]) to L2 norm
// eps over that event's rows, preserving direction. Events whose gradient
// norm is below 1e-12 get a zero block. Throws ConfigError for eps < 0 and
// ShapeError if row_events does not cover every row.
Tensor per_event_normalize(const Tensor& grad, const std::vector<std::size_t>& row_events,
                           std::size_t num_events, double eps);

// Word-level perturbation from the gradient of the total loss with respect
// to the word block of a batch.
Tensor post_perturbation(const Tensor& word_grad, const data::Batch& batch, double eps_p);

// Post-vector perturbation from the gradient of the event loss with respect
// to the post block of a batch.
Tensor event_perturbation(const Tensor& post_grad, const data::Batch& batch, double eps_e);

}  // namespace hat::train
