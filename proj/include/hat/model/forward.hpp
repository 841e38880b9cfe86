#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hat/data/batch.hpp"
#include "hat/model/hierarchical_model.hpp"

namespace hat::model {

// Names of the two watched input blocks on a forward tape.
inline constexpr const char* kWordBlock = "input.word_vectors";
inline constexpr const char* kPostBlock = "input.post_vectors";

// Inverted-dropout multipliers (0 or 1/(1-rate)). Sampled once per batch
// and shared by every pass over that batch.
struct DropoutMasks {
  Tensor post;   // [num_posts x 2H_p]
  Tensor event;  // [num_events x 2H_e]

  static DropoutMasks sample(const data::Batch& batch, const HierarchicalModel& model, double rate,
                             std::mt19937_64& rng);
};

struct ForwardOptions {
  double alpha = 0.1;
  // [steps*num_posts x dim], laid out like ForwardResult::word_block.
  const Tensor* word_perturbation = nullptr;
  // [num_posts x 2H_p], laid out like ForwardResult::post_block.
  const Tensor* post_perturbation = nullptr;
  const DropoutMasks* dropout = nullptr;
};

struct ForwardResult {
  // Word vectors of every post, step-major: row t*num_posts + p is token t
  // of post row p (zero for padding). Watched as kWordBlock.
  Var word_block;
  // Event-level inputs, one row per post. Watched as kPostBlock.
  Var post_block;
  Var post_probs;   // [num_posts x 2]
  Var event_probs;  // [num_events x 2]
  Var loss_post;    // mean over all posts, each carrying its event's label
  Var loss_event;   // mean over events
  Var loss_total;
};

// Full differentiable pipeline on one tape. At most one perturbation may be
// supplied. Throws ConfigError if both are, ShapeError on a layout mismatch,
// DataError on token ids outside the vocabulary.
ForwardResult forward(Tape& tape, const HierarchicalModel& model, const data::Batch& batch,
                      const ForwardOptions& options = {});

// Owning event of each row of the word block / post block.
std::vector<std::size_t> word_block_events(const data::Batch& batch);
std::vector<std::size_t> post_block_events(const data::Batch& batch);

}  // namespace hat::model
