#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::data {

struct BatchOptions {
  std::size_t max_post_tokens = 64;   // longer posts are truncated
  std::size_t max_event_posts = 128;  // later posts of longer events are dropped
};

// A padded block of events. Posts of all events are stacked into
// num_posts rows; event e owns rows [event_offsets[e], event_offsets[e] + event_lengths[e]).
struct Batch {
  std::size_t num_events = 0;
  std::size_t num_posts = 0;
  std::size_t max_post_len = 0;   // batch-local
  std::size_t max_event_len = 0;  // batch-local

  std::vector<std::int32_t> tokens;      // [num_posts x max_post_len], padded with kPadId
  std::vector<std::uint8_t> token_mask;  // [num_posts x max_post_len]
  std::vector<std::size_t> post_lengths;
  std::vector<std::size_t> post_event;   // owning event of each post row

  std::vector<std::size_t> event_offsets;
  std::vector<std::size_t> event_lengths;
  std::vector<std::uint8_t> post_mask;   // [num_events x max_event_len]

  std::vector<Label> labels;
  std::vector<std::string> event_ids;

  // Post row of the n-th post of event e, or -1 past its end.
  std::int64_t post_row(std::size_t e, std::size_t n) const {
    return n < event_lengths[e] ? static_cast<std::int64_t>(event_offsets[e] + n) : -1;
  }
};

// Events must be encoded (Post::tokens filled). Throws DataError for an
// event without posts or a post without tokens.
Batch make_batch(std::span<const Event> events, const BatchOptions& options = {});

// Consecutive batches of up to batch_size events, in input order.
std::vector<Batch> make_batches(std::span<const Event> events, std::size_t batch_size,
                                const BatchOptions& options = {});

}  // namespace hat::data
