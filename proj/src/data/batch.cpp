#include "hat/data/batch.hpp"

#include <algorithm>

#include "hat/data/vocabulary.hpp"
#include "hat/errors.hpp"

namespace hat::data {

Batch make_batch(std::span<const Event> events, const BatchOptions& options) {
  if (events.empty()) throw DataError("cannot batch zero events");
  if (options.max_post_tokens == 0 || options.max_event_posts == 0) {
    throw ConfigError("sequence length caps must be positive");
  }
  Batch b;
  b.num_events = events.size();
  for (const auto& e : events) {
    if (e.posts.empty()) throw DataError("event '" + e.id + "' has no posts");
    const std::size_t n = std::min(e.posts.size(), options.max_event_posts);
    b.event_offsets.push_back(b.num_posts);
    b.event_lengths.push_back(n);
    b.max_event_len = std::max(b.max_event_len, n);
    for (std::size_t p = 0; p < n; ++p) {
      const auto& post = e.posts[p];
      if (post.tokens.empty()) {
        throw DataError("post '" + post.id + "' of event '" + e.id + "' has no token ids");
      }
      const std::size_t len = std::min(post.tokens.size(), options.max_post_tokens);
      b.post_lengths.push_back(len);
      b.post_event.push_back(b.labels.size());
      b.max_post_len = std::max(b.max_post_len, len);
    }
    b.num_posts += n;
    b.labels.push_back(e.label);
    b.event_ids.push_back(e.id);
  }

  b.tokens.assign(b.num_posts * b.max_post_len, kPadId);
  b.token_mask.assign(b.num_posts * b.max_post_len, 0);
  std::size_t row = 0;
  for (std::size_t e = 0; e < events.size(); ++e) {
    for (std::size_t p = 0; p < b.event_lengths[e]; ++p, ++row) {
      const auto& toks = events[e].posts[p].tokens;
      for (std::size_t t = 0; t < b.post_lengths[row]; ++t) {
        b.tokens[row * b.max_post_len + t] = toks[t];
        b.token_mask[row * b.max_post_len + t] = 1;
      }
    }
  }
  b.post_mask.assign(b.num_events * b.max_event_len, 0);
  for (std::size_t e = 0; e < b.num_events; ++e) {
    std::fill_n(b.post_mask.begin() + static_cast<std::ptrdiff_t>(e * b.max_event_len), b.event_lengths[e], 1);
  }
  return b;
}

std::vector<Batch> make_batches(std::span<const Event> events, std::size_t batch_size,
                                const BatchOptions& options) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  std::vector<Batch> out;
  for (std::size_t i = 0; i < events.size(); i += batch_size) {
    out.push_back(make_batch(events.subspan(i, std::min(batch_size, events.size() - i)), options));
  }
  return out;
}

}  // namespace hat::data
