#include "hat/model/forward.hpp"

#include <memory>

#include "hat/data/vocabulary.hpp"
#include "hat/errors.hpp"

namespace hat::model {

namespace {

Tensor sample_mask(std::size_t rows, std::size_t cols, double rate, std::mt19937_64& rng) {
  Tensor m({rows, cols}, 1.0);
  if (rate == 0.0) return m;
  std::bernoulli_distribution keep(1.0 - rate);
  const double kept = 1.0 / (1.0 - rate);
  for (auto& v : m.values()) v = keep(rng) ? kept : 0.0;
  return m;
}

void check_layout(const Tensor* t, const ad::Shape& expected, const char* what) {
  if (t && t->shape() != expected) {
    throw ShapeError(std::string(what) + " perturbation has shape " + ad::to_string(t->shape()) + ", expected " +
                     ad::to_string(expected));
  }
}

}  // namespace

DropoutMasks DropoutMasks::sample(const data::Batch& batch, const HierarchicalModel& model, double rate,
                                  std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
  DropoutMasks d;
  d.post = sample_mask(batch.num_posts, model.post_rnn.output_dim(), rate, rng);
  d.event = sample_mask(batch.num_events, model.event_rnn.output_dim(), rate, rng);
  return d;
}

ForwardResult forward(Tape& tape, const HierarchicalModel& model, const data::Batch& batch,
                      const ForwardOptions& options) {
  if (options.word_perturbation && options.post_perturbation) {
    throw ConfigError("forward accepts a word-level or a post-level perturbation, not both");
  }
  if (batch.num_events == 0 || batch.num_posts == 0) throw DataError("empty batch");
  const BoundModel bm = bind(tape, model);
  const std::size_t posts = batch.num_posts;
  const std::size_t steps = batch.max_post_len;
  const std::size_t vocab = model.embedding.vocab_size();

  auto word_idx = std::make_shared<std::vector<std::int64_t>>(steps * posts, -1);
  for (std::size_t p = 0; p < posts; ++p) {
    for (std::size_t t = 0; t < steps; ++t) {
      if (!batch.token_mask[p * steps + t]) continue;
      const std::int32_t id = batch.tokens[p * steps + t];
      if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
        throw DataError("token id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(vocab));
      }
      if (id != data::kPadId) (*word_idx)[t * posts + p] = id;
    }
  }

  ForwardResult r;
  Var words = ad::gather_rows(bm.embedding, std::move(word_idx));
  check_layout(options.word_perturbation, words.shape(), "word");
  if (options.word_perturbation) words = ad::add(words, tape.constant(*options.word_perturbation));
  tape.watch(words, kWordBlock);
  r.word_block = words;

  Var post_vectors = run_bilstm(bm.post_rnn, words, steps, posts, batch.token_mask);
  if (options.dropout) post_vectors = ad::mul(post_vectors, tape.constant(options.dropout->post));
  r.post_probs = classify(post_vectors, bm.post_head);

  // Event-level input as a distinct node; its gradient covers the event path only.
  check_layout(options.post_perturbation, post_vectors.shape(), "post");
  const Var event_inputs = options.post_perturbation
                               ? ad::add(post_vectors, tape.constant(*options.post_perturbation))
                               : ad::scale(post_vectors, 1.0);
  tape.watch(event_inputs, kPostBlock);
  r.post_block = event_inputs;

  const std::size_t events = batch.num_events;
  const std::size_t event_steps = batch.max_event_len;
  auto post_idx = std::make_shared<std::vector<std::int64_t>>(event_steps * events, -1);
  for (std::size_t e = 0; e < events; ++e) {
    for (std::size_t n = 0; n < event_steps; ++n) (*post_idx)[n * events + e] = batch.post_row(e, n);
  }
  const Var event_seq = ad::gather_rows(event_inputs, std::move(post_idx));
  Var event_vectors = run_bilstm(bm.event_rnn, event_seq, event_steps, events, batch.post_mask);
  if (options.dropout) event_vectors = ad::mul(event_vectors, tape.constant(options.dropout->event));
  r.event_probs = classify(event_vectors, bm.event_head);

  std::vector<data::Label> post_labels(posts);
  for (std::size_t p = 0; p < posts; ++p) post_labels[p] = batch.labels[batch.post_event[p]];
  r.loss_post = loss_bce(r.post_probs, post_labels);
  r.loss_event = loss_bce(r.event_probs, batch.labels);
  r.loss_total = total_loss(r.loss_post, r.loss_event, options.alpha);
  return r;
}

std::vector<std::size_t> word_block_events(const data::Batch& batch) {
  std::vector<std::size_t> out(batch.max_post_len * batch.num_posts);
  for (std::size_t t = 0; t < batch.max_post_len; ++t) {
    for (std::size_t p = 0; p < batch.num_posts; ++p) out[t * batch.num_posts + p] = batch.post_event[p];
  }
  return out;
}

std::vector<std::size_t> post_block_events(const data::Batch& batch) { return batch.post_event; }

}  // namespace hat::model
