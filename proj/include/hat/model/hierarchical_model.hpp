#pragma once

// Hierarchical BiLSTM rumor classifier.
//
//   word ids -> embedding -> post-level BiLSTM -> one vector per post
//   post vectors (source first) -> event-level BiLSTM -> event vector
//   post head: softmax over each post vector (auxiliary loss)
//   event head: softmax over the event vector (primary loss)
//
// Classifier outputs are ordered (rumor, non-rumor).

#include <cstdint>
#include <string>
#include <vector>

#include "hat/autodiff/tape.hpp"
#include "hat/autodiff/tensor.hpp"
#include "hat/data/event.hpp"

namespace hat::model {

using ad::Tape;
using ad::Tensor;
using ad::Var;

struct ModelDims {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 16;
  std::size_t post_hidden = 32;
  std::size_t event_hidden = 32;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

std::string to_string(const ModelDims& d);

inline constexpr double kForgetBiasInit = 1.0;
inline constexpr double kInitRange = 0.1;
inline constexpr double kProbFloor = 1e-12;

// Row 0 is the padding vector; it stays zero and never receives gradient.
struct EmbeddingTable {
  Tensor weights;  // [vocab_size x dim]
  std::size_t vocab_size() const { return weights.rows(); }
  std::size_t dim() const { return weights.cols(); }
};

// Gate columns are ordered input, forget, output, candidate.
struct LstmDirection {
  Tensor w_input;   // [input_dim x 4H]
  Tensor w_hidden;  // [H x 4H]
  Tensor bias;      // [4H]
};

struct BiLstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  LstmDirection forward;
  LstmDirection backward;
  std::size_t output_dim() const { return 2 * hidden_dim; }
};

struct ClassifierHead {
  Tensor weight;  // [2 x in_dim]
  Tensor bias;    // [2]
  std::size_t in_dim() const { return weight.cols(); }
};

struct HierarchicalModel {
  EmbeddingTable embedding;
  BiLstmParams post_rnn;
  BiLstmParams event_rnn;
  ClassifierHead post_head;
  ClassifierHead event_head;

  // Uniform [-0.1, 0.1] weights from a seeded generator, forget-gate
  // biases 1.0, other biases 0, zero padding row.
  static HierarchicalModel create(const ModelDims& dims, std::uint64_t seed);

  ModelDims dims() const;
  // Throws ShapeError if the parameter shapes are inconsistent.
  void validate() const;
  std::size_t parameter_count() const;

  template <class F>
  void for_each_parameter(F&& f) {
    visit(*this, f);
  }
  template <class F>
  void for_each_parameter(F&& f) const {
    visit(*this, f);
  }

 private:
  template <class Self, class F>
  static void visit(Self& m, F& f) {
    f("embedding", m.embedding.weights);
    visit_rnn("post_rnn", m.post_rnn, f);
    visit_rnn("event_rnn", m.event_rnn, f);
    f("post_head.weight", m.post_head.weight);
    f("post_head.bias", m.post_head.bias);
    f("event_head.weight", m.event_head.weight);
    f("event_head.bias", m.event_head.bias);
  }
  template <class Rnn, class F>
  static void visit_rnn(const std::string& prefix, Rnn& r, F& f) {
    f(prefix + ".forward.w_input", r.forward.w_input);
    f(prefix + ".forward.w_hidden", r.forward.w_hidden);
    f(prefix + ".forward.bias", r.forward.bias);
    f(prefix + ".backward.w_input", r.backward.w_input);
    f(prefix + ".backward.w_hidden", r.backward.w_hidden);
    f(prefix + ".backward.bias", r.backward.bias);
  }
};

// ---------------------------------------------------------------------------
// Parameters bound as named leaves of one tape.

struct BoundLstm {
  Var w_input, w_hidden, bias;
};
struct BoundBiLstm {
  std::size_t hidden_dim = 0;
  BoundLstm forward, backward;
};
struct BoundHead {
  Var weight, bias;
};
struct BoundModel {
  Var embedding;
  BoundBiLstm post_rnn, event_rnn;
  BoundHead post_head, event_head;
};

BoundModel bind(Tape& tape, const HierarchicalModel& model);

// ---------------------------------------------------------------------------
// Building blocks

// One [len x dim] matrix per post; padding ids map to the zero row.
// Throws DataError for a token id outside the table.
std::vector<Tensor> embed_event(const data::Event& event, const EmbeddingTable& table);

// Runs a BiLSTM over `rows` sequences of `steps` steps. `inputs` is
// step-major: row t*rows + r holds step t of sequence r. mask[r*steps + t]
// marks real steps; masked steps leave the state unchanged. Returns the
// joined final [forward, backward] hidden states, [rows x 2H].
Var run_bilstm(const BoundBiLstm& rnn, Var inputs, std::size_t steps, std::size_t rows,
               const std::vector<std::uint8_t>& mask);

// Post vector [1 x 2H_p] of one post's word vectors [len x dim], with an
// optional additive perturbation of the same shape.
Var encode_post(const BoundModel& m, Var word_vectors, const Tensor* perturbation = nullptr);

// Event vector [1 x 2H_e] from post vectors [num_posts x 2H_p] ordered
// source-first, with an optional additive perturbation of the same shape.
Var encode_event(const BoundModel& m, Var post_vectors, const Tensor* perturbation = nullptr);

// Post vectors of a whole event, [num_posts x 2H_p]. Throws DataError for
// an event without posts.
Var encode_posts_of(const BoundModel& m, const data::Event& event);

// softmax(x W^T + b) row-wise: [n x in] -> [n x 2].
Var classify(Var x, const BoundHead& head);

// Mean two-class cross-entropy of probability rows [n x 2] against labels,
// with probabilities clamped to [1e-12, 1 - 1e-12] before the log.
Var loss_bce(Var probs, const std::vector<data::Label>& labels);
double loss_bce(double p_rumor, double p_non_rumor, data::Label label);

// alpha * post_loss + (1 - alpha) * event_loss. Throws ConfigError if alpha is outside [0, 1].
Var total_loss(Var post_loss, Var event_loss, double alpha);
double total_loss(double post_loss, double event_loss, double alpha);

}  // namespace hat::model
