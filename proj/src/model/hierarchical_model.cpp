#include "hat/model/hierarchical_model.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

#include "hat/data/vocabulary.hpp"
#include "hat/errors.hpp"

namespace hat::model {

std::string to_string(const ModelDims& d) {
  std::ostringstream os;
  os << "vocab=" << d.vocab_size << " embed=" << d.embed_dim << " post_hidden=" << d.post_hidden
     << " event_hidden=" << d.event_hidden;
  return os.str();
}

namespace {

BiLstmParams make_bilstm(std::size_t input_dim, std::size_t hidden) {
  BiLstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden;
  for (LstmDirection* d : {&p.forward, &p.backward}) {
    d->w_input = Tensor({input_dim, 4 * hidden});
    d->w_hidden = Tensor({hidden, 4 * hidden});
    d->bias = Tensor({4 * hidden});
  }
  return p;
}

ClassifierHead make_head(std::size_t in_dim) {
  return {Tensor({2, in_dim}), Tensor({2})};
}

void expect_shape(const Tensor& t, const ad::Shape& s, const char* what) {
  if (t.shape() != s) {
    throw ShapeError(std::string(what) + " has shape " + ad::to_string(t.shape()) + ", expected " +
                     ad::to_string(s));
  }
}

void validate_rnn(const BiLstmParams& r, const char* what) {
  for (const LstmDirection* d : {&r.forward, &r.backward}) {
    expect_shape(d->w_input, {r.input_dim, 4 * r.hidden_dim}, what);
    expect_shape(d->w_hidden, {r.hidden_dim, 4 * r.hidden_dim}, what);
    expect_shape(d->bias, {4 * r.hidden_dim}, what);
  }
}

}  // namespace

HierarchicalModel HierarchicalModel::create(const ModelDims& dims, std::uint64_t seed) {
  if (dims.vocab_size < 2 || dims.embed_dim == 0 || dims.post_hidden == 0 || dims.event_hidden == 0) {
    throw ConfigError("invalid model dimensions: " + to_string(dims));
  }
  HierarchicalModel m;
  m.embedding.weights = Tensor({dims.vocab_size, dims.embed_dim});
  m.post_rnn = make_bilstm(dims.embed_dim, dims.post_hidden);
  m.event_rnn = make_bilstm(2 * dims.post_hidden, dims.event_hidden);
  m.post_head = make_head(2 * dims.post_hidden);
  m.event_head = make_head(2 * dims.event_hidden);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-kInitRange, kInitRange);
  m.for_each_parameter([&](const std::string& name, Tensor& t) {
    if (name.ends_with("bias")) return;
    for (auto& v : t.values()) v = uniform(rng);
  });
  std::fill_n(m.embedding.weights.data(), dims.embed_dim, 0.0);
  for (BiLstmParams* r : {&m.post_rnn, &m.event_rnn}) {
    for (LstmDirection* d : {&r->forward, &r->backward}) {
      std::fill_n(d->bias.data() + r->hidden_dim, r->hidden_dim, kForgetBiasInit);
    }
  }
  return m;
}

ModelDims HierarchicalModel::dims() const {
  return {embedding.vocab_size(), embedding.dim(), post_rnn.hidden_dim, event_rnn.hidden_dim};
}

void HierarchicalModel::validate() const {
  if (embedding.weights.rank() != 2) throw ShapeError("embedding table must be a matrix");
  if (post_rnn.input_dim != embedding.dim()) {
    throw ShapeError("post BiLSTM input " + std::to_string(post_rnn.input_dim) +
                     " does not match embedding width " + std::to_string(embedding.dim()));
  }
  if (event_rnn.input_dim != 2 * post_rnn.hidden_dim) {
    throw ShapeError("event BiLSTM input " + std::to_string(event_rnn.input_dim) +
                     " must be twice the post hidden size " + std::to_string(post_rnn.hidden_dim));
  }
  validate_rnn(post_rnn, "post BiLSTM weight");
  validate_rnn(event_rnn, "event BiLSTM weight");
  expect_shape(post_head.weight, {2, post_rnn.output_dim()}, "post head weight");
  expect_shape(post_head.bias, {2}, "post head bias");
  expect_shape(event_head.weight, {2, event_rnn.output_dim()}, "event head weight");
  expect_shape(event_head.bias, {2}, "event head bias");
}

std::size_t HierarchicalModel::parameter_count() const {
  std::size_t n = 0;
  for_each_parameter([&](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

BoundModel bind(Tape& tape, const HierarchicalModel& model) {
  BoundModel b;
  b.embedding = tape.leaf("embedding", model.embedding.weights);
  auto bind_rnn = [&](const std::string& prefix, const BiLstmParams& r, BoundBiLstm& out) {
    out.hidden_dim = r.hidden_dim;
    out.forward = {tape.leaf(prefix + ".forward.w_input", r.forward.w_input),
                   tape.leaf(prefix + ".forward.w_hidden", r.forward.w_hidden),
                   tape.leaf(prefix + ".forward.bias", r.forward.bias)};
    out.backward = {tape.leaf(prefix + ".backward.w_input", r.backward.w_input),
                    tape.leaf(prefix + ".backward.w_hidden", r.backward.w_hidden),
                    tape.leaf(prefix + ".backward.bias", r.backward.bias)};
  };
  bind_rnn("post_rnn", model.post_rnn, b.post_rnn);
  bind_rnn("event_rnn", model.event_rnn, b.event_rnn);
  b.post_head = {tape.leaf("post_head.weight", model.post_head.weight),
                 tape.leaf("post_head.bias", model.post_head.bias)};
  b.event_head = {tape.leaf("event_head.weight", model.event_head.weight),
                  tape.leaf("event_head.bias", model.event_head.bias)};
  return b;
}

std::vector<Tensor> embed_event(const data::Event& event, const EmbeddingTable& table) {
  std::vector<Tensor> out;
  const std::size_t dim = table.dim();
  for (const auto& post : event.posts) {
    if (post.tokens.empty()) throw DataError("post '" + post.id + "' has no token ids");
    Tensor m({post.tokens.size(), dim});
    for (std::size_t t = 0; t < post.tokens.size(); ++t) {
      const std::int32_t id = post.tokens[t];
      if (id < 0 || static_cast<std::size_t>(id) >= table.vocab_size()) {
        throw DataError("token id " + std::to_string(id) + " outside vocabulary of size " +
                        std::to_string(table.vocab_size()));
      }
      if (id == data::kPadId) continue;
      std::copy_n(table.weights.data() + static_cast<std::size_t>(id) * dim, dim, m.data() + t * dim);
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

Var run_direction(const BoundLstm& cell, std::size_t hidden, Var inputs, std::size_t steps,
                  std::size_t rows, const std::vector<std::uint8_t>& mask, bool reverse) {
  Tape& tape = *inputs.tape();
  const Var xw = ad::add_bias(ad::matmul(inputs, cell.w_input), cell.bias);
  Var h = tape.constant(Tensor({rows, hidden}));
  Var c = h;
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    Tensor keep({rows, 1});
    Tensor hold({rows, 1});
    std::size_t active = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const bool on = mask[r * steps + t] != 0;
      keep[r] = on ? 1.0 : 0.0;
      hold[r] = on ? 0.0 : 1.0;
      active += on;
    }
    if (active == 0) continue;

    const Var z = ad::add(ad::slice_rows(xw, t * rows, rows), ad::matmul(h, cell.w_hidden));
    const Var gates = ad::sigmoid(ad::slice_cols(z, 0, 3 * hidden));
    const Var in_gate = ad::slice_cols(gates, 0, hidden);
    const Var forget = ad::slice_cols(gates, hidden, hidden);
    const Var out_gate = ad::slice_cols(gates, 2 * hidden, hidden);
    const Var candidate = ad::tanh(ad::slice_cols(z, 3 * hidden, hidden));
    const Var c_new = ad::add(ad::mul(forget, c), ad::mul(in_gate, candidate));
    const Var h_new = ad::mul(out_gate, ad::tanh(c_new));
    if (active == rows) {
      c = c_new;
      h = h_new;
    } else {
      const Var k = tape.constant(std::move(keep));
      const Var o = tape.constant(std::move(hold));
      c = ad::add(ad::mul(c_new, k), ad::mul(c, o));
      h = ad::add(ad::mul(h_new, k), ad::mul(h, o));
    }
  }
  return h;
}

Var add_perturbation(Var x, const Tensor* perturbation, const char* what) {
  if (!perturbation) return x;
  if (perturbation->shape() != x.shape()) {
    throw ShapeError(std::string(what) + " perturbation has shape " + ad::to_string(perturbation->shape()) +
                     ", input has " + ad::to_string(x.shape()));
  }
  return ad::add(x, x.tape()->constant(*perturbation));
}

}  // namespace

Var run_bilstm(const BoundBiLstm& rnn, Var inputs, std::size_t steps, std::size_t rows,
               const std::vector<std::uint8_t>& mask) {
  if (inputs.shape().size() != 2 || inputs.shape()[0] != steps * rows) {
    throw ShapeError("BiLSTM input " + ad::to_string(inputs.shape()) + " is not " +
                     std::to_string(steps) + " steps of " + std::to_string(rows) + " rows");
  }
  if (mask.size() != steps * rows) throw ShapeError("BiLSTM mask does not cover every step");
  const Var fwd = run_direction(rnn.forward, rnn.hidden_dim, inputs, steps, rows, mask, false);
  const Var bwd = run_direction(rnn.backward, rnn.hidden_dim, inputs, steps, rows, mask, true);
  return ad::concat_cols(fwd, bwd);
}

Var encode_post(const BoundModel& m, Var word_vectors, const Tensor* perturbation) {
  const Var x = add_perturbation(word_vectors, perturbation, "word");
  const std::size_t len = x.shape()[0];
  return run_bilstm(m.post_rnn, x, len, 1, std::vector<std::uint8_t>(len, 1));
}

Var encode_event(const BoundModel& m, Var post_vectors, const Tensor* perturbation) {
  const Var x = add_perturbation(post_vectors, perturbation, "post");
  if (x.shape().size() != 2 || x.shape()[1] != 2 * m.post_rnn.hidden_dim) {
    throw ShapeError("post vectors " + ad::to_string(x.shape()) + " do not match the event BiLSTM input width " +
                     std::to_string(2 * m.post_rnn.hidden_dim));
  }
  const std::size_t n = x.shape()[0];
  return run_bilstm(m.event_rnn, x, n, 1, std::vector<std::uint8_t>(n, 1));
}

Var encode_posts_of(const BoundModel& m, const data::Event& event) {
  if (event.posts.empty()) throw DataError("event '" + event.id + "' has no posts");
  const std::size_t vocab = m.embedding.shape()[0];
  const std::size_t rows = event.posts.size();
  std::size_t steps = 0;
  for (const auto& post : event.posts) {
    if (post.tokens.empty()) throw DataError("post '" + post.id + "' has no token ids");
    steps = std::max(steps, post.tokens.size());
  }
  auto idx = std::make_shared<std::vector<std::int64_t>>(steps * rows, -1);
  std::vector<std::uint8_t> mask(steps * rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& tokens = event.posts[r].tokens;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const std::int32_t id = tokens[t];
      if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
        throw DataError("token id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(vocab));
      }
      if (id == data::kPadId) continue;
      (*idx)[t * rows + r] = id;
      mask[r * steps + t] = 1;
    }
  }
  const Var words = ad::gather_rows(m.embedding, std::move(idx));
  return run_bilstm(m.post_rnn, words, steps, rows, mask);
}

Var classify(Var x, const BoundHead& head) {
  const std::size_t in = head.weight.shape()[1];
  if (x.shape().size() != 2 || x.shape()[1] != in) {
    throw ShapeError("classifier input " + ad::to_string(x.shape()) + " does not match head width " +
                     std::to_string(in));
  }
  return ad::softmax_rows(ad::add_bias(ad::matmul(x, ad::transpose(head.weight)), head.bias));
}

Var loss_bce(Var probs, const std::vector<data::Label>& labels) {
  if (probs.shape().size() != 2 || probs.shape()[1] != 2 || probs.shape()[0] != labels.size()) {
    throw ShapeError("loss over " + ad::to_string(probs.shape()) + " probabilities with " +
                     std::to_string(labels.size()) + " labels");
  }
  auto cols = std::make_shared<std::vector<std::int64_t>>();
  cols->reserve(labels.size());
  for (auto l : labels) cols->push_back(static_cast<std::int64_t>(data::label_column(l)));
  const Var logp = ad::log(ad::clamp(probs, kProbFloor, 1.0 - kProbFloor));
  return ad::scale(ad::mean_all(ad::select_cols(logp, std::move(cols))), -1.0);
}

double loss_bce(double p_rumor, double p_non_rumor, data::Label label) {
  const double p = label == data::Label::rumor ? p_rumor : p_non_rumor;
  return -std::log(std::clamp(p, kProbFloor, 1.0 - kProbFloor));
}

namespace {
void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("loss weight alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}
}  // namespace

Var total_loss(Var post_loss, Var event_loss, double alpha) {
  check_alpha(alpha);
  return ad::add(ad::scale(post_loss, alpha), ad::scale(event_loss, 1.0 - alpha));
}

double total_loss(double post_loss, double event_loss, double alpha) {
  check_alpha(alpha);
  return alpha * post_loss + (1.0 - alpha) * event_loss;
}

}  // namespace hat::model
