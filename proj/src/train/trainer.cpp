#include "hat/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hat/errors.hpp"
#include "hat/eval/predict.hpp"
#include "hat/train/perturbation.hpp"
#include "json.hpp"

namespace hat::train {

const char* to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::standard: return "standard";
    case TrainMode::post_adv: return "post-adv";
    case TrainMode::event_adv: return "event-adv";
    case TrainMode::full_hat: return "full-hat";
  }
  return "?";
}

TrainMode parse_mode(const std::string& text) {
  for (auto m : {TrainMode::standard, TrainMode::post_adv, TrainMode::event_adv, TrainMode::full_hat}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + text + "' (expected standard, post-adv, event-adv or full-hat)");
}

void HatConfig::validate() const {
  if (!(eps_p >= 0.0) || !(eps_e >= 0.0)) throw ConfigError("perturbation coefficients must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (max_epochs == 0) throw ConfigError("max epochs must be positive");
  if (!(clip_norm >= 0.0)) throw ConfigError("clip norm must be non-negative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (batch.max_post_tokens == 0 || batch.max_event_posts == 0) throw ConfigError("sequence caps must be positive");
}

OptimizerConfig HatConfig::optimizer_config() const {
  OptimizerConfig c;
  c.kind = optimizer;
  c.learning_rate = learning_rate;
  return c;
}

namespace {

GradientMap parameter_part(GradientMap g) {
  g.extract(model::kWordBlock);
  g.extract(model::kPostBlock);
  return g;
}

}  // namespace

StandardPass standard_pass(const HierarchicalModel& model, const data::Batch& batch, double alpha,
                           const DropoutMasks* dropout) {
  model::Tape tape;
  model::ForwardOptions opts;
  opts.alpha = alpha;
  opts.dropout = dropout;
  const auto r = model::forward(tape, model, batch, opts);
  StandardPass out;
  GradientMap total = tape.backward(r.loss_total);
  out.word_grad = total.extract(model::kWordBlock);
  total.extract(model::kPostBlock);
  out.grad = std::move(total);
  GradientMap event = tape.backward(r.loss_event);
  out.post_grad = event.extract(model::kPostBlock);
  event.extract(model::kWordBlock);
  out.grad_event = std::move(event);
  out.loss_total = r.loss_total.value().item();
  out.loss_post = r.loss_post.value().item();
  out.loss_event = r.loss_event.value().item();
  return out;
}

AdversarialPass post_adv_pass(const HierarchicalModel& model, const data::Batch& batch, const Tensor& r_p,
                              double alpha, const DropoutMasks* dropout) {
  model::Tape tape;
  model::ForwardOptions opts;
  opts.alpha = alpha;
  opts.dropout = dropout;
  opts.word_perturbation = &r_p;
  const auto r = model::forward(tape, model, batch, opts);
  return {parameter_part(tape.backward(r.loss_total)), r.loss_total.value().item()};
}

AdversarialPass event_adv_pass(const HierarchicalModel& model, const data::Batch& batch, const Tensor& r_e,
                               double alpha, const DropoutMasks* dropout) {
  model::Tape tape;
  model::ForwardOptions opts;
  opts.alpha = alpha;
  opts.dropout = dropout;
  opts.post_perturbation = &r_e;
  const auto r = model::forward(tape, model, batch, opts);
  return {parameter_part(tape.backward(r.loss_event)), r.loss_event.value().item()};
}

GradientMap combine_gradients(const GradientMap& g, const GradientMap* g_post, const GradientMap* g_event) {
  GradientMap sum = g;
  if (g_post) sum.add_scaled(*g_post);
  if (g_event) sum.add_scaled(*g_event);
  return sum;
}

bool apply_gradient(const ParameterSet& params, GradientMap grad, Optimizer& optimizer, double clip_norm) {
  if (!grad.all_finite()) throw NumericError("non-finite gradient");
  bool clipped = false;
  if (clip_norm > 0.0) {
    const double norm = grad.global_norm();
    if (norm > clip_norm) {
      grad.scale(clip_norm / norm);
      clipped = true;
    }
  }
  optimizer.step(params, grad);
  return clipped;
}

bool hat_update(const ParameterSet& params, const GradientMap& g, const GradientMap* g_post,
                const GradientMap* g_event, Optimizer& optimizer, double clip_norm) {
  return apply_gradient(params, combine_gradients(g, g_post, g_event), optimizer, clip_norm);
}

StepResult hat_step(const HierarchicalModel& model, const data::Batch& batch, const HatConfig& config,
                    const DropoutMasks* dropout) {
  StandardPass std_pass = standard_pass(model, batch, config.alpha, dropout);
  StepResult out;
  out.loss_total = std_pass.loss_total;
  out.loss_post = std_pass.loss_post;
  out.loss_event = std_pass.loss_event;
  out.grad = std::move(std_pass.grad);
  const bool word_level = config.mode == TrainMode::post_adv || config.mode == TrainMode::full_hat;
  const bool post_level = config.mode == TrainMode::event_adv || config.mode == TrainMode::full_hat;
  if (word_level) {
    const Tensor r_p = post_perturbation(std_pass.word_grad, batch, config.eps_p);
    const auto adv = post_adv_pass(model, batch, r_p, config.alpha, dropout);
    out.grad.add_scaled(adv.grad);
    out.loss_post_adv = adv.loss;
  }
  if (post_level) {
    const Tensor r_e = event_perturbation(std_pass.post_grad, batch, config.eps_e);
    const auto adv = event_adv_pass(model, batch, r_e, config.alpha, dropout);
    out.grad.add_scaled(adv.grad);
    out.loss_event_adv = adv.loss;
  }
  return out;
}

EpochStats run_epoch(HierarchicalModel& model, std::span<const data::Event> train, const HatConfig& config,
                     Optimizer& optimizer, std::mt19937_64& rng, const StepFn& step) {
  if (train.empty()) throw DataError("empty training split");
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const ParameterSet params = parameters(model);
  EpochStats stats;
  double weight = 0.0;
  double post_adv = 0.0, event_adv = 0.0;
  bool has_post_adv = false, has_event_adv = false;
  for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
    const std::size_t end = std::min(order.size(), start + config.batch_size);
    std::vector<data::Event> events;
    events.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) events.push_back(train[order[i]]);
    const data::Batch batch = data::make_batch(events, config.batch);

    DropoutMasks masks;
    const DropoutMasks* dropout = nullptr;
    if (config.dropout > 0.0) {
      masks = DropoutMasks::sample(batch, model, config.dropout, rng);
      dropout = &masks;
    }
    StepResult r = step(model, batch, dropout);
    if (!std::isfinite(r.loss_total)) throw NumericError("loss became " + std::to_string(r.loss_total));
    if (apply_gradient(params, std::move(r.grad), optimizer, config.clip_norm)) ++stats.clipped;

    const double w = static_cast<double>(batch.num_events);
    weight += w;
    stats.loss_total += w * r.loss_total;
    stats.loss_post += w * r.loss_post;
    stats.loss_event += w * r.loss_event;
    if (!std::isnan(r.loss_post_adv)) {
      has_post_adv = true;
      post_adv += w * r.loss_post_adv;
    }
    if (!std::isnan(r.loss_event_adv)) {
      has_event_adv = true;
      event_adv += w * r.loss_event_adv;
    }
    ++stats.batches;
  }
  stats.loss_total /= weight;
  stats.loss_post /= weight;
  stats.loss_event /= weight;
  if (has_post_adv) stats.loss_post_adv = post_adv / weight;
  if (has_event_adv) stats.loss_event_adv = event_adv / weight;
  return stats;
}

namespace {

nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

void write_log_line(std::ostream& out, const EpochRecord& rec, const HatConfig& config) {
  nlohmann::json j;
  j["epoch"] = rec.epoch;
  j["mode"] = to_string(config.mode);
  j["loss_total"] = rec.stats.loss_total;
  j["loss_post"] = rec.stats.loss_post;
  j["loss_event"] = rec.stats.loss_event;
  j["loss_post_adv"] = number_or_null(rec.stats.loss_post_adv);
  j["loss_event_adv"] = number_or_null(rec.stats.loss_event_adv);
  j["val_accuracy"] = rec.val_accuracy;
  j["batches"] = rec.stats.batches;
  j["clipped_batches"] = rec.stats.clipped;
  j["clip_norm"] = config.clip_norm;
  out << j.dump() << '\n';
  out.flush();
}

}  // namespace

TrainState train(std::span<const data::Event> train_events, std::span<const data::Event> validation,
                 HierarchicalModel model, const HatConfig& config, const TrainOptions& options) {
  config.validate();
  if (train_events.empty()) throw DataError("empty training split");
  if (validation.empty()) throw DataError("empty validation split");
  model.validate();

  StepFn step = options.step;
  if (!step) {
    step = [&config](const HierarchicalModel& m, const data::Batch& b, const DropoutMasks* d) {
      return hat_step(m, b, config, d);
    };
  }
  Optimizer optimizer(config.optimizer_config());
  std::mt19937_64 rng(config.seed);
  eval::EvalOptions eval_opts;
  eval_opts.batch_size = config.batch_size;
  eval_opts.batch = config.batch;

  TrainState state;
  state.best_model = model;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.stats = run_epoch(model, train_events, config, optimizer, rng, step);
    rec.val_accuracy = eval::evaluate(model, validation, eval_opts).accuracy;
    state.history.push_back(rec);
    state.epoch = epoch;
    if (options.log) write_log_line(*options.log, rec, config);
    if (rec.val_accuracy > state.best_val_accuracy) {
      state.best_val_accuracy = rec.val_accuracy;
      state.best_epoch = epoch;
      state.best_model = model;
      since_best = 0;
    } else if (++since_best >= config.patience && config.patience > 0) {
      state.stopped_early = true;
      break;
    }
  }
  state.model = std::move(model);
  return state;
}

}  // namespace hat::train
