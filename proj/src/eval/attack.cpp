#include "hat/eval/attack.hpp"

#include "hat/errors.hpp"
#include "hat/model/forward.hpp"
#include "hat/train/perturbation.hpp"

namespace hat::eval {

std::vector<Prediction> fgm_attack(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                   double eps, const EvalOptions& options) {
  if (!(eps >= 0.0)) throw ConfigError("attack strength must be non-negative");
  std::vector<Prediction> out;
  out.reserve(events.size());
  for (const auto& batch : data::make_batches(events, options.batch_size, options.batch)) {
    model::Tensor r;
    {
      model::Tape tape;
      const auto clean = model::forward(tape, model, batch);
      const model::Tensor g = tape.grad_wrt(clean.loss_event, clean.word_block);
      r = train::post_perturbation(g, batch, eps);
    }
    model::Tape tape;
    model::ForwardOptions opts;
    opts.word_perturbation = &r;
    const auto attacked = model::forward(tape, model, batch, opts);
    const auto& probs = attacked.event_probs.value();
    for (std::size_t e = 0; e < batch.num_events; ++e) {
      const double pr = probs.at(e, 0);
      const double pn = probs.at(e, 1);
      out.push_back({pr >= pn ? data::Label::rumor : data::Label::non_rumor, pr});
    }
  }
  return out;
}

AttackReport attack_report(const model::HierarchicalModel& model, std::span<const data::Event> events, double eps,
                           const EvalOptions& options) {
  if (events.empty()) throw DataError("cannot attack an empty dataset");
  const auto truth = labels_of(events);
  const auto clean = predict(model, events, options);
  const auto attacked = fgm_attack(model, events, eps, options);
  AttackReport rep;
  rep.epsilon = eps;
  rep.clean = compute_metrics(confusion(truth, labels_of(clean)));
  rep.attacked = compute_metrics(confusion(truth, labels_of(attacked)));
  rep.degradation = rep.clean.accuracy - rep.attacked.accuracy;
  for (std::size_t i = 0; i < clean.size(); ++i) rep.flipped += clean[i].label != attacked[i].label;
  return rep;
}

}  // namespace hat::eval
