#include "hat/eval/predict.hpp"

#include <fstream>
#include <iomanip>

#include "hat/errors.hpp"
#include "hat/model/forward.hpp"

namespace hat::eval {

std::vector<Prediction> predict(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                const EvalOptions& options) {
  std::vector<Prediction> out;
  out.reserve(events.size());
  for (const auto& batch : data::make_batches(events, options.batch_size, options.batch)) {
    model::Tape tape;
    const auto r = model::forward(tape, model, batch);
    const auto& probs = r.event_probs.value();
    for (std::size_t e = 0; e < batch.num_events; ++e) {
      const double pr = probs.at(e, 0);
      const double pn = probs.at(e, 1);
      out.push_back({pr >= pn ? data::Label::rumor : data::Label::non_rumor, pr});
    }
  }
  return out;
}

std::vector<data::Label> labels_of(std::span<const data::Event> events) {
  std::vector<data::Label> out;
  for (const auto& e : events) out.push_back(e.label);
  return out;
}

std::vector<data::Label> labels_of(const std::vector<Prediction>& predictions) {
  std::vector<data::Label> out;
  for (const auto& p : predictions) out.push_back(p.label);
  return out;
}

Metrics evaluate(const model::HierarchicalModel& model, std::span<const data::Event> events,
                 const EvalOptions& options) {
  if (events.empty()) throw DataError("cannot evaluate an empty dataset");
  return compute_metrics(confusion(labels_of(events), labels_of(predict(model, events, options))));
}

double mean_event_loss(const model::HierarchicalModel& model, std::span<const data::Event> events,
                       const EvalOptions& options) {
  if (events.empty()) throw DataError("cannot evaluate an empty dataset");
  double sum = 0.0;
  for (const auto& batch : data::make_batches(events, options.batch_size, options.batch)) {
    model::Tape tape;
    const auto r = model::forward(tape, model, batch);
    sum += r.loss_event.value().item() * static_cast<double>(batch.num_events);
  }
  return sum / static_cast<double>(events.size());
}

std::vector<std::size_t> default_k_list() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 5; k <= 45; k += 5) ks.push_back(k);
  return ks;
}

std::vector<EarlyPoint> early_detection(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                        const std::vector<std::size_t>& k_list, const EvalOptions& options) {
  std::vector<EarlyPoint> out;
  for (auto k : k_list) {
    if (k == 0) throw ConfigError("early-detection prefix length must be at least 1");
    std::vector<data::Event> cut;
    cut.reserve(events.size());
    for (const auto& e : events) cut.push_back(data::truncate_event(e, k));
    out.push_back({k, evaluate(model, cut, options).accuracy});
  }
  return out;
}

void write_early_csv(const std::filesystem::path& path, const std::vector<EarlyPoint>& points) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "k,accuracy\n" << std::setprecision(17);
  for (const auto& p : points) out << p.k << ',' << p.accuracy << '\n';
}

}  // namespace hat::eval
