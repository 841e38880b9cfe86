#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "hat/data/batch.hpp"
#include "hat/eval/metrics.hpp"
#include "hat/model/hierarchical_model.hpp"

namespace hat::eval {

struct EvalOptions {
  std::size_t batch_size = 64;
  data::BatchOptions batch;
};

struct Prediction {
  data::Label label = data::Label::rumor;
  double p_rumor = 0.5;
};

// Event-level argmax of the event classifier (ties go to rumor).
std::vector<Prediction> predict(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                const EvalOptions& options = {});

std::vector<data::Label> labels_of(std::span<const data::Event> events);
std::vector<data::Label> labels_of(const std::vector<Prediction>& predictions);

// Throws DataError for an empty dataset.
Metrics evaluate(const model::HierarchicalModel& model, std::span<const data::Event> events,
                 const EvalOptions& options = {});

// Mean event loss over all events.
double mean_event_loss(const model::HierarchicalModel& model, std::span<const data::Event> events,
                       const EvalOptions& options = {});

struct EarlyPoint {
  std::size_t k = 0;
  double accuracy = 0.0;
};

// 5, 10, ..., 45.
std::vector<std::size_t> default_k_list();

// Accuracy with every event cut to its first min(k, size) posts. Throws
// ConfigError for k == 0.
std::vector<EarlyPoint> early_detection(const model::HierarchicalModel& model, std::span<const data::Event> events,
                                        const std::vector<std::size_t>& k_list, const EvalOptions& options = {});

// "k,accuracy" header plus one row per point.
void write_early_csv(const std::filesystem::path& path, const std::vector<EarlyPoint>& points);

}  // namespace hat::eval
