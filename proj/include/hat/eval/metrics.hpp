#pragma once

#include <cstddef>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::eval {

// Rumor is the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

struct Metrics {
  Confusion counts;
  double accuracy = 0.0;
  // Rumor-positive binary scores.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Unweighted means of the per-class scores over {rumor, non-rumor}.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

// Throws ShapeError if the lists differ in length.
Confusion confusion(const std::vector<data::Label>& truth, const std::vector<data::Label>& predicted);

// Ratios with an empty denominator are 0. Throws DataError for an empty matrix.
Metrics compute_metrics(const Confusion& counts);

double harmonic_mean(double a, double b);

}  // namespace hat::eval
