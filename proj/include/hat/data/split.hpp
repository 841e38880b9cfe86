#pragma once

#include <cstdint>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::data {

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DatasetSplits {
  std::vector<Event> train;
  std::vector<Event> validation;
  std::vector<Event> test;
  std::uint64_t seed_used = 0;  // seed of the accepted shuffle
  bool stratified = false;
};

inline constexpr double kLabelBalanceTolerance = 0.05;
inline constexpr int kSplitRedraws = 100;

// Seeded shuffle and contiguous cut. The split is re-drawn with successive
// seeds (up to 100) until every non-empty part has a rumor fraction within
// 5 points of the corpus; after that the cut is done per class.
// Throws DataError for fewer than 10 events, ConfigError for bad ratios.
DatasetSplits split(const std::vector<Event>& events, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace hat::data
