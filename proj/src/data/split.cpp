#include "hat/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hat/errors.hpp"

namespace hat::data {
namespace {

struct Counts {
  std::size_t train, validation;
};

Counts cut_sizes(std::size_t n, const SplitRatios& r) {
  const auto train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * r.train));
  const auto val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * r.validation));
  return {std::min(train, n), std::min(val, n - std::min(train, n))};
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

DatasetSplits assemble(const std::vector<Event>& events, const std::vector<std::size_t>& order,
                       Counts c) {
  DatasetSplits s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Event& e = events[order[i]];
    if (i < c.train) {
      s.train.push_back(e);
    } else if (i < c.train + c.validation) {
      s.validation.push_back(e);
    } else {
      s.test.push_back(e);
    }
  }
  return s;
}

bool balanced(const DatasetSplits& s, double overall) {
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    if (!part->empty() && std::abs(rumor_fraction(*part) - overall) > kLabelBalanceTolerance) return false;
  }
  return true;
}

}  // namespace

DatasetSplits split(const std::vector<Event>& events, const SplitRatios& ratios, std::uint64_t seed) {
  if (events.size() < 10) {
    throw DataError("need at least 10 events to split, got " + std::to_string(events.size()));
  }
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  const double overall = rumor_fraction(events);
  const Counts counts = cut_sizes(events.size(), ratios);

  for (int attempt = 0; attempt < kSplitRedraws; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    DatasetSplits out = assemble(events, shuffled(events.size(), s), counts);
    if (balanced(out, overall)) {
      out.seed_used = s;
      return out;
    }
  }

  // Stratified fallback: cut each class with the same ratios, then interleave
  // through one more seeded shuffle per part.
  DatasetSplits out;
  out.seed_used = seed;
  out.stratified = true;
  for (Label label : {Label::rumor, Label::non_rumor}) {
    std::vector<Event> cls;
    std::copy_if(events.begin(), events.end(), std::back_inserter(cls),
                 [label](const Event& e) { return e.label == label; });
    const auto order = shuffled(cls.size(), seed);
    DatasetSplits part = assemble(cls, order, cut_sizes(cls.size(), ratios));
    for (auto* dst : {&out.train, &out.validation, &out.test}) {
      auto& src = dst == &out.train ? part.train : dst == &out.validation ? part.validation : part.test;
      dst->insert(dst->end(), src.begin(), src.end());
    }
  }
  std::mt19937_64 rng(seed);
  for (auto* part : {&out.train, &out.validation, &out.test}) std::shuffle(part->begin(), part->end(), rng);
  return out;
}

}  // namespace hat::data
