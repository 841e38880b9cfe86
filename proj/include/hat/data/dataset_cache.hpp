#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hat/data/event.hpp"
#include "hat/data/vocabulary.hpp"

namespace hat::data {

inline constexpr int kDatasetCacheVersion = 1;

struct TokenizedDataset {
  std::uint64_t seed = 0;
  Vocabulary vocabulary;
  std::vector<Event> train;
  std::vector<Event> validation;
  std::vector<Event> test;
};

// JSON file stamped with a format version and the split seed. Posts keep
// their ids, timestamps and token ids; raw text is not stored.
void write_dataset_cache(const std::filesystem::path& path, const TokenizedDataset& dataset);
TokenizedDataset read_dataset_cache(const std::filesystem::path& path);

}  // namespace hat::data
