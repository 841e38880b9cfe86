#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hat/data/vocabulary.hpp"
#include "hat/model/hierarchical_model.hpp"

namespace hat::model {

inline constexpr char kCheckpointMagic[8] = {'H', 'A', 'T', '4', 'R', 'D', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  HierarchicalModel model;
  data::Vocabulary vocabulary;
  // Free-form string pairs (mode, seed, epoch, ...).
  std::map<std::string, std::string> metadata;
};

// Binary container: magic, version, metadata, vocabulary, then every
// parameter as (name, rank, dims, raw little-endian doubles). Values
// round-trip bitwise.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

// Throws DataError on a truncated or foreign file, ShapeError if the stored
// shapes do not form a consistent model or the vocabulary size disagrees
// with the embedding table.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hat::model
