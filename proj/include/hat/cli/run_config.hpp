#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hat/data/event.hpp"
#include "hat/data/loader.hpp"
#include "hat/model/hierarchical_model.hpp"
#include "hat/train/trainer.hpp"

namespace CLI {
class App;
}

namespace hat::cli {

// Enum-valued settings are kept as text while parsing and resolved after.
struct TrainSettings {
  std::string data;
  std::string format = "auto";
  std::string out = "run";
  std::string mode = "full-hat";
  std::string optimizer = "adam";
  std::string pretrained;
  std::size_t max_vocab = 80000;
  model::ModelDims dims;
  train::HatConfig hat;

  // Throws ConfigError on a bad setting.
  train::HatConfig resolved() const;
};

struct EvalSettings {
  std::string checkpoint;
  std::string data;
  std::string format = "auto";
  std::string split = "test";
  std::string out = "eval";
  std::size_t batch_size = 64;
  // Optional expected model sizes; 0 means "take them from the checkpoint".
  std::size_t embed_dim = 0;
  std::size_t post_hidden = 0;
  std::size_t event_hidden = 0;
  std::vector<std::size_t> k_list;
  double eps = 1.0;
  double range = 1.0;
  std::size_t steps = 51;
  std::uint64_t seed = 1;
};

void add_train_options(CLI::App& cmd, TrainSettings& s);
void add_data_options(CLI::App& cmd, EvalSettings& s);

// Corpus input, raw (jsonl file or event-tree directory) or a tokenized
// dataset cache. "auto" picks tree for a directory, cache for *.json and
// jsonl otherwise.
enum class CorpusKind { jsonl, tree, cache };
CorpusKind resolve_corpus_kind(const std::filesystem::path& path, const std::string& format);

// Raw events of a jsonl file or an event-tree directory.
std::vector<data::Event> load_raw(const std::filesystem::path& path, CorpusKind kind, data::LoadReport* report);

}  // namespace hat::cli
