#include "hat/cli/run_config.hpp"

#include "CLI11.hpp"
#include "hat/errors.hpp"

namespace hat::cli {

train::HatConfig TrainSettings::resolved() const {
  train::HatConfig c = hat;
  c.mode = train::parse_mode(mode);
  c.optimizer = train::parse_optimizer(optimizer);
  c.validate();
  return c;
}

void add_train_options(CLI::App& cmd, TrainSettings& s) {
  cmd.add_option("--data", s.data, "Corpus: jsonl file, event-tree directory or dataset cache")->capture_default_str();
  cmd.add_option("--format", s.format, "auto, jsonl, tree or cache")->capture_default_str();
  cmd.add_option("--out", s.out, "Output directory")->capture_default_str();
  cmd.add_option("--mode", s.mode, "standard, post-adv, event-adv or full-hat")->capture_default_str();
  cmd.add_option("--eps-p", s.hat.eps_p, "Word-level perturbation norm")->capture_default_str();
  cmd.add_option("--eps-e", s.hat.eps_e, "Post-vector perturbation norm")->capture_default_str();
  cmd.add_option("--alpha", s.hat.alpha, "Weight of the post-level loss")->capture_default_str();
  cmd.add_option("--lr", s.hat.learning_rate, "Learning rate")->capture_default_str();
  cmd.add_option("--batch", s.hat.batch_size, "Events per batch")->capture_default_str();
  cmd.add_option("--epochs", s.hat.max_epochs, "Maximum epochs")->capture_default_str();
  cmd.add_option("--patience", s.hat.patience, "Early-stopping patience in epochs (0 disables)")->capture_default_str();
  cmd.add_option("--seed", s.hat.seed, "Seed for split, initialization, shuffling and dropout")->capture_default_str();
  cmd.add_option("--optimizer", s.optimizer, "sgd or adam")->capture_default_str();
  cmd.add_option("--clip", s.hat.clip_norm, "Global gradient-norm clip (0 disables)")->capture_default_str();
  cmd.add_option("--dropout", s.hat.dropout, "Dropout rate on post and event vectors")->capture_default_str();
  cmd.add_option("--max-post-tokens", s.hat.batch.max_post_tokens, "Token cap per post")->capture_default_str();
  cmd.add_option("--max-event-posts", s.hat.batch.max_event_posts, "Post cap per event")->capture_default_str();
  cmd.add_option("--embed-dim", s.dims.embed_dim, "Embedding width")->capture_default_str();
  cmd.add_option("--post-hidden", s.dims.post_hidden, "Post-level LSTM hidden size")->capture_default_str();
  cmd.add_option("--event-hidden", s.dims.event_hidden, "Event-level LSTM hidden size")->capture_default_str();
  cmd.add_option("--max-vocab", s.max_vocab, "Vocabulary cap including padding and unknown")->capture_default_str();
  cmd.add_option("--pretrained", s.pretrained, "Optional 'word v1 ... vd' embedding file")->capture_default_str();
}

void add_data_options(CLI::App& cmd, EvalSettings& s) {
  cmd.add_option("--checkpoint", s.checkpoint, "Checkpoint written by train")->capture_default_str();
  cmd.add_option("--data", s.data, "Corpus: jsonl file, event-tree directory or dataset cache")->capture_default_str();
  cmd.add_option("--format", s.format, "auto, jsonl, tree or cache")->capture_default_str();
  cmd.add_option("--split", s.split, "Split of a dataset cache: train, validation, test or all")->capture_default_str();
  cmd.add_option("--out", s.out, "Output directory")->capture_default_str();
  cmd.add_option("--batch", s.batch_size, "Events per batch")->capture_default_str();
  cmd.add_option("--embed-dim", s.embed_dim, "Expected embedding width (0: from checkpoint)")->capture_default_str();
  cmd.add_option("--post-hidden", s.post_hidden, "Expected post hidden size (0: from checkpoint)")->capture_default_str();
  cmd.add_option("--event-hidden", s.event_hidden, "Expected event hidden size (0: from checkpoint)")->capture_default_str();
}

CorpusKind resolve_corpus_kind(const std::filesystem::path& path, const std::string& format) {
  if (format == "cache") return CorpusKind::cache;
  if (format == "auto") {
    if (std::filesystem::is_directory(path)) return CorpusKind::tree;
    return path.extension() == ".json" ? CorpusKind::cache : CorpusKind::jsonl;
  }
  data::InputFormat f;
  if (!data::parse_format(format, f)) throw ConfigError("unknown data format '" + format + "'");
  return f == data::InputFormat::flat_jsonl ? CorpusKind::jsonl : CorpusKind::tree;
}

std::vector<data::Event> load_raw(const std::filesystem::path& path, CorpusKind kind, data::LoadReport* report) {
  if (kind == CorpusKind::cache) throw ConfigError("a dataset cache is not a raw corpus");
  return data::load_events(path, kind == CorpusKind::tree ? data::InputFormat::event_tree_json
                                                           : data::InputFormat::flat_jsonl,
                           report);
}

}  // namespace hat::cli
