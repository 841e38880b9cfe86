#include "hat/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "hat/cli/run_config.hpp"
#include "hat/data/dataset_cache.hpp"
#include "hat/data/split.hpp"
#include "hat/data/synthetic.hpp"
#include "hat/data/vocabulary.hpp"
#include "hat/errors.hpp"
#include "hat/eval/attack.hpp"
#include "hat/eval/landscape.hpp"
#include "hat/eval/predict.hpp"
#include "hat/model/checkpoint.hpp"
#include "hat/model/pretrained.hpp"
#include "json.hpp"

namespace hat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path prepare_out(const std::string& dir) {
  const fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void write_resolved_config(const CLI::App& app, const fs::path& dir) {
  write_text(dir / "config.toml", app.config_to_str(true, false));
}

json metrics_json(const eval::Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"tp", m.counts.tp},
          {"fp", m.counts.fp},
          {"tn", m.counts.tn},
          {"fn", m.counts.fn}};
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

// ---------------------------------------------------------------------------

void cmd_train(const CLI::App& app, const TrainSettings& s, std::ostream& out) {
  require(s.data, "--data");
  const train::HatConfig config = s.resolved();
  const fs::path dir = prepare_out(s.out);
  write_resolved_config(app, dir);

  data::TokenizedDataset ds;
  const CorpusKind kind = resolve_corpus_kind(s.data, s.format);
  if (kind == CorpusKind::cache) {
    ds = data::read_dataset_cache(s.data);
  } else {
    data::LoadReport report;
    const auto events = load_raw(s.data, kind, &report);
    out << "loaded " << report.loaded << " events (" << report.skipped_missing_label << " without label skipped, "
        << report.dropped_empty_posts << " empty posts dropped), rumor fraction " << std::fixed
        << std::setprecision(4) << data::rumor_fraction(events) << std::defaultfloat << '\n';
    auto parts = data::split(events, {}, config.seed);
    ds.seed = parts.seed_used;
    ds.vocabulary = data::Vocabulary::build(parts.train, s.max_vocab);
    ds.vocabulary.encode(parts.train);
    ds.vocabulary.encode(parts.validation);
    ds.vocabulary.encode(parts.test);
    ds.train = std::move(parts.train);
    ds.validation = std::move(parts.validation);
    ds.test = std::move(parts.test);
  }
  data::write_dataset_cache(dir / "dataset.json", ds);

  model::ModelDims dims = s.dims;
  dims.vocab_size = ds.vocabulary.size();
  auto m = model::HierarchicalModel::create(dims, config.seed);
  if (!s.pretrained.empty()) {
    const auto n = model::load_pretrained(s.pretrained, ds.vocabulary, m.embedding);
    out << "pretrained vectors for " << n << " of " << dims.vocab_size << " tokens\n";
  }
  out << "train/validation/test: " << ds.train.size() << '/' << ds.validation.size() << '/' << ds.test.size()
      << ", vocabulary " << dims.vocab_size << ", " << m.parameter_count() << " parameters\n";

  std::ofstream log(dir / "train_log.jsonl");
  if (!log) throw DataError("cannot write " + (dir / "train_log.jsonl").string());
  train::TrainOptions topts;
  topts.log = &log;
  const auto state = train::train(ds.train, ds.validation, std::move(m), config, topts);

  model::Checkpoint ck{state.best_model, ds.vocabulary, {}};
  ck.metadata["mode"] = train::to_string(config.mode);
  ck.metadata["seed"] = std::to_string(config.seed);
  ck.metadata["best_epoch"] = std::to_string(state.best_epoch);
  ck.metadata["epochs_run"] = std::to_string(state.epoch);
  model::save_checkpoint(dir / "checkpoint.bin", ck);

  eval::EvalOptions eopts;
  eopts.batch_size = config.batch_size;
  eopts.batch = config.batch;
  const auto test = eval::evaluate(state.best_model, ds.test, eopts);
  json summary = {{"mode", train::to_string(config.mode)},
                  {"epochs_run", state.epoch},
                  {"best_epoch", state.best_epoch},
                  {"best_val_accuracy", state.best_val_accuracy},
                  {"stopped_early", state.stopped_early},
                  {"test", metrics_json(test)}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  out << "best epoch " << state.best_epoch << " of " << state.epoch << ", validation accuracy "
      << state.best_val_accuracy << ", test accuracy " << test.accuracy << '\n';
}

struct LoadedEval {
  model::Checkpoint checkpoint;
  std::vector<data::Event> events;
  eval::EvalOptions options;
};

LoadedEval load_for_eval(const EvalSettings& s) {
  require(s.checkpoint, "--checkpoint");
  require(s.data, "--data");
  if (s.batch_size == 0) throw ConfigError("--batch must be positive");
  LoadedEval le;
  le.checkpoint = model::load_checkpoint(s.checkpoint);
  const auto have = le.checkpoint.model.dims();
  model::ModelDims want = have;
  if (s.embed_dim) want.embed_dim = s.embed_dim;
  if (s.post_hidden) want.post_hidden = s.post_hidden;
  if (s.event_hidden) want.event_hidden = s.event_hidden;
  if (want != have) {
    throw ShapeError("configured model (" + model::to_string(want) + ") does not match checkpoint (" +
                     model::to_string(have) + ")");
  }
  const CorpusKind kind = resolve_corpus_kind(s.data, s.format);
  if (kind == CorpusKind::cache) {
    auto ds = data::read_dataset_cache(s.data);
    if (!(ds.vocabulary == le.checkpoint.vocabulary)) {
      throw ShapeError("dataset cache vocabulary (" + std::to_string(ds.vocabulary.size()) +
                       " tokens) differs from the checkpoint vocabulary (" +
                       std::to_string(le.checkpoint.vocabulary.size()) + " tokens)");
    }
    if (s.split == "train") le.events = std::move(ds.train);
    else if (s.split == "validation") le.events = std::move(ds.validation);
    else if (s.split == "test") le.events = std::move(ds.test);
    else if (s.split == "all") {
      le.events = std::move(ds.train);
      le.events.insert(le.events.end(), ds.validation.begin(), ds.validation.end());
      le.events.insert(le.events.end(), ds.test.begin(), ds.test.end());
    } else {
      throw ConfigError("unknown split '" + s.split + "'");
    }
  } else {
    le.events = load_raw(s.data, kind, nullptr);
    le.checkpoint.vocabulary.encode(le.events);
  }
  if (le.events.empty()) throw DataError("no events to evaluate");
  le.options.batch_size = s.batch_size;
  return le;
}

void cmd_eval(const CLI::App& app, const EvalSettings& s, std::ostream& out) {
  const auto le = load_for_eval(s);
  const fs::path dir = prepare_out(s.out);
  write_resolved_config(app, dir);
  const auto& m = le.checkpoint.model;
  const auto metrics = eval::evaluate(m, le.events, le.options);
  const auto ks = s.k_list.empty() ? eval::default_k_list() : s.k_list;
  const auto curve = eval::early_detection(m, le.events, ks, le.options);
  write_text(dir / "metrics.json", json{{"events", le.events.size()}, {"metrics", metrics_json(metrics)}}.dump(2) + "\n");
  eval::write_early_csv(dir / "early_detection.csv", curve);
  out << "events " << le.events.size() << " accuracy " << metrics.accuracy << " macro-F1 " << metrics.macro_f1
      << " rumor-F1 " << metrics.f1 << '\n';
}

void cmd_attack(const CLI::App& app, const EvalSettings& s, std::ostream& out) {
  const auto le = load_for_eval(s);
  const fs::path dir = prepare_out(s.out);
  write_resolved_config(app, dir);
  const auto rep = eval::attack_report(le.checkpoint.model, le.events, s.eps, le.options);
  const json j = {{"epsilon", rep.epsilon},
                  {"events", le.events.size()},
                  {"clean", metrics_json(rep.clean)},
                  {"attacked", metrics_json(rep.attacked)},
                  {"degradation", rep.degradation},
                  {"flipped", rep.flipped}};
  write_text(dir / "attack.json", j.dump(2) + "\n");
  out << "clean accuracy " << rep.clean.accuracy << " attacked accuracy " << rep.attacked.accuracy
      << " degradation " << rep.degradation << '\n';
}

void cmd_landscape(const CLI::App& app, const EvalSettings& s, std::ostream& out) {
  const auto le = load_for_eval(s);
  const fs::path dir = prepare_out(s.out);
  write_resolved_config(app, dir);
  const auto grid = eval::landscape_scan(le.checkpoint.model, le.events, s.range, s.steps, s.seed, le.options);
  eval::write_landscape_csv(dir / "landscape.csv", grid);
  eval::write_landscape_meta(dir / "landscape.meta.json", grid, fs::absolute(s.checkpoint).string());
  out << "grid " << grid.steps << 'x' << grid.steps << " center loss " << grid.center() << " mean |f - f(0,0)| "
      << grid.mean_abs_deviation() << '\n';
}

void cmd_gen_synthetic(const CLI::App& app, const data::SyntheticSpec& spec, const std::string& out_dir,
                       std::ostream& out) {
  const fs::path dir = prepare_out(out_dir);
  write_resolved_config(app, dir);
  const auto events = data::gen_synthetic(spec);
  data::write_jsonl(dir / "synthetic.jsonl", events);
  out << "wrote " << events.size() << " events to " << (dir / "synthetic.jsonl").string() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Hierarchical adversarial training for two-level rumor classification", "hat4rd");
  app.set_config("--config", "", "TOML file with one [subcommand] section; flags override it");
  app.require_subcommand(1);

  TrainSettings train_s;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write checkpoint, log and resolved config");
  add_train_options(*train_cmd, train_s);

  EvalSettings eval_s;
  auto* eval_cmd = app.add_subcommand("eval", "Metrics and early-detection curve of a checkpoint");
  add_data_options(*eval_cmd, eval_s);
  eval_cmd->add_option("--k", eval_s.k_list, "Prefix lengths (default 5 10 ... 45)");

  EvalSettings attack_s;
  auto* attack_cmd = app.add_subcommand("attack", "Accuracy under a gradient attack on word vectors");
  add_data_options(*attack_cmd, attack_s);
  attack_cmd->add_option("--eps", attack_s.eps, "Attack norm per event")->capture_default_str();

  EvalSettings land_s;
  auto* land_cmd = app.add_subcommand("landscape", "Loss grid along two random filter-normalized directions");
  add_data_options(*land_cmd, land_s);
  land_cmd->add_option("--range", land_s.range, "Half-width of both axes")->capture_default_str();
  land_cmd->add_option("--steps", land_s.steps, "Points per axis (odd)")->capture_default_str();
  land_cmd->add_option("--seed", land_s.seed, "Direction seed")->capture_default_str();

  data::SyntheticSpec spec;
  std::string syn_out = "synthetic";
  auto* syn_cmd = app.add_subcommand("gen-synthetic", "Write a synthetic labeled corpus as jsonl");
  syn_cmd->add_option("--events", spec.num_events, "Number of events")->capture_default_str();
  syn_cmd->add_option("--rumor-pool", spec.rumor_pool, "Rumor cue tokens")->capture_default_str();
  syn_cmd->add_option("--non-rumor-pool", spec.non_rumor_pool, "Non-rumor cue tokens")->capture_default_str();
  syn_cmd->add_option("--neutral-pool", spec.neutral_pool, "Neutral tokens")->capture_default_str();
  syn_cmd->add_option("--signal", spec.signal_strength, "Cue probability per post")->capture_default_str();
  syn_cmd->add_option("--min-posts", spec.min_posts, "Fewest posts per event")->capture_default_str();
  syn_cmd->add_option("--max-posts", spec.max_posts, "Most posts per event")->capture_default_str();
  syn_cmd->add_option("--min-words", spec.min_words, "Fewest words per post")->capture_default_str();
  syn_cmd->add_option("--max-words", spec.max_words, "Most words per post")->capture_default_str();
  syn_cmd->add_option("--noise", spec.label_noise, "Label flip probability")->capture_default_str();
  syn_cmd->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  syn_cmd->add_option("--out", syn_out, "Output directory")->capture_default_str();

  for (auto* c : {train_cmd, eval_cmd, attack_cmd, land_cmd, syn_cmd}) c->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*train_cmd) cmd_train(app, train_s, out);
    else if (*eval_cmd) cmd_eval(app, eval_s, out);
    else if (*attack_cmd) cmd_attack(app, attack_s, out);
    else if (*land_cmd) cmd_landscape(app, land_s, out);
    else if (*syn_cmd) cmd_gen_synthetic(app, spec, syn_out, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ShapeError& e) {
    err << "shape mismatch: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace hat::cli
