// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails. Progress goes to stderr.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hat/data/loader.hpp"
#include "hat/data/split.hpp"
#include "hat/data/synthetic.hpp"
#include "hat/data/vocabulary.hpp"
#include "hat/eval/attack.hpp"
#include "hat/eval/landscape.hpp"
#include "hat/eval/predict.hpp"
#include "hat/model/forward.hpp"
#include "hat/simd/kernels.hpp"
#include "hat/train/perturbation.hpp"
#include "hat/train/trainer.hpp"

using namespace hat;
using ad::GradientMap;
using ad::Tape;
using ad::Tensor;
using data::Event;
using model::HierarchicalModel;
namespace fs = std::filesystem;

namespace {

// Synthetic corpus and training setup shared by the learning criteria.
constexpr std::uint64_t kCorpusSeed = 7;
constexpr std::size_t kCorpusEvents = 1000;
constexpr double kSignal = 0.6;
constexpr double kNoise = 0.05;
constexpr std::size_t kEmbedDim = 16;
constexpr std::size_t kHidden = 32;
constexpr double kLearningRate = 5e-3;
constexpr std::size_t kMaxEpochs = 50;
constexpr std::size_t kPatience = 10;
constexpr double kAttackEps = 1.0;
constexpr double kTrainEpsP = 0.3;
constexpr double kTrainEpsE = 0.3;
constexpr std::size_t kRobustSeeds = 5;
constexpr std::size_t kGridSteps = 51;
constexpr double kGridRange = 1.0;
constexpr std::uint64_t kDirectionSeed = 0;

constexpr double kFdStep = 1e-5;
constexpr double kFdFloor = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o, double seconds) {
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << "; " << std::fixed
            << std::setprecision(1) << seconds << " s)" << std::defaultfloat << std::endl;
}

void run_criterion(const std::string& name, const std::function<Outcome()>& body) {
  std::cerr << "[acceptance] " << name << " ..." << std::endl;
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(name, o, seconds_since(t0));
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

Tensor random_tensor(const ad::Shape& shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(shape);
  for (auto& v : t.values()) v = u(rng);
  return t;
}

std::vector<Event> random_events(std::size_t count, std::size_t vocab, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int32_t> tok(2, static_cast<std::int32_t>(vocab) - 1);
  std::uniform_int_distribution<std::size_t> np(1, 4), nw(1, 5);
  std::bernoulli_distribution coin(0.5);
  std::vector<Event> out(count);
  for (std::size_t e = 0; e < count; ++e) {
    out[e].id = "e" + std::to_string(e);
    out[e].label = coin(rng) ? data::Label::rumor : data::Label::non_rumor;
    const std::size_t posts = np(rng);
    for (std::size_t p = 0; p < posts; ++p) {
      data::Post post;
      post.id = out[e].id + "-" + std::to_string(p);
      post.is_source = p == 0;
      post.tokens.resize(nw(rng));
      for (auto& t : post.tokens) t = tok(rng);
      out[e].posts.push_back(std::move(post));
    }
  }
  return out;
}

void scale_parameters(HierarchicalModel& m, double factor) {
  m.for_each_parameter([&](const std::string& name, Tensor& t) {
    const std::size_t start = name == "embedding" ? t.cols() : 0;
    for (std::size_t i = start; i < t.size(); ++i) t[i] *= factor;
  });
}

double max_fd_error(Tensor& x, const Tensor& analytic, const std::function<double()>& loss) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kFdStep;
    const double up = loss();
    x[i] = saved - kFdStep;
    const double down = loss();
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * kFdStep);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / std::max({std::abs(analytic[i]), std::abs(numeric), kFdFloor}));
  }
  return worst;
}

double block_norm(const Tensor& t, const std::vector<std::size_t>& rows_of, std::size_t event) {
  double s = 0.0;
  for (std::size_t r = 0; r < rows_of.size(); ++r) {
    if (rows_of[r] != event) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) s += t.at(r, j) * t.at(r, j);
  }
  return std::sqrt(s);
}

double block_cosine(const Tensor& a, const Tensor& b, const std::vector<std::size_t>& rows_of, std::size_t event) {
  double s = 0.0;
  for (std::size_t r = 0; r < rows_of.size(); ++r) {
    if (rows_of[r] != event) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a.at(r, j) * b.at(r, j);
  }
  return s / (block_norm(a, rows_of, event) * block_norm(b, rows_of, event));
}

bool same_parameters(const HierarchicalModel& a, const HierarchicalModel& b) {
  bool same = true;
  a.for_each_parameter([&](const std::string& name, const Tensor& t) {
    b.for_each_parameter([&](const std::string& n, const Tensor& u) {
      if (n == name) same = same && ad::bitwise_equal(t, u);
    });
  });
  return same;
}

// ---------------------------------------------------------------------------

Outcome gradient_correctness() {
  double worst = 0.0;
  std::string worst_name;
  for (double spread : {1.0, 5.0}) {
    for (bool dropout : {false, true}) {
      HierarchicalModel m = HierarchicalModel::create({12, 4, 3, 3}, 11);
      scale_parameters(m, spread);
      std::mt19937_64 rng(12);
      const data::Batch batch = data::make_batch(random_events(2, 12, rng));
      std::mt19937_64 drng(13);
      const model::DropoutMasks masks = model::DropoutMasks::sample(batch, m, 0.5, drng);
      model::ForwardOptions opts;
      opts.alpha = 0.3;
      if (dropout) opts.dropout = &masks;

      Tape t;
      const model::ForwardResult r = model::forward(t, m, batch, opts);
      const GradientMap g = t.backward(r.loss_total);
      const Tensor word_grad = t.grad_wrt(r.loss_total, r.word_block);
      const Tensor post_grad = t.grad_wrt(r.loss_total, r.post_block);
      auto note = [&](double err, const std::string& what) {
        if (err > worst) {
          worst = err;
          worst_name = what;
        }
      };
      auto eval = [&](const model::ForwardOptions& o) {
        Tape u;
        return model::forward(u, m, batch, o).loss_total.value().item();
      };
      m.for_each_parameter([&](const std::string& name, Tensor& p) {
        note(max_fd_error(p, g.at(name), [&] { return eval(opts); }), name);
      });
      Tensor word_shift(r.word_block.shape());
      model::ForwardOptions wo = opts;
      wo.word_perturbation = &word_shift;
      note(max_fd_error(word_shift, word_grad, [&] { return eval(wo); }), model::kWordBlock);
      Tensor post_shift(r.post_block.shape());
      model::ForwardOptions po = opts;
      po.post_perturbation = &post_shift;
      note(max_fd_error(post_shift, post_grad, [&] { return eval(po); }), model::kPostBlock);
    }
  }
  return {worst < 1e-4, "max relative error " + fmt(worst, 3) + " at " + worst_name};
}

Outcome perturbation_contract() {
  double norm_err = 0.0, cos_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    HierarchicalModel m = HierarchicalModel::create({12, 4, 3, 3}, 100 + trial);
    scale_parameters(m, 1.0 + trial % 5);
    std::mt19937_64 rng(500 + trial);
    const data::Batch batch = data::make_batch(random_events(1 + trial % 6, 12, rng));
    const double eps_p = std::uniform_real_distribution<double>(0.01, 3.0)(rng);
    const double eps_e = std::uniform_real_distribution<double>(0.01, 3.0)(rng);
    const train::StandardPass p = train::standard_pass(m, batch, 0.1);
    const Tensor rp = train::post_perturbation(p.word_grad, batch, eps_p);
    const Tensor re = train::event_perturbation(p.post_grad, batch, eps_e);
    const auto word_rows = model::word_block_events(batch);
    const auto post_rows = model::post_block_events(batch);
    for (std::size_t e = 0; e < batch.num_events; ++e) {
      norm_err = std::max(norm_err, std::abs(block_norm(rp, word_rows, e) - eps_p));
      norm_err = std::max(norm_err, std::abs(block_norm(re, post_rows, e) - eps_e));
      cos_err = std::max(cos_err, std::abs(block_cosine(rp, p.word_grad, word_rows, e) - 1.0));
      cos_err = std::max(cos_err, std::abs(block_cosine(re, p.post_grad, post_rows, e) - 1.0));
    }
  }
  // Zero head weights cut every path from the inputs to the losses.
  HierarchicalModel flat = HierarchicalModel::create({12, 4, 3, 3}, 1);
  flat.post_head.weight = Tensor(flat.post_head.weight.shape());
  flat.event_head.weight = Tensor(flat.event_head.weight.shape());
  std::mt19937_64 rng(1);
  const data::Batch batch = data::make_batch(random_events(3, 12, rng));
  const train::StandardPass p = train::standard_pass(flat, batch, 0.1);
  const bool degenerate = p.word_grad.l2_norm() == 0.0 && p.post_grad.l2_norm() == 0.0 &&
                          train::post_perturbation(p.word_grad, batch, 1.0).l2_norm() == 0.0 &&
                          train::event_perturbation(p.post_grad, batch, 1.0).l2_norm() == 0.0;
  return {norm_err < 1e-9 && cos_err < 1e-9 && degenerate,
          "max norm error " + fmt(norm_err, 3) + ", max cosine error " + fmt(cos_err, 3) +
              (degenerate ? ", zero gradient gives zero perturbation" : ", degenerate case broken")};
}

struct Corpus {
  data::Vocabulary vocabulary;
  std::vector<Event> train, validation, test;
};

Corpus synthetic_corpus() {
  data::SyntheticSpec spec;
  spec.num_events = kCorpusEvents;
  spec.signal_strength = kSignal;
  spec.label_noise = kNoise;
  spec.seed = kCorpusSeed;
  const auto events = data::gen_synthetic(spec);
  auto parts = data::split(events, {}, kCorpusSeed);
  Corpus c;
  c.vocabulary = data::Vocabulary::build(parts.train);
  c.vocabulary.encode(parts.train);
  c.vocabulary.encode(parts.validation);
  c.vocabulary.encode(parts.test);
  c.train = std::move(parts.train);
  c.validation = std::move(parts.validation);
  c.test = std::move(parts.test);
  return c;
}

train::HatConfig learning_config(train::TrainMode mode, std::uint64_t seed) {
  train::HatConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  cfg.learning_rate = kLearningRate;
  cfg.max_epochs = kMaxEpochs;
  cfg.patience = kPatience;
  cfg.eps_p = kTrainEpsP;
  cfg.eps_e = kTrainEpsE;
  return cfg;
}

train::TrainState train_on(const Corpus& c, train::TrainMode mode, std::uint64_t seed) {
  const auto cfg = learning_config(mode, seed);
  auto m = HierarchicalModel::create({c.vocabulary.size(), kEmbedDim, kHidden, kHidden}, seed);
  return train::train(c.train, c.validation, std::move(m), cfg);
}

Outcome zero_eps_equivalence() {
  bool passes_exact = true;
  for (int trial = 0; trial < 20; ++trial) {
    HierarchicalModel m = HierarchicalModel::create({12, 4, 3, 3}, 900 + trial);
    scale_parameters(m, 3.0);
    std::mt19937_64 rng(900 + trial);
    const data::Batch batch = data::make_batch(random_events(1 + trial % 5, 12, rng));
    const model::DropoutMasks masks = model::DropoutMasks::sample(batch, m, trial % 2 ? 0.5 : 0.0, rng);
    const train::StandardPass p = train::standard_pass(m, batch, 0.1, &masks);
    const auto a = train::post_adv_pass(m, batch, train::post_perturbation(p.word_grad, batch, 0.0), 0.1, &masks);
    const auto b = train::event_adv_pass(m, batch, train::event_perturbation(p.post_grad, batch, 0.0), 0.1, &masks);
    passes_exact = passes_exact && ad::bitwise_equal(a.grad, p.grad) && ad::bitwise_equal(b.grad, p.grad_event);
  }

  data::SyntheticSpec spec;
  spec.num_events = 200;
  spec.seed = kCorpusSeed;
  auto events = data::gen_synthetic(spec);
  const auto vocab = data::Vocabulary::build(events);
  vocab.encode(events);
  const std::span<const Event> train_part(events.data(), 160), val_part(events.data() + 160, 40);
  train::HatConfig cfg = learning_config(train::TrainMode::full_hat, 3);
  cfg.eps_p = 0.0;
  cfg.eps_e = 0.0;
  cfg.max_epochs = 2;
  const auto fresh = [&] { return HierarchicalModel::create({vocab.size(), 8, 8, 8}, 3); };
  const auto hat_run = train::train(train_part, val_part, fresh(), cfg);
  train::TrainOptions opts;
  opts.step = [&](const HierarchicalModel& m, const data::Batch& batch, const model::DropoutMasks* d) {
    train::StandardPass p = train::standard_pass(m, batch, cfg.alpha, d);
    train::StepResult r;
    r.loss_total = p.loss_total;
    r.loss_post = p.loss_post;
    r.loss_event = p.loss_event;
    r.loss_post_adv = p.loss_total;
    r.loss_event_adv = p.loss_event;
    r.grad = train::combine_gradients(p.grad, &p.grad, &p.grad_event);
    return r;
  };
  const auto combined = train::train(train_part, val_part, fresh(), cfg, opts);
  bool trace_equal = hat_run.history.size() == combined.history.size();
  for (std::size_t i = 0; trace_equal && i < hat_run.history.size(); ++i) {
    const auto& x = hat_run.history[i].stats;
    const auto& y = combined.history[i].stats;
    trace_equal = x.loss_total == y.loss_total && x.loss_event == y.loss_event && x.loss_post == y.loss_post &&
                  x.loss_post_adv == x.loss_total && x.loss_event_adv == x.loss_event;
  }
  trace_equal = trace_equal && same_parameters(hat_run.model, combined.model);
  return {passes_exact && trace_equal,
          std::string(passes_exact ? "adversarial gradients equal clean gradients bitwise"
                                   : "adversarial gradients differ from clean gradients") +
              (trace_equal ? ", full-HAT trace equals the combined standard trace"
                           : ", full-HAT trace differs from the combined standard trace")};
}

Outcome first_order_ascent() {
  int word_up = 0, post_up = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const HierarchicalModel m = HierarchicalModel::create({30, 8, 6, 6}, 2000 + trial);
    std::mt19937_64 rng(3000 + trial);
    const data::Batch batch = data::make_batch(random_events(4, 30, rng));
    const train::StandardPass p = train::standard_pass(m, batch, 0.1);
    word_up += train::post_adv_pass(m, batch, train::post_perturbation(p.word_grad, batch, 1e-3), 0.1).loss >=
               p.loss_total;
    post_up += train::event_adv_pass(m, batch, train::event_perturbation(p.post_grad, batch, 1e-3), 0.1).loss >=
               p.loss_event;
  }
  const bool pass = word_up >= 190 && post_up >= 190;
  return {pass, "word level " + std::to_string(word_up) + "/200, post level " + std::to_string(post_up) + "/200"};
}

// Trained models reused by several criteria.
struct Trained {
  train::TrainState standard_e2e;
  std::map<std::pair<int, std::uint64_t>, HierarchicalModel> by_mode_seed;
};

Outcome end_to_end(const Corpus& c, Trained& t) {
  t.standard_e2e = train_on(c, train::TrainMode::standard, kCorpusSeed);
  const double acc = eval::evaluate(t.standard_e2e.best_model, c.test).accuracy;
  return {acc >= 0.95, "test accuracy " + fmt(acc) + " (best epoch " + std::to_string(t.standard_e2e.best_epoch) +
                           " of " + std::to_string(t.standard_e2e.epoch) + ", " + std::to_string(c.test.size()) +
                           " test events)"};
}

Outcome robustness_ordering(const Corpus& c, Trained& t) {
  const train::TrainMode modes[] = {train::TrainMode::standard, train::TrainMode::post_adv,
                                    train::TrainMode::event_adv, train::TrainMode::full_hat};
  std::map<int, double> clean, attacked;
  std::map<int, int> collapsed;
  for (std::uint64_t seed = 1; seed <= kRobustSeeds; ++seed) {
    for (train::TrainMode mode : modes) {
      const auto t0 = Clock::now();
      const auto state = train_on(c, mode, seed);
      const auto rep = eval::attack_report(state.best_model, c.test, kAttackEps);
      clean[static_cast<int>(mode)] += rep.clean.accuracy / kRobustSeeds;
      attacked[static_cast<int>(mode)] += rep.attacked.accuracy / kRobustSeeds;
      // Clean accuracy below 0.6 marks a chance-level run.
      if (rep.clean.accuracy < 0.6) ++collapsed[static_cast<int>(mode)];
      std::cerr << "  seed " << seed << ' ' << train::to_string(mode) << ": epochs " << state.epoch << ", clean "
                << rep.clean.accuracy << ", attacked " << rep.attacked.accuracy << " (" << fmt(seconds_since(t0), 3)
                << " s)" << std::endl;
      t.by_mode_seed.emplace(std::make_pair(static_cast<int>(mode), seed), state.best_model);
    }
  }
  const int s = static_cast<int>(train::TrainMode::standard), p = static_cast<int>(train::TrainMode::post_adv),
            e = static_cast<int>(train::TrainMode::event_adv), f = static_cast<int>(train::TrainMode::full_hat);
  const double drop_std = clean[s] - attacked[s], drop_full = clean[f] - attacked[f];
  const bool order = attacked[f] > attacked[p] && attacked[f] > attacked[e] && attacked[p] > attacked[s] &&
                     attacked[e] > attacked[s];
  const bool halved = drop_full <= 0.5 * drop_std;
  std::ostringstream d;
  d << "attacked accuracy standard " << fmt(attacked[s]) << ", post-adv " << fmt(attacked[p]) << ", event-adv "
    << fmt(attacked[e]) << ", full-HAT " << fmt(attacked[f]) << "; drop standard " << fmt(drop_std)
    << ", full-HAT " << fmt(drop_full) << "; clean full-HAT " << fmt(clean[f]) << ", chance-level runs full-HAT "
    << collapsed[f] << "/" << kRobustSeeds << ", post-adv " << collapsed[p] << ", event-adv " << collapsed[e]
    << ", standard " << collapsed[s] << (order ? "" : "; ordering violated") << (halved ? "" : "; drop not halved");
  return {order && halved, d.str()};
}

Outcome landscape_properties(const Corpus& c, const Trained& t) {
  const auto t0 = Clock::now();
  const HierarchicalModel& std_model = t.by_mode_seed.at({static_cast<int>(train::TrainMode::standard), 1});
  const HierarchicalModel& hat_model = t.by_mode_seed.at({static_cast<int>(train::TrainMode::full_hat), 1});
  const auto g_std = eval::landscape_scan(std_model, c.test, kGridRange, kGridSteps, kDirectionSeed);
  const auto g_hat = eval::landscape_scan(hat_model, c.test, kGridRange, kGridSteps, kDirectionSeed);
  const double elapsed = seconds_since(t0);
  const bool exact = g_std.center() == eval::mean_event_loss(std_model, c.test) &&
                     g_hat.center() == eval::mean_event_loss(hat_model, c.test);
  const bool shape = g_std.values.size() == kGridSteps * kGridSteps && g_hat.values.size() == kGridSteps * kGridSteps;
  const double dev_std = g_std.mean_abs_deviation(), dev_hat = g_hat.mean_abs_deviation();
  const bool flatter = dev_hat < dev_std;
  std::ostringstream d;
  d << "mean |f - f(0,0)| standard " << fmt(dev_std) << ", full-HAT " << fmt(dev_hat) << "; center "
    << (exact ? "exact" : "differs from clean loss") << "; " << kGridSteps << "x" << kGridSteps << " grids in "
    << fmt(elapsed, 3) << " s";
  return {exact && shape && flatter && elapsed < 600.0, d.str()};
}

Outcome early_detection_harness(const Corpus& c, const Trained& t) {
  const HierarchicalModel& m = t.standard_e2e.best_model;
  std::size_t longest = 0;
  for (const auto& e : c.test) longest = std::max(longest, e.posts.size());
  const auto clean = eval::evaluate(m, c.test);
  const auto at_max = eval::early_detection(m, c.test, {longest, longest + 5}).front();
  const bool equal = at_max.accuracy == clean.accuracy;

  const fs::path dir = fs::temp_directory_path() / "hat4rd_acceptance";
  fs::create_directories(dir);
  const auto curve = eval::early_detection(m, c.test, eval::default_k_list());
  eval::write_early_csv(dir / "early_detection.csv", curve);
  std::ifstream in(dir / "early_detection.csv");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  bool rows_ok = lines.size() == 10 && lines[0] == "k,accuracy";
  for (std::size_t i = 1; rows_ok && i < lines.size(); ++i) {
    rows_ok = lines[i].rfind(std::to_string(5 * i) + ",", 0) == 0;
  }
  return {equal && rows_ok, std::string("k = ") + std::to_string(longest) + (equal ? " matches" : " differs from") +
                                " evaluate; " + std::to_string(lines.size() > 0 ? lines.size() - 1 : 0) +
                                "-row CSV for k = 5..45"};
}

void pheme_run(const char* root) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    data::LoadReport report;
    auto events = data::load_events(root, data::InputFormat::event_tree_json, &report);
    const double rumor = data::rumor_fraction(events);
    const bool counts = events.size() == 5802 && std::abs(100.0 * rumor - 34.00) < 0.005;
    auto parts = data::split(events, {}, 1);
    const auto vocab = data::Vocabulary::build(parts.train);
    for (auto* p : {&parts.train, &parts.validation, &parts.test}) vocab.encode(*p);
    train::HatConfig cfg;
    cfg.mode = train::TrainMode::full_hat;
    auto m = HierarchicalModel::create({vocab.size(), 300, 100, 100}, cfg.seed);
    const auto state = train::train(parts.train, parts.validation, std::move(m), cfg);
    const double acc = eval::evaluate(state.best_model, parts.test).accuracy;
    o = {counts && acc > 0.795, std::to_string(events.size()) + " events, rumor " + fmt(100.0 * rumor) +
                                    "%, full-HAT test accuracy " + fmt(acc)};
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report("pheme-corpus", o, seconds_since(t0));
}

}  // namespace

int main() {
  std::cerr << "[acceptance] kernels: " << simd::backend_name(simd::active_backend()) << std::endl;
  run_criterion("gradient-correctness", gradient_correctness);
  run_criterion("perturbation-contract", perturbation_contract);
  run_criterion("zero-eps-equivalence", zero_eps_equivalence);
  run_criterion("first-order-ascent", first_order_ascent);

  const Corpus corpus = synthetic_corpus();
  Trained trained;
  run_criterion("end-to-end-learning", [&] { return end_to_end(corpus, trained); });
  run_criterion("robustness-ordering", [&] { return robustness_ordering(corpus, trained); });
  run_criterion("landscape-properties", [&] {
    if (trained.by_mode_seed.empty()) return Outcome{false, "no trained checkpoints"};
    return landscape_properties(corpus, trained);
  });
  run_criterion("early-detection-harness", [&] { return early_detection_harness(corpus, trained); });

  if (const char* pheme = std::getenv("HAT_PHEME_DIR")) {
    pheme_run(pheme);
  } else {
    std::cout << "SKIP  pheme-corpus  (set HAT_PHEME_DIR to an event-tree dump to run it)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
