#include "hat/data/synthetic.hpp"

#include <random>
#include <sstream>

#include "hat/data/tokenizer.hpp"
#include "hat/errors.hpp"

namespace hat::data {

std::string rumor_cue(std::size_t i) { return "rum" + std::to_string(i); }
std::string non_rumor_cue(std::size_t i) { return "non" + std::to_string(i); }
std::string neutral_word(std::size_t i) { return "w" + std::to_string(i); }

void validate(const SyntheticSpec& s) {
  if (s.num_events == 0) throw ConfigError("synthetic corpus needs at least one event");
  if (s.rumor_pool == 0 || s.non_rumor_pool == 0 || s.neutral_pool == 0) {
    throw ConfigError("synthetic token pools must be non-empty");
  }
  if (!(s.signal_strength >= 0.0 && s.signal_strength <= 1.0)) {
    throw ConfigError("signal strength must lie in [0, 1]");
  }
  if (!(s.label_noise >= 0.0 && s.label_noise <= 1.0)) throw ConfigError("label noise must lie in [0, 1]");
  if (s.min_posts == 0 || s.min_posts > s.max_posts) throw ConfigError("bad posts-per-event range");
  if (s.min_words == 0 || s.min_words > s.max_words) throw ConfigError("bad words-per-post range");
}

std::vector<Event> gen_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution signal(spec.signal_strength);
  std::bernoulli_distribution flip(spec.label_noise);
  std::uniform_int_distribution<std::size_t> posts_dist(spec.min_posts, spec.max_posts);
  std::uniform_int_distribution<std::size_t> words_dist(spec.min_words, spec.max_words);
  std::uniform_int_distribution<std::size_t> neutral(0, spec.neutral_pool - 1);
  std::uniform_int_distribution<std::size_t> rumor(0, spec.rumor_pool - 1);
  std::uniform_int_distribution<std::size_t> non_rumor(0, spec.non_rumor_pool - 1);
  std::uniform_int_distribution<std::int64_t> gap(1, 600);

  std::vector<Event> events;
  events.reserve(spec.num_events);
  for (std::size_t e = 0; e < spec.num_events; ++e) {
    Event ev;
    std::ostringstream id;
    id << "syn-" << spec.seed << '-' << e;
    ev.id = id.str();
    const Label truth = coin(rng) ? Label::rumor : Label::non_rumor;
    const std::size_t n_posts = posts_dist(rng);
    std::int64_t ts = 1'400'000'000 + static_cast<std::int64_t>(e) * 86400;
    for (std::size_t p = 0; p < n_posts; ++p) {
      std::vector<std::string> words(words_dist(rng));
      for (auto& w : words) w = neutral_word(neutral(rng));
      if (signal(rng)) {
        std::uniform_int_distribution<std::size_t> pos(0, words.size() - 1);
        words[pos(rng)] = truth == Label::rumor ? rumor_cue(rumor(rng)) : non_rumor_cue(non_rumor(rng));
      }
      Post post;
      post.id = ev.id + "-" + std::to_string(p);
      for (std::size_t i = 0; i < words.size(); ++i) post.text += (i ? " " : "") + words[i];
      post.words = tokenize(post.text);
      post.timestamp = ts;
      post.is_source = p == 0;
      ts += gap(rng);
      ev.posts.push_back(std::move(post));
    }
    ev.label = flip(rng) ? (truth == Label::rumor ? Label::non_rumor : Label::rumor) : truth;
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace hat::data
