#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::data {

// Desk-scale corpus with a controllable label signal. Token pools are
// disjoint by construction: "rum<i>" rumor cues, "non<i>" non-rumor cues,
// "w<i>" neutral filler.
struct SyntheticSpec {
  std::size_t num_events = 1000;
  std::size_t rumor_pool = 20;
  std::size_t non_rumor_pool = 20;
  std::size_t neutral_pool = 300;
  // Probability that a post carries one cue token of its event's class.
  double signal_strength = 0.6;
  std::size_t min_posts = 4;
  std::size_t max_posts = 10;
  std::size_t min_words = 5;
  std::size_t max_words = 12;
  // Probability that an event's label is flipped after its text is drawn.
  double label_noise = 0.05;
  std::uint64_t seed = 7;
};

void validate(const SyntheticSpec& spec);

std::string rumor_cue(std::size_t i);
std::string non_rumor_cue(std::size_t i);
std::string neutral_word(std::size_t i);

// Events come back tokenized (Post::words filled) and source-first ordered.
std::vector<Event> gen_synthetic(const SyntheticSpec& spec);

}  // namespace hat::data
