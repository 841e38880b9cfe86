#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hat::data {

enum class Label : std::uint8_t { rumor, non_rumor };

// Column of a label in the two-way classifier output (rumor first).
inline constexpr std::size_t label_column(Label l) { return l == Label::rumor ? 0 : 1; }
inline constexpr Label label_from_column(std::size_t c) { return c == 0 ? Label::rumor : Label::non_rumor; }

std::string_view to_string(Label l);
// Accepts rumor/rumour/non-rumor/non-rumour/nonrumor/true/false/1/0 (case-insensitive).
bool parse_label(std::string_view text, Label& out);

struct Post {
  std::string id;
  std::string text;
  std::vector<std::string> words;  // tokenized text
  std::vector<std::int32_t> tokens;  // vocabulary ids, filled by Vocabulary::encode
  std::int64_t timestamp = 0;
  bool is_source = false;
};

// Source post at index 0, replies in timestamp order.
struct Event {
  std::string id;
  std::vector<Post> posts;
  Label label = Label::non_rumor;
};

// Event restricted to its first min(k, size) posts.
Event truncate_event(const Event& e, std::size_t k);

double rumor_fraction(const std::vector<Event>& events);

}  // namespace hat::data
