#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::data {

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnknownId = 1;
inline constexpr std::size_t kDefaultMaxVocab = 80000;

class Vocabulary {
 public:
  Vocabulary();

  // Rebuilds a vocabulary from its id-ordered token list (ids 0 and 1 must
  // be the padding and unknown markers).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  // Top (max_size - 2) tokens of the events by frequency, ties broken
  // lexicographically, after the padding and unknown entries.
  static Vocabulary build(const std::vector<Event>& events, std::size_t max_size = kDefaultMaxVocab);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::int32_t id(const std::string& token) const;
  const std::string& token(std::int32_t id) const;
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  std::vector<std::int32_t> encode(const std::vector<std::string>& words) const;
  // Fills Post::tokens for every post.
  void encode(std::vector<Event>& events) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnknownToken = "<unk>";

}  // namespace hat::data
