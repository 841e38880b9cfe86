#include "hat/data/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hat/errors.hpp"

namespace hat::data {

Vocabulary::Vocabulary() : tokens_{kPadToken, kUnknownToken} {
  ids_.emplace(kPadToken, kPadId);
  ids_.emplace(kUnknownToken, kUnknownId);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnknownToken) {
    throw DataError("vocabulary must start with the padding and unknown tokens");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.ids_.clear();
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.ids_.emplace(v.tokens_[i], static_cast<std::int32_t>(i)).second) {
      throw DataError("duplicate vocabulary token '" + v.tokens_[i] + "'");
    }
  }
  return v;
}

Vocabulary Vocabulary::build(const std::vector<Event>& events, std::size_t max_size) {
  if (max_size < 2) throw ConfigError("vocabulary max size must be at least 2");
  std::map<std::string, std::size_t> counts;
  for (const auto& e : events)
    for (const auto& p : e.posts)
      for (const auto& w : p.words) ++counts[w];
  counts.erase(kPadToken);
  counts.erase(kUnknownToken);
  if (counts.empty()) throw DataError("cannot build a vocabulary from an empty corpus");

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // std::map iteration is already lexicographic, so a stable sort by count keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t keep = std::min(ranked.size(), max_size - 2);
  Vocabulary v;
  for (std::size_t i = 0; i < keep; ++i) {
    v.ids_.emplace(ranked[i].first, static_cast<std::int32_t>(v.tokens_.size()));
    v.tokens_.push_back(ranked[i].first);
  }
  return v;
}

std::int32_t Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknownId : it->second;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::int32_t> Vocabulary::encode(const std::vector<std::string>& words) const {
  std::vector<std::int32_t> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

void Vocabulary::encode(std::vector<Event>& events) const {
  for (auto& e : events)
    for (auto& p : e.posts) p.tokens = encode(p.words);
}

}  // namespace hat::data
