#include "hat/data/tokenizer.hpp"

#include <algorithm>
#include <cctype>

namespace hat::data {
namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_word(unsigned char c) { return std::isalnum(c) != 0 || c == '_'; }

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

void emit_word(std::string& word, std::vector<std::string>& out) {
  if (word.empty()) return;
  const bool numeric = std::all_of(word.begin(), word.end(),
                                   [](unsigned char c) { return std::isdigit(c) != 0; });
  out.push_back(numeric ? std::string(kNumberToken) : word);
  word.clear();
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
  if (starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
      starts_with_ci(chunk, "www.")) {
    out.emplace_back(kUrlToken);
    return;
  }
  std::string word;
  std::size_t i = 0;
  while (i < chunk.size()) {
    const auto c = static_cast<unsigned char>(chunk[i]);
    if (c >= 0x80) {
      emit_word(word, out);
      const std::size_t len = std::min(utf8_length(c), chunk.size() - i);
      out.emplace_back(chunk.substr(i, len));
      i += len;
    } else if (c == '@' && word.empty() && i + 1 < chunk.size() &&
               is_word(static_cast<unsigned char>(chunk[i + 1]))) {
      ++i;
      while (i < chunk.size() && is_word(static_cast<unsigned char>(chunk[i]))) ++i;
      out.emplace_back(kUserToken);
    } else if (is_word(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    } else {
      emit_word(word, out);
      ++i;
    }
  }
  emit_word(word, out);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokenize_chunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

}  // namespace hat::data
