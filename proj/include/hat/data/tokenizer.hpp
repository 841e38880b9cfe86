#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hat::data {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";
inline constexpr std::string_view kNumberToken = "<num>";

// Lowercases ASCII, splits on whitespace and punctuation, and maps
//   http(s)://..., www.... -> <url>
//   @name                  -> <user>
//   digits only            -> <num>
// A hashtag keeps its word and drops the '#'. Every non-ASCII code point
// becomes its own token, which gives character-level tokens for Chinese.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace hat::data
