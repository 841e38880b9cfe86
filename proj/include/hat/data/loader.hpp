#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hat/data/event.hpp"

namespace hat::data {

enum class InputFormat { event_tree_json, flat_jsonl };

bool parse_format(std::string_view text, InputFormat& out);

struct LoadReport {
  std::size_t loaded = 0;
  std::size_t skipped_missing_label = 0;
  std::size_t dropped_empty_posts = 0;
};

// Loads events, tokenizes every post, drops empty posts and orders each
// event source-first with replies by (timestamp, id).
//
// flat_jsonl: one JSON object per line,
//   {"id": ..., "label": "rumor"|"non-rumor",
//    "source": {"id", "text", "created_at"}, "replies": [{...}, ...]}
// event_tree_json: a directory tree; every directory holding a
// "source-tweet" or "source-tweets" folder is one event, replies live in
// "reactions". The label comes from a "label.txt"/"label.json" file in the
// event directory, else an "annotation.json" with "is_rumour", else an
// ancestor directory named "rumours" or "non-rumours".
//
// Events without a label are skipped and counted; unreadable or malformed
// files throw DataError.
std::vector<Event> load_events(const std::filesystem::path& path, InputFormat format,
                               LoadReport* report = nullptr);

// Parses a JSON "created_at": integer seconds, numeric string, or the
// Twitter form "Wed Oct 22 15:38:31 +0000 2014".
std::int64_t parse_timestamp(std::string_view text);

// Sorts replies by (timestamp, id) behind the source post.
void order_posts(Event& event);

void write_jsonl(const std::filesystem::path& path, const std::vector<Event>& events);

}  // namespace hat::data
