#include "hat/data/loader.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "hat/data/tokenizer.hpp"
#include "hat/errors.hpp"
#include "json.hpp"

namespace hat::data {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Label l) { return l == Label::rumor ? "rumor" : "non-rumor"; }

bool parse_label(std::string_view text, Label& out) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (t == "rumor" || t == "rumour" || t == "rumours" || t == "rumors" || t == "true" || t == "1") {
    out = Label::rumor;
    return true;
  }
  if (t == "nonrumor" || t == "nonrumour" || t == "nonrumours" || t == "nonrumors" ||
      t == "false" || t == "0") {
    out = Label::non_rumor;
    return true;
  }
  return false;
}

Event truncate_event(const Event& e, std::size_t k) {
  Event out;
  out.id = e.id;
  out.label = e.label;
  const std::size_t n = std::min(k, e.posts.size());
  out.posts.assign(e.posts.begin(), e.posts.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

double rumor_fraction(const std::vector<Event>& events) {
  if (events.empty()) return 0.0;
  const auto rumors = std::count_if(events.begin(), events.end(),
                                    [](const Event& e) { return e.label == Label::rumor; });
  return static_cast<double>(rumors) / static_cast<double>(events.size());
}

bool parse_format(std::string_view text, InputFormat& out) {
  if (text == "jsonl" || text == "flat-jsonl") {
    out = InputFormat::flat_jsonl;
    return true;
  }
  if (text == "tree" || text == "event-tree-json") {
    out = InputFormat::event_tree_json;
    return true;
  }
  return false;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool to_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool numeric_id(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool id_less(const std::string& a, const std::string& b) {
  if (numeric_id(a) && numeric_id(b) && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string json_id(const json& j) {
  if (j.contains("id_str") && j["id_str"].is_string()) return j["id_str"].get<std::string>();
  if (!j.contains("id")) return {};
  const json& id = j["id"];
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<std::int64_t>());
  if (id.is_number()) return json(id).dump();
  return {};
}

std::int64_t json_timestamp(const json& j) {
  if (!j.contains("created_at")) return 0;
  const json& t = j["created_at"];
  if (t.is_number_integer()) return t.get<std::int64_t>();
  if (t.is_number()) return static_cast<std::int64_t>(t.get<double>());
  if (t.is_string()) return parse_timestamp(t.get<std::string>());
  throw DataError("unsupported created_at value " + t.dump());
}

Post make_post(const json& j, bool is_source) {
  if (!j.is_object()) throw DataError("post is not a JSON object");
  Post p;
  p.id = json_id(j);
  if (j.contains("text") && j["text"].is_string()) {
    p.text = j["text"].get<std::string>();
  } else if (j.contains("full_text") && j["full_text"].is_string()) {
    p.text = j["full_text"].get<std::string>();
  } else {
    throw DataError("post '" + p.id + "' has no text field");
  }
  p.timestamp = json_timestamp(j);
  p.is_source = is_source;
  p.words = tokenize(p.text);
  return p;
}

// Drops empty posts and orders replies. Returns false when the source post is empty.
bool finalize(Event& e, LoadReport& report) {
  const auto before = e.posts.size();
  std::erase_if(e.posts, [](const Post& p) { return p.words.empty(); });
  report.dropped_empty_posts += before - e.posts.size();
  if (e.posts.empty() || !e.posts.front().is_source) return false;
  order_posts(e);
  return true;
}

json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw DataError("malformed JSON in " + file.string() + ": " + ex.what());
  }
}

std::vector<Event> load_jsonl(const fs::path& path, LoadReport& report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON: " + ex.what());
    }
    try {
      if (!j.is_object() || !j.contains("source")) {
        throw DataError("event has no source post");
      }
      Event e;
      e.id = json_id(j);
      if (e.id.empty()) e.id = json_id(j["source"]);
      Label label;
      const json* lj = j.contains("label") ? &j["label"] : nullptr;
      const bool has_label =
          lj && ((lj->is_string() && parse_label(lj->get<std::string>(), label)) ||
                 (lj->is_number_integer() && parse_label(std::to_string(lj->get<int>()), label)) ||
                 (lj->is_boolean() && parse_label(lj->get<bool>() ? "1" : "0", label)));
      if (!has_label) {
        ++report.skipped_missing_label;
        continue;
      }
      e.label = label;
      e.posts.push_back(make_post(j["source"], true));
      if (j.contains("replies")) {
        if (!j["replies"].is_array()) throw DataError("'replies' is not an array");
        for (const auto& r : j["replies"]) e.posts.push_back(make_post(r, false));
      }
      if (finalize(e, report)) events.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    } catch (const DataError& ex) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return events;
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().filename().string().front() != '.') {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool read_text_label(const fs::path& file, Label& out) {
  std::ifstream in(file);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_label(s, out);
}

bool tree_label(const fs::path& dir, const fs::path& root, Label& out) {
  if (fs::exists(dir / "label.txt") && read_text_label(dir / "label.txt", out)) return true;
  if (fs::exists(dir / "label.json")) {
    const json j = read_json_file(dir / "label.json");
    if (j.is_string() && parse_label(j.get<std::string>(), out)) return true;
    if (j.is_object() && j.contains("label") && j["label"].is_string() &&
        parse_label(j["label"].get<std::string>(), out)) {
      return true;
    }
  }
  if (fs::exists(dir / "annotation.json")) {
    const json j = read_json_file(dir / "annotation.json");
    if (j.is_object() && j.contains("is_rumour")) {
      const json& v = j["is_rumour"];
      if (v.is_string() && parse_label(v.get<std::string>(), out)) return true;
      if (v.is_number_integer() && parse_label(std::to_string(v.get<int>()), out)) return true;
    }
  }
  // Nearest ancestor (up to and including the root) named after a class.
  std::vector<std::string> names;
  for (const auto& part : dir.parent_path().lexically_relative(root)) names.push_back(part.string());
  names.insert(names.begin(), root.filename().string());
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    if (*it == "rumours" || *it == "rumors") {
      out = Label::rumor;
      return true;
    }
    if (*it == "non-rumours" || *it == "non-rumors" || *it == "nonrumours") {
      out = Label::non_rumor;
      return true;
    }
  }
  return false;
}

std::vector<Event> load_tree(const fs::path& root, LoadReport& report) {
  if (!fs::is_directory(root)) throw DataError(root.string() + " is not a directory");
  std::vector<fs::path> event_dirs;
  auto is_event_dir = [](const fs::path& d) {
    return fs::is_directory(d / "source-tweet") || fs::is_directory(d / "source-tweets");
  };
  if (is_event_dir(root)) event_dirs.push_back(root);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_directory() && is_event_dir(entry.path())) event_dirs.push_back(entry.path());
  }
  std::sort(event_dirs.begin(), event_dirs.end());

  std::vector<Event> events;
  for (const auto& dir : event_dirs) {
    Label label;
    if (!tree_label(dir, root, label)) {
      ++report.skipped_missing_label;
      continue;
    }
    auto sources = json_files(dir / "source-tweet");
    if (sources.empty()) sources = json_files(dir / "source-tweets");
    if (sources.empty()) throw DataError(dir.string() + ": no source post file");
    Event e;
    e.id = dir.filename().string();
    e.label = label;
    try {
      e.posts.push_back(make_post(read_json_file(sources.front()), true));
      for (const auto& f : json_files(dir / "reactions")) {
        Post p = make_post(read_json_file(f), false);
        if (p.id == e.posts.front().id) continue;  // some dumps repeat the source in reactions
        e.posts.push_back(std::move(p));
      }
    } catch (const json::exception& ex) {
      throw DataError(dir.string() + ": " + ex.what());
    }
    if (finalize(e, report)) events.push_back(std::move(e));
  }
  return events;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  std::int64_t v;
  if (to_int(text, v)) return v;
  // "Wed Oct 22 15:38:31 +0000 2014"
  std::istringstream is{std::string(text)};
  std::string dow, mon, day, clock, zone, year;
  if (!(is >> dow >> mon >> day >> clock >> zone >> year)) {
    throw DataError("unrecognised timestamp '" + std::string(text) + "'");
  }
  static constexpr std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  unsigned month = 0;
  for (unsigned i = 0; i < 12; ++i) {
    if (mon == kMonths[i]) month = i + 1;
  }
  std::int64_t d, y, hh, mm, ss, tz;
  if (month == 0 || !to_int(day, d) || !to_int(year, y) || clock.size() != 8 ||
      !to_int(clock.substr(0, 2), hh) || !to_int(clock.substr(3, 2), mm) ||
      !to_int(clock.substr(6, 2), ss) || zone.size() != 5 || !to_int(zone.substr(1), tz)) {
    throw DataError("unrecognised timestamp '" + std::string(text) + "'");
  }
  const std::int64_t offset = ((tz / 100) * 3600 + (tz % 100) * 60) * (zone[0] == '-' ? -1 : 1);
  return days_from_civil(y, month, static_cast<unsigned>(d)) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

void order_posts(Event& event) {
  auto source = std::find_if(event.posts.begin(), event.posts.end(), [](const Post& p) { return p.is_source; });
  if (source != event.posts.end() && source != event.posts.begin()) std::rotate(event.posts.begin(), source, source + 1);
  if (event.posts.size() < 2) return;
  std::stable_sort(event.posts.begin() + 1, event.posts.end(), [](const Post& a, const Post& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return id_less(a.id, b.id);
  });
}

std::vector<Event> load_events(const fs::path& path, InputFormat format, LoadReport* report) {
  LoadReport local;
  LoadReport& r = report ? *report : local;
  r = LoadReport{};
  std::vector<Event> events = format == InputFormat::flat_jsonl ? load_jsonl(path, r) : load_tree(path, r);
  r.loaded = events.size();
  return events;
}

void write_jsonl(const fs::path& path, const std::vector<Event>& events) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& e : events) {
    json j;
    j["id"] = e.id;
    j["label"] = std::string(to_string(e.label));
    auto post = [](const Post& p) {
      return json{{"id", p.id}, {"text", p.text}, {"created_at", p.timestamp}};
    };
    j["source"] = post(e.posts.front());
    j["replies"] = json::array();
    for (std::size_t i = 1; i < e.posts.size(); ++i) j["replies"].push_back(post(e.posts[i]));
    out << j.dump() << '\n';
  }
}

}  // namespace hat::data
