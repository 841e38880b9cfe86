#include "hat/data/dataset_cache.hpp"

#include <fstream>

#include "hat/errors.hpp"
#include "json.hpp"

namespace hat::data {

using nlohmann::json;

namespace {

json events_to_json(const std::vector<Event>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    json posts = json::array();
    for (const auto& p : e.posts) {
      posts.push_back({{"id", p.id}, {"timestamp", p.timestamp}, {"source", p.is_source}, {"tokens", p.tokens}});
    }
    arr.push_back({{"id", e.id}, {"label", std::string(to_string(e.label))}, {"posts", std::move(posts)}});
  }
  return arr;
}

std::vector<Event> events_from_json(const json& arr, const Vocabulary& vocab) {
  std::vector<Event> out;
  for (const auto& j : arr) {
    Event e;
    e.id = j.at("id").get<std::string>();
    if (!parse_label(j.at("label").get<std::string>(), e.label)) throw DataError("bad label in cache");
    for (const auto& pj : j.at("posts")) {
      Post p;
      p.id = pj.at("id").get<std::string>();
      p.timestamp = pj.at("timestamp").get<std::int64_t>();
      p.is_source = pj.at("source").get<bool>();
      p.tokens = pj.at("tokens").get<std::vector<std::int32_t>>();
      for (auto t : p.tokens) p.words.push_back(vocab.token(t));
      e.posts.push_back(std::move(p));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

void write_dataset_cache(const std::filesystem::path& path, const TokenizedDataset& d) {
  json j;
  j["format"] = "hat4rd-tokenized";
  j["version"] = kDatasetCacheVersion;
  j["seed"] = d.seed;
  j["vocabulary"] = d.vocabulary.tokens();
  j["train"] = events_to_json(d.train);
  j["validation"] = events_to_json(d.validation);
  j["test"] = events_to_json(d.test);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump() << '\n';
}

TokenizedDataset read_dataset_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    const json j = json::parse(in);
    if (j.at("format") != "hat4rd-tokenized" || j.at("version").get<int>() != kDatasetCacheVersion) {
      throw DataError(path.string() + ": unsupported dataset cache format/version");
    }
    TokenizedDataset d;
    d.seed = j.at("seed").get<std::uint64_t>();
    d.vocabulary = Vocabulary::from_tokens(j.at("vocabulary").get<std::vector<std::string>>());
    d.train = events_from_json(j.at("train"), d.vocabulary);
    d.validation = events_from_json(j.at("validation"), d.vocabulary);
    d.test = events_from_json(j.at("test"), d.vocabulary);
    return d;
  } catch (const json::exception& ex) {
    throw DataError(path.string() + ": malformed dataset cache: " + ex.what());
  } catch (const std::out_of_range& ex) {
    throw DataError(path.string() + ": " + ex.what());
  }
}

}  // namespace hat::data
