#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "hat/data/batch.hpp"
#include "hat/data/dataset_cache.hpp"
#include "hat/data/loader.hpp"
#include "hat/data/split.hpp"
#include "hat/data/synthetic.hpp"
#include "hat/data/tokenizer.hpp"
#include "hat/data/vocabulary.hpp"
#include "hat/errors.hpp"
#include "test_support.hpp"

using namespace hat;
using namespace hat::data;
namespace fs = std::filesystem;

namespace {

using Words = std::vector<std::string>;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hat4rd_test_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream(path) << content;
}

Event words_event(const std::string& id, const std::vector<Words>& posts, Label label = Label::rumor) {
  Event e;
  e.id = id;
  e.label = label;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    Post p;
    p.id = id + std::to_string(i);
    p.words = posts[i];
    p.is_source = i == 0;
    e.posts.push_back(p);
  }
  return e;
}

std::vector<std::string> ids_of(const std::vector<Event>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(e.id);
  return out;
}

std::vector<std::string> post_ids(const Event& e) {
  std::vector<std::string> out;
  for (const auto& p : e.posts) out.push_back(p.id);
  return out;
}

}  // namespace

TEST_CASE("tokenizer") {
  CHECK(tokenize("Hello, World!") == Words{"hello", "world"});
  CHECK(tokenize("see http://t.co/abc and www.example.com") == Words{"see", "<url>", "and", "<url>"});
  CHECK(tokenize("@bob said 123 times") == Words{"<user>", "said", "<num>", "times"});
  CHECK(tokenize("#Breaking news") == Words{"breaking", "news"});
  CHECK(tokenize("a1b") == Words{"a1b"});
  CHECK(tokenize("谣言") == Words{"谣", "言"});
  CHECK(tokenize("") == Words{});
  CHECK(tokenize("  ...  ") == Words{});
}

TEST_CASE("labels") {
  Label l;
  CHECK((parse_label("Rumour", l) && l == Label::rumor));
  CHECK((parse_label("non-rumor", l) && l == Label::non_rumor));
  CHECK((parse_label("1", l) && l == Label::rumor));
  CHECK((parse_label("false", l) && l == Label::non_rumor));
  CHECK_FALSE(parse_label("maybe", l));
  CHECK(label_column(Label::rumor) == 0);
  CHECK(label_from_column(1) == Label::non_rumor);
}

TEST_CASE("vocabulary ordering") {
  const std::vector<Event> events{words_event("e", {{"a", "a", "b"}})};
  const Vocabulary v = Vocabulary::build(events);
  CHECK(v.size() == 4);
  CHECK(v.id(kPadToken) == kPadId);
  CHECK(v.id(kUnknownToken) == kUnknownId);
  CHECK(v.id("a") == 2);
  CHECK(v.id("b") == 3);
  CHECK(v.id("zzz") == kUnknownId);
  CHECK(v.encode(Words{"b", "q", "a"}) == std::vector<std::int32_t>{3, 1, 2});

  SUBCASE("ties are broken lexicographically") {
    const Vocabulary t = Vocabulary::build({words_event("e", {{"c", "b", "a", "c"}})});
    CHECK(t.tokens() == Words{kPadToken, kUnknownToken, "c", "a", "b"});
  }
  SUBCASE("max size keeps the most frequent tokens") {
    const Vocabulary t = Vocabulary::build({words_event("e", {{"x", "y", "y", "z", "z", "z"}})}, 4);
    CHECK(t.tokens() == Words{kPadToken, kUnknownToken, "z", "y"});
    CHECK(t.id("x") == kUnknownId);
  }
  SUBCASE("round trip through the token list") {
    CHECK(Vocabulary::from_tokens(v.tokens()) == v);
    CHECK_THROWS(Vocabulary::from_tokens(Words{"a", "b"}));
  }
}

TEST_CASE("split") {
  SyntheticSpec spec;
  spec.num_events = 200;
  const auto events = gen_synthetic(spec);
  const DatasetSplits s = split(events, {}, 3);
  CHECK(s.train.size() == 160);
  CHECK(s.validation.size() == 20);
  CHECK(s.test.size() == 20);

  std::set<std::string> seen;
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    for (const auto& e : *part) CHECK(seen.insert(e.id).second);
  }
  CHECK(seen.size() == events.size());

  const double corpus = rumor_fraction(events);
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    CHECK(std::abs(rumor_fraction(*part) - corpus) <= kLabelBalanceTolerance + 1e-12);
  }

  const DatasetSplits again = split(events, {}, 3);
  CHECK(ids_of(again.train) == ids_of(s.train));
  CHECK(ids_of(again.test) == ids_of(s.test));
  CHECK(s.seed_used >= 3);
  CHECK(ids_of(split(events, {}, s.seed_used).train) == ids_of(s.train));
  CHECK(ids_of(split(events, {}, 1000).train) != ids_of(s.train));

  std::vector<Event> few(events.begin(), events.begin() + 9);
  CHECK_THROWS_AS(split(few, {}, 1), DataError);
  CHECK_THROWS_AS(split(events, {0.5, 0.5, 0.5}, 1), ConfigError);
}

TEST_CASE("synthetic corpus") {
  SyntheticSpec spec;
  spec.num_events = 300;
  const auto a = gen_synthetic(spec);
  const auto b = gen_synthetic(spec);
  REQUIRE(a.size() == 300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].label == b[i].label);
    REQUIRE(a[i].posts.size() == b[i].posts.size());
    for (std::size_t p = 0; p < a[i].posts.size(); ++p) CHECK(a[i].posts[p].words == b[i].posts[p].words);
  }

  SUBCASE("posts and words stay inside the configured ranges") {
    for (const auto& e : a) {
      CHECK(e.posts.size() >= spec.min_posts);
      CHECK(e.posts.size() <= spec.max_posts);
      CHECK(e.posts.front().is_source);
      for (const auto& p : e.posts) {
        CHECK(p.words.size() >= spec.min_words);
        CHECK(p.words.size() <= spec.max_words);
      }
    }
  }

  auto has_cue = [](const Post& p, const std::string& prefix) {
    for (const auto& w : p.words) {
      if (w.rfind(prefix, 0) == 0) return true;
    }
    return false;
  };

  SUBCASE("full signal without noise is perfectly separable by cue majority") {
    SyntheticSpec s = spec;
    s.signal_strength = 1.0;
    s.label_noise = 0.0;
    for (const auto& e : gen_synthetic(s)) {
      std::size_t rum = 0, non = 0;
      for (const auto& p : e.posts) {
        rum += has_cue(p, "rum");
        non += has_cue(p, "non");
      }
      CHECK(rum + non == e.posts.size());
      CHECK((rum > non) == (e.label == Label::rumor));
    }
  }

  SUBCASE("cue rate follows the signal strength") {
    SyntheticSpec s = spec;
    s.num_events = 2000;
    s.signal_strength = 0.6;
    std::size_t cued = 0, total = 0;
    for (const auto& e : gen_synthetic(s)) {
      for (const auto& p : e.posts) {
        cued += has_cue(p, "rum") || has_cue(p, "non");
        ++total;
      }
    }
    CHECK(std::abs(static_cast<double>(cued) / total - 0.6) <= 0.02);
  }

  SUBCASE("label noise flips the expected fraction") {
    SyntheticSpec s = spec;
    s.num_events = 4000;
    s.signal_strength = 1.0;
    s.label_noise = 0.1;
    std::size_t flipped = 0;
    const auto events = gen_synthetic(s);
    for (const auto& e : events) flipped += has_cue(e.posts.front(), "rum") != (e.label == Label::rumor);
    CHECK(std::abs(static_cast<double>(flipped) / events.size() - 0.1) <= 0.02);
  }

  SUBCASE("invalid specs are rejected") {
    SyntheticSpec s = spec;
    s.signal_strength = 1.5;
    CHECK_THROWS_AS(gen_synthetic(s), ConfigError);
    s = spec;
    s.min_posts = 5;
    s.max_posts = 4;
    CHECK_THROWS_AS(gen_synthetic(s), ConfigError);
  }
}

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("1413992311") == 1413992311);
  CHECK(parse_timestamp("Wed Oct 22 15:38:31 +0000 2014") == 1413992311);
  CHECK(parse_timestamp("Wed Oct 22 16:38:31 +0100 2014") == 1413992311);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), DataError);
}

TEST_CASE("jsonl loader") {
  const fs::path dir = scratch_dir("jsonl");
  const fs::path file = dir / "events.jsonl";
  write_file(file,
             R"({"id":"e1","label":"rumor","source":{"id":"s","text":"Big news","created_at":100},)"
             R"("replies":[{"id":"b","text":"second","created_at":300},{"id":"a","text":"first","created_at":200},)"
             R"({"id":"d","text":"tie two","created_at":300},{"id":"c","text":"tie one","created_at":300},)"
             R"({"id":"z","text":"!!!","created_at":150}]})"
             "\n\n"
             R"({"id":"e2","source":{"id":"s2","text":"no label"}})"
             "\n"
             R"({"id":"e3","label":"non-rumour","source":{"id":"s3","text":"calm","created_at":"Wed Oct 22 15:38:31 +0000 2014"}})"
             "\n");
  LoadReport report;
  const auto events = load_events(file, InputFormat::flat_jsonl, &report);
  REQUIRE(events.size() == 2);
  CHECK(report.skipped_missing_label == 1);
  CHECK(report.dropped_empty_posts == 1);
  CHECK(events[0].id == "e1");
  CHECK(events[0].label == Label::rumor);
  CHECK(post_ids(events[0]) == Words{"s", "a", "b", "c", "d"});
  CHECK(events[0].posts[0].words == Words{"big", "news"});
  CHECK(events[1].label == Label::non_rumor);
  CHECK(events[1].posts[0].timestamp == 1413992311);

  write_file(dir / "bad.jsonl", "{\"id\": \n");
  CHECK_THROWS_AS(load_events(dir / "bad.jsonl", InputFormat::flat_jsonl), DataError);
  CHECK_THROWS_AS(load_events(dir / "missing.jsonl", InputFormat::flat_jsonl), DataError);

  SUBCASE("write_jsonl round trip") {
    write_jsonl(dir / "out.jsonl", events);
    const auto back = load_events(dir / "out.jsonl", InputFormat::flat_jsonl);
    REQUIRE(back.size() == events.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].id == events[i].id);
      CHECK(back[i].label == events[i].label);
      CHECK(post_ids(back[i]) == post_ids(events[i]));
    }
  }
}

TEST_CASE("event tree loader") {
  const fs::path root = scratch_dir("tree");
  auto tweet = [](const std::string& id, const std::string& text, const std::string& when) {
    return R"({"id_str":")" + id + R"(","text":")" + text + R"(","created_at":")" + when + R"("})";
  };
  write_file(root / "rumours" / "100" / "source-tweet" / "100.json",
             tweet("100", "claim made", "Wed Oct 22 15:00:00 +0000 2014"));
  write_file(root / "rumours" / "100" / "reactions" / "99.json", tweet("99", "late", "Wed Oct 22 16:00:00 +0000 2014"));
  write_file(root / "rumours" / "100" / "reactions" / "1000.json", tweet("1000", "tie b", "Wed Oct 22 15:30:00 +0000 2014"));
  write_file(root / "rumours" / "100" / "reactions" / "200.json", tweet("200", "tie a", "Wed Oct 22 15:30:00 +0000 2014"));
  write_file(root / "rumours" / "100" / "reactions" / "100.json", tweet("100", "claim made", "Wed Oct 22 15:00:00 +0000 2014"));
  write_file(root / "non-rumours" / "300" / "source-tweet" / "300.json", tweet("300", "weather", "1413990000"));
  write_file(root / "unlabelled" / "400" / "source-tweet" / "400.json", tweet("400", "who knows", "1413990000"));
  write_file(root / "other" / "500" / "source-tweets" / "500.json", tweet("500", "labelled by file", "1413990000"));
  write_file(root / "other" / "500" / "annotation.json", R"({"is_rumour":"rumour"})");

  LoadReport report;
  const auto events = load_events(root, InputFormat::event_tree_json, &report);
  REQUIRE(events.size() == 3);
  CHECK(report.skipped_missing_label == 1);
  CHECK(ids_of(events) == Words{"300", "500", "100"});
  CHECK(events[0].label == Label::non_rumor);
  CHECK(events[1].label == Label::rumor);
  CHECK(events[2].label == Label::rumor);
  CHECK(post_ids(events[2]) == Words{"100", "200", "1000", "99"});
  CHECK_THROWS_AS(load_events(root / "nope", InputFormat::event_tree_json), DataError);
}

TEST_CASE("batches") {
  std::mt19937_64 rng(5);
  auto events = hat::testing::random_events(7, 20, rng, 5, 6);
  const Batch b = make_batch(events);
  CHECK(b.num_events == 7);
  std::size_t posts = 0, max_len = 0, max_posts = 0;
  for (const auto& e : events) {
    posts += e.posts.size();
    max_posts = std::max(max_posts, e.posts.size());
    for (const auto& p : e.posts) max_len = std::max(max_len, p.tokens.size());
  }
  CHECK(b.num_posts == posts);
  CHECK(b.max_post_len == max_len);
  CHECK(b.max_event_len == max_posts);

  for (std::size_t e = 0; e < b.num_events; ++e) {
    CHECK(b.labels[e] == events[e].label);
    CHECK(b.event_ids[e] == events[e].id);
    std::size_t active = 0;
    for (std::size_t n = 0; n < b.max_event_len; ++n) active += b.post_mask[e * b.max_event_len + n];
    CHECK(active == events[e].posts.size());
    for (std::size_t n = 0; n < b.max_event_len; ++n) {
      const std::int64_t row = b.post_row(e, n);
      if (n >= events[e].posts.size()) {
        CHECK(row == -1);
        continue;
      }
      const auto& toks = events[e].posts[n].tokens;
      CHECK(b.post_event[row] == e);
      CHECK(b.post_lengths[row] == toks.size());
      std::size_t len = 0;
      for (std::size_t t = 0; t < b.max_post_len; ++t) {
        const std::size_t i = row * b.max_post_len + t;
        len += b.token_mask[i];
        CHECK(b.tokens[i] == (t < toks.size() ? toks[t] : kPadId));
      }
      CHECK(len == toks.size());
    }
  }

  SUBCASE("truncation limits") {
    const Batch t = make_batch(events, {2, 3});
    CHECK(t.max_post_len <= 2);
    CHECK(t.max_event_len <= 3);
    for (std::size_t e = 0; e < t.num_events; ++e) CHECK(t.event_lengths[e] == std::min<std::size_t>(3, events[e].posts.size()));
  }
  SUBCASE("consecutive batches") {
    const auto parts = make_batches(events, 3);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].num_events == 3);
    CHECK(parts[2].num_events == 1);
    CHECK(parts[2].event_ids[0] == events[6].id);
  }
  SUBCASE("malformed events are rejected") {
    std::vector<Event> bad{events[0]};
    bad[0].posts[0].tokens.clear();
    CHECK_THROWS_AS(make_batch(bad), DataError);
    bad[0].posts.clear();
    CHECK_THROWS_AS(make_batch(bad), DataError);
  }
  SUBCASE("truncate_event keeps a prefix") {
    const Event t = truncate_event(events[0], 1);
    CHECK(t.posts.size() == 1);
    CHECK(t.posts[0].id == events[0].posts[0].id);
    CHECK(truncate_event(events[0], 100).posts.size() == events[0].posts.size());
  }
}

TEST_CASE("dataset cache round trip") {
  SyntheticSpec spec;
  spec.num_events = 60;
  auto events = gen_synthetic(spec);
  const DatasetSplits s = split(events, {}, 11);
  TokenizedDataset d;
  d.seed = s.seed_used;
  d.vocabulary = Vocabulary::build(s.train);
  d.train = s.train;
  d.validation = s.validation;
  d.test = s.test;
  for (auto* part : {&d.train, &d.validation, &d.test}) d.vocabulary.encode(*part);

  const fs::path dir = scratch_dir("cache");
  write_dataset_cache(dir / "dataset.json", d);
  const TokenizedDataset back = read_dataset_cache(dir / "dataset.json");
  CHECK(back.seed == d.seed);
  CHECK(back.vocabulary == d.vocabulary);
  auto same = [](const std::vector<Event>& a, const std::vector<Event>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == b[i].id);
      CHECK(a[i].label == b[i].label);
      REQUIRE(a[i].posts.size() == b[i].posts.size());
      for (std::size_t p = 0; p < a[i].posts.size(); ++p) {
        CHECK(a[i].posts[p].id == b[i].posts[p].id);
        CHECK(a[i].posts[p].tokens == b[i].posts[p].tokens);
        CHECK(a[i].posts[p].timestamp == b[i].posts[p].timestamp);
      }
    }
  };
  same(back.train, d.train);
  same(back.validation, d.validation);
  same(back.test, d.test);

  write_file(dir / "wrong.json", R"({"version": 99})");
  CHECK_THROWS_AS(read_dataset_cache(dir / "wrong.json"), DataError);
}
