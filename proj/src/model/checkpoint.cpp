#include "hat/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "hat/errors.hpp"

namespace hat::model {

namespace {

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  template <class T>
  void pod(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  Reader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}
  template <class T>
  T pod() {
    T v{};
    read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    if (n > (1u << 24)) fail("string length out of range");
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  void read(char* dst, std::size_t n) {
    if (!in_.read(dst, static_cast<std::streamsize>(n))) fail("truncated file");
  }
  [[noreturn]] void fail(const std::string& why) const { throw DataError(path_ + ": " + why); }

 private:
  std::ifstream& in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  ck.model.validate();
  if (ck.vocabulary.size() != ck.model.embedding.vocab_size()) {
    throw ShapeError("vocabulary has " + std::to_string(ck.vocabulary.size()) + " entries but the embedding table has " +
                     std::to_string(ck.model.embedding.vocab_size()) + " rows");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  Writer w(out);
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  w.pod(kCheckpointVersion);
  w.pod<std::uint64_t>(ck.metadata.size());
  for (const auto& [k, v] : ck.metadata) {
    w.str(k);
    w.str(v);
  }
  w.pod<std::uint64_t>(ck.vocabulary.size());
  for (const auto& t : ck.vocabulary.tokens()) w.str(t);
  std::uint64_t count = 0;
  ck.model.for_each_parameter([&](const std::string&, const Tensor&) { ++count; });
  w.pod(count);
  ck.model.for_each_parameter([&](const std::string& name, const Tensor& t) {
    w.str(name);
    w.pod<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) w.pod<std::uint64_t>(d);
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  });
  if (!out) throw DataError("error while writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Reader r(in, path.string());
  char magic[sizeof kCheckpointMagic];
  r.read(magic, sizeof magic);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) r.fail("not a checkpoint file");
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion) r.fail("unsupported checkpoint version " + std::to_string(version));

  Checkpoint ck;
  const auto meta = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < meta; ++i) {
    std::string k = r.str();
    ck.metadata[k] = r.str();
  }
  const auto vocab = r.pod<std::uint64_t>();
  std::vector<std::string> tokens;
  for (std::uint64_t i = 0; i < vocab; ++i) tokens.push_back(r.str());
  try {
    ck.vocabulary = data::Vocabulary::from_tokens(std::move(tokens));
  } catch (const std::exception& ex) {
    r.fail(std::string("bad vocabulary: ") + ex.what());
  }

  std::map<std::string, Tensor> stored;
  const auto count = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = r.str();
    const auto rank = r.pod<std::uint32_t>();
    if (rank == 0 || rank > 2) r.fail("parameter '" + name + "' has rank " + std::to_string(rank));
    ad::Shape shape(rank);
    for (auto& d : shape) d = r.pod<std::uint64_t>();
    std::vector<double> values(ad::shape_size(shape));
    r.read(reinterpret_cast<char*>(values.data()), values.size() * sizeof(double));
    stored.emplace(std::move(name), Tensor(std::move(shape), std::move(values)));
  }

  auto take = [&](const std::string& name) {
    auto it = stored.find(name);
    if (it == stored.end()) r.fail("missing parameter '" + name + "'");
    Tensor t = std::move(it->second);
    stored.erase(it);
    return t;
  };
  HierarchicalModel& m = ck.model;
  m.for_each_parameter([&](const std::string& name, Tensor& t) { t = take(name); });
  if (!stored.empty()) r.fail("unexpected parameter '" + stored.begin()->first + "'");
  m.post_rnn.input_dim = m.post_rnn.forward.w_input.rows();
  m.post_rnn.hidden_dim = m.post_rnn.forward.w_hidden.rows();
  m.event_rnn.input_dim = m.event_rnn.forward.w_input.rows();
  m.event_rnn.hidden_dim = m.event_rnn.forward.w_hidden.rows();
  m.validate();
  if (ck.vocabulary.size() != m.embedding.vocab_size()) {
    throw ShapeError("checkpoint vocabulary has " + std::to_string(ck.vocabulary.size()) +
                     " entries but the embedding table has " + std::to_string(m.embedding.vocab_size()) + " rows");
  }
  return ck;
}

}  // namespace hat::model
