#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "autopatch/corpus.hpp"
#include "autopatch/embedding.hpp"
#include "autopatch/error.hpp"
#include "autopatch/lexer.hpp"
#include "autopatch/process.hpp"
#include "autopatch/text.hpp"
#include "autopatch/vector_index.hpp"
#include "local_server.hpp"
#include "oracles.hpp"

using namespace autopatch;
using nlohmann::json;

namespace {

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::set<std::size_t> oracle_buckets(const std::string& text) {
  const auto toks = tokenize(text);
  std::set<std::size_t> out;
  if (toks.size() < 3) {
    std::string g;
    for (std::size_t i = 0; i < toks.size(); ++i) g += (i ? "\x1f" : "") + toks[i];
    out.insert(fnv(g) % 256);
    return out;
  }
  for (std::size_t i = 0; i + 2 < toks.size(); ++i) out.insert(fnv(toks[i] + "\x1f" + toks[i + 1] + "\x1f" + toks[i + 2]) % 256);
  return out;
}

EmbeddingVector vec(std::initializer_list<float> v) { return EmbeddingVector{std::vector<float>(v)}; }

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

IndexEntry entry(const std::string& id, std::vector<float> v) {
  return {id, EmbeddingVector{std::move(v)}, "diff " + id, "why " + id, SourceKind::CfgSerialization};
}

class ScriptedEmbedder final : public EmbeddingProvider {
 public:
  EmbeddingVector embed(std::string_view text) override {
    if (text.find("boom") != std::string_view::npos) throw Error(ErrorCode::ProviderUnavailable, "scripted failure");
    return LocalHashEmbedder().embed(text);
  }
  [[nodiscard]] std::string name() const override { return "scripted"; }
};

}  // namespace

TEST(Embedding, LocalIsDeterministicAndUnitNorm) {
  LocalHashEmbedder e;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    std::string text = "int main() { return " + std::to_string(rng()) + " + x; }";
    const EmbeddingVector a = embed_text(text, e);
    EXPECT_EQ(a, embed_text(text, e));
    EXPECT_EQ(a.dim(), kLocalEmbeddingDim);
    double n = 0;
    for (float v : a.values) n += double(v) * v;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-6);
  }
}

TEST(Embedding, BucketsMatchHashingOracle) {
  LocalHashEmbedder e;
  for (const char* text : {"a b", "int x = 1 ;", "for (int i = 0; i < n; ++i) s += i;", "x"}) {
    const EmbeddingVector v = e.embed(text);
    std::set<std::size_t> nonzero;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (v.values[i] != 0.0f) nonzero.insert(i);
    }
    EXPECT_EQ(nonzero, oracle_buckets(text)) << text;
  }
}

TEST(Embedding, DisjointGramsGiveZeroCosine) {
  LocalHashEmbedder e;
  int checked = 0;
  for (int i = 0; i < 40 && checked < 10; ++i) {
    const std::string a = "alpha" + std::to_string(i) + " beta gamma delta";
    const std::string b = "x" + std::to_string(i) + " + y * z - w";
    const auto ba = oracle_buckets(a), bb = oracle_buckets(b);
    bool disjoint = true;
    for (auto k : ba) disjoint = disjoint && bb.count(k) == 0;
    if (!disjoint) continue;
    EXPECT_EQ(cosine_similarity(e.embed(a), e.embed(b)), 0.0);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(Embedding, EmptyInputRejected) {
  LocalHashEmbedder e;
  EXPECT_EQ(error_of([&] { (void)embed_text(" \n\t", e); }), ErrorCode::EmptyInput);
}

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine_similarity(vec({0.3f, -2.0f, 5.0f}), vec({0.3f, -2.0f, 5.0f})), 1.0, 1e-12);
  EXPECT_EQ(cosine_similarity(vec({1, 0}), vec({0, 1})), 0.0);
  const double direct = (4 + 10 + 18) / (std::sqrt(14.0) * std::sqrt(77.0));
  EXPECT_NEAR(cosine_similarity(vec({1, 2, 3}), vec({4, 5, 6})), direct, 1e-12);
  EXPECT_NEAR(cosine_similarity(vec({1, 2, 3}), vec({4, 5, 6})), 0.9746, 1e-4);
  EXPECT_EQ(error_of([] { (void)cosine_similarity(vec({1, 2}), vec({1, 2, 3})); }), ErrorCode::DimMismatch);
  EXPECT_EQ(error_of([] { (void)cosine_similarity(vec({0, 0}), vec({1, 2})); }), ErrorCode::ZeroVector);
}

TEST(Index, SelfRetrievalAndTieBreak) {
  VectorIndex idx(3, SourceKind::CfgSerialization);
  idx.add(entry("p9", {1, 0, 0}));
  idx.add(entry("p2", {0, 1, 0}));
  idx.add(entry("p10", {0, 1, 0}));
  idx.add(entry("p3", {0, 0, 2}));
  const RetrievalHit self = retrieve_top1(idx, vec({1, 0, 0}));
  EXPECT_EQ(self.entry->record_id, "p9");
  EXPECT_NEAR(self.score, 1.0, 1e-12);
  EXPECT_EQ(retrieve_top1(idx, vec({0, 3, 0})).entry->record_id, "p10");  // "p10" < "p2"
  EXPECT_EQ(retrieve_top1_serial(idx, vec({0, 3, 0})).entry->record_id, "p10");
}

TEST(Index, Errors) {
  VectorIndex idx(2, SourceKind::RawSource);
  EXPECT_EQ(error_of([&] { (void)retrieve_top1(idx, vec({1, 0})); }), ErrorCode::EmptyIndex);
  idx.add(entry("a", {1, 1}));
  EXPECT_EQ(error_of([&] { (void)retrieve_top1(idx, vec({1, 0, 0})); }), ErrorCode::DimMismatch);
  EXPECT_EQ(error_of([&] { idx.add(entry("a", {1, 0})); }), ErrorCode::DuplicateId);
  EXPECT_EQ(error_of([&] { idx.add(entry("b", {1})); }), ErrorCode::DimMismatch);
  EXPECT_EQ(error_of([&] { idx.add(entry("c", {0, 0})); }), ErrorCode::ZeroVector);
  EXPECT_EQ(idx.entries()[0].source_kind, SourceKind::RawSource);
}

TEST(Index, ScaleInvariantArgmax) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> d;
  VectorIndex idx(16, SourceKind::CfgSerialization);
  for (int i = 0; i < 200; ++i) {
    std::vector<float> v(16);
    for (auto& x : v) x = d(rng);
    idx.add(entry("e" + std::to_string(i), v));
  }
  for (int q = 0; q < 30; ++q) {
    std::vector<float> v(16);
    for (auto& x : v) x = d(rng);
    const auto base = retrieve_top1(idx, EmbeddingVector{v});
    for (float s : {0.5f, 4.0f, 1024.0f}) {
      std::vector<float> w = v;
      for (auto& x : w) x *= s;
      EXPECT_EQ(retrieve_top1(idx, EmbeddingVector{w}).position, base.position);
    }
  }
}

TEST(Index, SaveLoadBitExact) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<float> d(-1, 1);
  VectorIndex idx(7, SourceKind::RawSource);
  for (int i = 0; i < 25; ++i) {
    std::vector<float> v(7);
    for (auto& x : v) x = d(rng);
    v[0] = i == 3 ? 1e-38f : v[0];
    idx.add({"r" + std::to_string(i), EmbeddingVector{v}, "ΔS: none\n\"quoted\"", "line1\nline2", SourceKind::RawSource});
  }
  TempDir dir;
  const auto path = dir.path() / "idx.jsonl";
  idx.save(path);
  const VectorIndex back = VectorIndex::load(path);
  EXPECT_EQ(back.dim(), 7u);
  EXPECT_EQ(back.source_kind(), SourceKind::RawSource);
  ASSERT_EQ(back.entries(), idx.entries());
  EXPECT_TRUE(std::filesystem::exists(VectorIndex::vector_blob_path(path)));
  EXPECT_EQ(std::filesystem::file_size(VectorIndex::vector_blob_path(path)), 25u * 7u * 4u);
  const json header = json::parse(text::split_lines(text::read_file(path)).at(0));
  EXPECT_EQ(header, (json{{"version", 1}, {"dim", 7}, {"source_kind", "raw_source"}, {"count", 25}}));
}

TEST(Index, BuildFromRecords) {
  std::vector<CodePair> pairs(5);
  std::vector<IndexRecord> records;
  for (int i = 0; i < 5; ++i) {
    pairs[i].id = "q" + std::to_string(i);
    pairs[i].original_code = "int main() { return " + std::to_string(i) + "; }";
  }
  for (int i = 0; i < 5; ++i) records.push_back({&pairs[i], "B0: -> succ:\nB1: " + std::to_string(i), "d", "r"});
  LocalHashEmbedder e;
  const VectorIndex ctx = build_index(records, e, SourceKind::CfgSerialization);
  const VectorIndex raw = build_index(records, e, SourceKind::RawSource, 1);
  ASSERT_EQ(ctx.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(ctx.entries()[i].record_id, pairs[i].id);
    EXPECT_EQ(ctx.entries()[i].vector, e.embed(records[i].cfg_text));
    EXPECT_EQ(raw.entries()[i].vector, e.embed(pairs[i].original_code));
  }
  records.push_back(records[2]);
  EXPECT_EQ(error_of([&] { (void)build_index(records, e, SourceKind::CfgSerialization); }), ErrorCode::DuplicateId);
  EXPECT_EQ(error_of([&] { (void)build_index({}, e, SourceKind::CfgSerialization); }), ErrorCode::EmptyIndex);
}

TEST(Index, ProviderErrorCarriesRecordId) {
  std::vector<CodePair> pairs(3);
  for (int i = 0; i < 3; ++i) pairs[i].id = "z" + std::to_string(i);
  std::vector<IndexRecord> records{{&pairs[0], "fine", "", ""}, {&pairs[1], "boom", "", ""}, {&pairs[2], "ok", "", ""}};
  ScriptedEmbedder e;
  try {
    (void)build_index(records, e, SourceKind::CfgSerialization);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ProviderUnavailable);
    EXPECT_NE(err.detail().find("record z1"), std::string::npos) << err.detail();
  }
}

TEST(Index, Top1MatchesLinearScanWithTies) {
  std::mt19937_64 rng(10);
  std::normal_distribution<float> d;
  const std::size_t dim = 24;
  VectorIndex idx(dim, SourceKind::CfgSerialization);
  std::vector<std::vector<float>> rows;
  std::vector<std::string> ids;
  for (int i = 0; i < 1000; ++i) {
    std::vector<float> v(dim);
    if (i % 10 == 9) {
      v = rows[rng() % rows.size()];  // exact duplicate vector, different id
    } else {
      for (auto& x : v) x = d(rng);
    }
    ids.push_back("id" + std::to_string(rng() % 1000000) + "_" + std::to_string(i));
    rows.push_back(v);
    idx.add(entry(ids.back(), v));
  }
  for (int q = 0; q < 100; ++q) {
    std::vector<float> v(dim);
    if (q % 3 == 0) {
      v = rows[rng() % rows.size()];
    } else {
      for (auto& x : v) x = d(rng);
    }
    const auto want = oracle::linear_scan(rows, ids, v);
    const auto got = retrieve_top1(idx, EmbeddingVector{v});
    EXPECT_EQ(got.position, want.position);
    EXPECT_EQ(retrieve_top1_serial(idx, EmbeddingVector{v}).position, want.position);
  }
}

TEST(RemoteEmbedder, PostsModelAndInput) {
  LocalServer srv;
  json seen;
  std::string auth;
  srv.server().Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"data":[{"embedding":[0.5,-1.25,2]}]})", "application/json");
  });
  srv.start();
  RemoteEmbeddingConfig cfg;
  cfg.base_url = srv.base_url();
  cfg.api_key = "k123";
  RemoteEmbedder e(cfg);
  EXPECT_EQ(e.embed("hello"), vec({0.5f, -1.25f, 2.0f}));
  EXPECT_EQ(seen, (json{{"model", "text-embedding-3-small"}, {"input", {"hello"}}}));
  EXPECT_EQ(auth, "Bearer k123");
}

TEST(RemoteEmbedder, FailuresAreProviderUnavailable) {
  LocalServer srv;
  srv.server().Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("nope", "text/plain");
  });
  srv.server().Post("/bad/embeddings", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"data":[]})", "application/json");
  });
  srv.start();
  for (const std::string& base : {srv.base_url(), srv.base_url("/bad"), std::string("http://127.0.0.1:1/v1"), std::string()}) {
    RemoteEmbeddingConfig cfg;
    cfg.base_url = base;
    cfg.timeout = std::chrono::seconds(5);
    RemoteEmbedder e(cfg);
    EXPECT_EQ(error_of([&] { (void)e.embed("x"); }), ErrorCode::ProviderUnavailable) << base;
  }
}
