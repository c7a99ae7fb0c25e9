#include <gtest/gtest.h>

#include <map>
#include <random>

#include "autopatch/error.hpp"
#include "autopatch/lexer.hpp"
#include "autopatch/metrics.hpp"
#include "autopatch/text.hpp"
#include "oracles.hpp"

using namespace autopatch;

namespace {

using Strings = std::vector<std::string>;

std::string random_code(std::mt19937_64& rng, std::size_t max_len) {
  static const std::string kAlphabet = "ab xy(){};=+\n\t/*1";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, kAlphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char& c : s) c = kAlphabet[ch(rng)];
  return s;
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(Lexer, SpecExamples) {
  EXPECT_EQ(tokenize("int x=1;"), (Strings{"int", "x", "=", "1", ";"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("// only a comment").empty());
}

TEST(Lexer, LiteralsAndOperators) {
  EXPECT_EQ(tokenize("a<<=b->c...d::e"), (Strings{"a", "<<=", "b", "->", "c", "...", "d", "::", "e"}));
  EXPECT_EQ(tokenize(R"(s = "a \"q\" b"; c = '\''; /* x */ f(1'000, 1.5e-3, 0x1Fu);)"),
            (Strings{"s", "=", R"("a \"q\" b")", ";", "c", "=", R"('\'')", ";", "f", "(", "1'000", ",", "1.5e-3", ",",
                     "0x1Fu", ")", ";"}));
  EXPECT_EQ(tokenize("auto r = R\"d(a \" b)d\"; u8\"x\""), (Strings{"auto", "r", "=", "R\"d(a \" b)d\"", ";", "u8\"x\""}));
  EXPECT_EQ(tokenize("#include <vector>\n"), (Strings{"#", "include", "<", "vector", ">"}));
  EXPECT_EQ(tokenize("a @ b"), (Strings{"a", "@", "b"}));
}

TEST(Lexer, KeepsCommentsOnRequest) {
  const auto toks = lex("x // c\n/* d */", LexOptions{true});
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[1].kind, TokenKind::Comment);
  EXPECT_EQ(toks[2].text, "/* d */");
  EXPECT_EQ(toks[2].offset, 7u);
}

TEST(LineOverlap, Examples) {
  std::string ten;
  for (int i = 0; i < 10; ++i) ten += "line" + std::to_string(i) + "();\n";
  EXPECT_DOUBLE_EQ(line_overlap(ten, ten), 100.0);
  EXPECT_DOUBLE_EQ(line_overlap("a();\nb();\nX();\nc();", "a();\n  b();\n\n// note\nc();\nd();"), 75.0);
  EXPECT_DOUBLE_EQ(line_overlap("p();\nq();", "r();\ns();"), 0.0);
  EXPECT_EQ(error_of([] { (void)line_overlap("a", "  \n// c\n/* d */\n"); }), ErrorCode::EmptyGroundTruth);
}

TEST(LineOverlap, MultisetAndCommentRules) {
  // repeated lines count once per occurrence
  EXPECT_DOUBLE_EQ(line_overlap("x++;", "x++;\nx++;"), 50.0);
  EXPECT_DOUBLE_EQ(line_overlap("x++;\nx++;\nx++;", "x++;\nx++;"), 100.0);
  // a code line with a trailing comment keeps the comment text
  EXPECT_EQ(normalized_lines("  a(); // c  \n/* only\n comment */\n\tb();"), (Strings{"a(); // c", "b();"}));
}

TEST(LineOverlap, MatchesMultisetOracle) {
  std::mt19937_64 rng(8);
  const Strings pool{"a();", "b();", "int x;", "x++;", "return 0;", "}"};
  for (int round = 0; round < 300; ++round) {
    Strings g, t;
    for (int i = 0, n = int(rng() % 8); i < n; ++i) g.push_back(pool[rng() % pool.size()]);
    for (int i = 0, n = 1 + int(rng() % 8); i < n; ++i) t.push_back(pool[rng() % pool.size()]);
    std::map<std::string, int> tc, gc;
    for (auto& s : t) ++tc[s];
    for (auto& s : g) ++gc[s];
    int m = 0;
    for (auto& [k, v] : tc) m += std::min(v, gc[k]);
    EXPECT_DOUBLE_EQ(line_overlap(text::join(g, "\n"), text::join(t, "\n")), double(m) / double(t.size()) * 100.0);
  }
}

TEST(Eds, Examples) {
  EXPECT_DOUBLE_EQ(edit_distance_similarity("int x;", "int x;"), 1.0);
  EXPECT_NEAR(edit_distance_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0, 1e-12);
  EXPECT_NEAR(edit_distance_similarity("kitten", "sitting"), 0.5714, 1e-4);
  EXPECT_DOUBLE_EQ(edit_distance_similarity("", "abcde"), 0.0);
  EXPECT_EQ(error_of([] { (void)edit_distance_similarity(" \n", ""); }), ErrorCode::BothEmpty);
}

TEST(Eds, WhitespaceNormalizedCodePoints) {
  EXPECT_DOUBLE_EQ(edit_distance_similarity("int   x;\n\n", "  int x;"), 1.0);
  EXPECT_NEAR(edit_distance_similarity("é", "e"), 0.0, 1e-12);  // one code point each
}

TEST(Levenshtein, MatchesDpAcrossBlockBoundaries) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 400; ++round) {
    const std::size_t la = rng() % 300, lb = rng() % 300;
    std::u32string a(la, U'a'), b(lb, U'a');
    const int alpha = 1 + int(rng() % 4);
    for (auto& c : a) c = char32_t(U'a' + rng() % alpha);
    for (auto& c : b) c = char32_t(U'a' + rng() % alpha);
    if (round % 5 == 0) b = a.substr(0, a.size() / 2) + U"é" + a.substr(a.size() / 2);
    ASSERT_EQ(levenshtein(a, b), oracle::levenshtein_dp(a, b)) << la << " " << lb;
  }
  EXPECT_EQ(levenshtein(U"", U""), 0u);
  EXPECT_EQ(levenshtein(std::u32string(64, U'x'), std::u32string(65, U'x')), 1u);
  EXPECT_EQ(levenshtein(std::u32string(128, U'x'), std::u32string(128, U'y')), 128u);
}

TEST(Eds, BatchKernelsAgree) {
  std::mt19937_64 rng(12);
  std::vector<TextPair> pairs;
  for (int i = 0; i < 300; ++i) {
    auto g = random_code(rng, 150) + "x";
    pairs.emplace_back(g, random_code(rng, 150));
  }
  const auto par = edit_distance_similarity_batch(pairs);
  const auto ser = edit_distance_similarity_batch_serial(pairs);
  ASSERT_EQ(par, ser);
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(par[i], edit_distance_similarity(pairs[i].first, pairs[i].second));
  pairs.emplace_back("", "\n");
  EXPECT_EQ(error_of([&] { (void)edit_distance_similarity_batch(pairs); }), ErrorCode::BothEmpty);
}

TEST(TokenOverlap, Examples) {
  EXPECT_DOUBLE_EQ(token_overlap("int x = 1;", "int x = 1;"), 100.0);
  EXPECT_DOUBLE_EQ(token_overlap("int y = 1;", "int x = 1;"), 80.0);
  EXPECT_DOUBLE_EQ(token_overlap("a b c", "d e f"), 0.0);
  EXPECT_EQ(error_of([] { (void)token_overlap("x", "/* nothing */"); }), ErrorCode::EmptyGroundTruth);
}

TEST(MetricProperties, RangesIdentitySymmetry) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 500; ++round) {
    const std::string a = random_code(rng, 120) + "q", b = random_code(rng, 120) + "z";
    const double eds = edit_distance_similarity(a, b);
    EXPECT_GE(eds, 0.0);
    EXPECT_LE(eds, 1.0);
    EXPECT_EQ(eds, edit_distance_similarity(b, a));
    EXPECT_EQ(edit_distance_similarity(a, a), 1.0);
    EXPECT_EQ(token_overlap(a, a), 100.0);
    for (double v : {token_overlap(a, b), token_overlap(b, a)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 100.0);
    }
    if (!normalized_lines(b).empty() && !normalized_lines(a).empty()) {
      for (double v : {line_overlap(a, b), line_overlap(b, a)}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 100.0);
      }
    }
  }
}

TEST(MetricProperties, OverlapIsNotSymmetric) {
  EXPECT_DOUBLE_EQ(token_overlap("a", "a b"), 50.0);
  EXPECT_DOUBLE_EQ(token_overlap("a b", "a"), 100.0);
  EXPECT_DOUBLE_EQ(line_overlap("a;", "a;\nb;"), 50.0);
  EXPECT_DOUBLE_EQ(line_overlap("a;\nb;", "a;"), 100.0);
}
