// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "autopatch/metrics.hpp"
#include "autopatch/vector_index.hpp"

using namespace autopatch;

namespace {

VectorIndex make_index(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> d;
  VectorIndex idx(dim, SourceKind::CfgSerialization);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<float> v(dim);
    for (auto& x : v) x = d(rng);
    idx.add({"r" + std::to_string(i), EmbeddingVector{std::move(v)}, "", "", SourceKind::CfgSerialization});
  }
  return idx;
}

EmbeddingVector make_query(std::size_t dim) {
  std::mt19937_64 rng(2);
  std::normal_distribution<float> d;
  std::vector<float> v(dim);
  for (auto& x : v) x = d(rng);
  return EmbeddingVector{std::move(v)};
}

std::vector<TextPair> make_pairs(std::size_t n, std::size_t len) {
  static const std::string kAlphabet = "abcxyz(){};=+1 \n";
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> ch(0, kAlphabet.size() - 1);
  auto word = [&] {
    std::string s(len, 'a');
    for (char& c : s) c = kAlphabet[ch(rng)];
    return s + "q";
  };
  std::vector<TextPair> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(word(), word());
  return pairs;
}

void BM_Top1Serial(benchmark::State& state) {
  const auto idx = make_index(static_cast<std::size_t>(state.range(0)), 256);
  const auto q = make_query(256);
  for (auto _ : state) benchmark::DoNotOptimize(retrieve_top1_serial(idx, q));
}

void BM_Top1Parallel(benchmark::State& state) {
  const auto idx = make_index(static_cast<std::size_t>(state.range(0)), 256);
  const auto q = make_query(256);
  for (auto _ : state) benchmark::DoNotOptimize(retrieve_top1(idx, q));
}

void BM_EdsBatchSerial(benchmark::State& state) {
  const auto pairs = make_pairs(1000, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance_similarity_batch_serial(pairs));
}

void BM_EdsBatchParallel(benchmark::State& state) {
  const auto pairs = make_pairs(1000, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance_similarity_batch(pairs));
}

}  // namespace

BENCHMARK(BM_Top1Serial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Top1Parallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_EdsBatchSerial)->Arg(200)->Arg(2000);
BENCHMARK(BM_EdsBatchParallel)->Arg(200)->Arg(2000);
BENCHMARK_MAIN();
