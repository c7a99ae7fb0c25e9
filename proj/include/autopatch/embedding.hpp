#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace autopatch {

struct EmbeddingVector {
  std::vector<float> values;

  [[nodiscard]] std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// Implementations may be called from several threads at once.
  virtual EmbeddingVector embed(std::string_view text) = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

inline constexpr std::size_t kLocalEmbeddingDim = 256;

/// Deterministic offline embedder. Tokens come from the C-family lexer
/// (whitespace-separated pieces if the lexer yields none); each window of three
/// consecutive tokens, joined with '\x1f', is hashed with 64-bit FNV-1a into
/// `dim` buckets. Fewer than three tokens form a single gram. Bucket counts are
/// L2-normalized.
class LocalHashEmbedder final : public EmbeddingProvider {
 public:
  explicit LocalHashEmbedder(std::size_t dim = kLocalEmbeddingDim);
  EmbeddingVector embed(std::string_view text) override;
  [[nodiscard]] std::string name() const override;

 private:
  std::size_t dim_;
};

struct RemoteEmbeddingConfig {
  std::string base_url;
  std::string api_key;
  std::string model = "text-embedding-3-small";
  std::chrono::seconds timeout{60};

  /// AUTOPATCH_EMBED_BASE, AUTOPATCH_EMBED_KEY, AUTOPATCH_EMBED_MODEL.
  static RemoteEmbeddingConfig from_env();
};

/// POSTs {"model", "input": [text]} to <base>/embeddings and returns
/// data[0].embedding verbatim. Transport failures, non-2xx statuses and
/// malformed bodies raise Error(ProviderUnavailable).
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbeddingConfig config);
  EmbeddingVector embed(std::string_view text) override;
  [[nodiscard]] std::string name() const override;

 private:
  RemoteEmbeddingConfig config_;
};

/// Rejects blank text with Error(EmptyInput), then delegates to the provider.
EmbeddingVector embed_text(std::string_view text, EmbeddingProvider& provider);

/// dot(a, b) / (|a| |b|), accumulated in double in index order.
/// Throws Error(DimMismatch) or Error(ZeroVector).
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace autopatch
