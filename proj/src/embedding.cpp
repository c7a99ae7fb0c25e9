#include "autopatch/embedding.hpp"

#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "autopatch/error.hpp"
#include "autopatch/http.hpp"
#include "autopatch/lexer.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

LocalHashEmbedder::LocalHashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::Usage, "embedding dim must be positive");
}

std::string LocalHashEmbedder::name() const { return "local-hash-" + std::to_string(dim_); }

EmbeddingVector LocalHashEmbedder::embed(std::string_view input) {
  std::vector<std::string> tokens = tokenize(input);
  if (tokens.empty()) {
    std::string cur;
    for (char c : input) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        if (!cur.empty()) tokens.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
  }
  if (tokens.empty()) throw Error(ErrorCode::EmptyInput, "no tokens to embed");

  std::vector<double> counts(dim_, 0.0);
  auto add_gram = [&](std::size_t begin, std::size_t end) {
    std::string gram;
    for (std::size_t i = begin; i < end; ++i) {
      if (i != begin) gram.push_back('\x1f');
      gram += tokens[i];
    }
    counts[text::fnv1a64(gram) % dim_] += 1.0;
  };
  if (tokens.size() < 3) {
    add_gram(0, tokens.size());
  } else {
    for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) add_gram(i, i + 3);
  }
  double norm_sq = 0.0;
  for (double c : counts) norm_sq += c * c;
  const double norm = std::sqrt(norm_sq);
  EmbeddingVector v;
  v.values.resize(dim_);
  for (std::size_t i = 0; i < dim_; ++i) v.values[i] = static_cast<float>(counts[i] / norm);
  return v;
}

RemoteEmbeddingConfig RemoteEmbeddingConfig::from_env() {
  RemoteEmbeddingConfig c;
  if (const char* v = std::getenv("AUTOPATCH_EMBED_BASE")) c.base_url = v;
  if (const char* v = std::getenv("AUTOPATCH_EMBED_KEY")) c.api_key = v;
  if (const char* v = std::getenv("AUTOPATCH_EMBED_MODEL"); v != nullptr && *v != '\0') c.model = v;
  return c;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbeddingConfig config) : config_(std::move(config)) {}

std::string RemoteEmbedder::name() const { return "remote:" + config_.model; }

EmbeddingVector RemoteEmbedder::embed(std::string_view input) {
  using nlohmann::json;
  if (config_.base_url.empty()) throw Error(ErrorCode::ProviderUnavailable, "AUTOPATCH_EMBED_BASE is not set");
  const json request = {{"model", config_.model}, {"input", json::array({std::string(input)})}};
  const HttpResult res = post_json(parse_base_url(config_.base_url), "/embeddings", request.dump(), config_.api_key,
                                   config_.timeout);
  if (!res.connected) throw Error(ErrorCode::ProviderUnavailable, res.error);
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorCode::ProviderUnavailable, "HTTP " + std::to_string(res.status) + ": " + res.body);
  }
  try {
    const json body = json::parse(res.body);
    EmbeddingVector v;
    for (const json& x : body.at("data").at(0).at("embedding")) v.values.push_back(x.get<float>());
    if (v.values.empty()) throw Error(ErrorCode::ProviderUnavailable, "empty embedding");
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable, std::string("malformed embedding response: ") + e.what());
  }
}

EmbeddingVector embed_text(std::string_view input, EmbeddingProvider& provider) {
  if (text::trim(input).empty()) throw Error(ErrorCode::EmptyInput, "embedding input is empty");
  return provider.embed(input);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += static_cast<double>(a.values[i]) * b.values[i];
    na += static_cast<double>(a.values[i]) * a.values[i];
    nb += static_cast<double>(b.values[i]) * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace autopatch
