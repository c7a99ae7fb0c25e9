#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>

#include <json.hpp>

namespace autopatch {

struct ChatRequest {
  std::string model;
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
};

/// Key under which a request is stored in a cassette: SHA-256 over model,
/// system text and user text separated by NUL bytes.
std::string request_hash(const ChatRequest& request);

/// The chat-completions wire body for a request.
nlohmann::json chat_request_json(const ChatRequest& request);

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  /// Returns the assistant message content. Implementations are thread-safe.
  virtual std::string complete(const ChatRequest& request) = 0;
  /// Number of requests that reached the underlying transport.
  [[nodiscard]] virtual std::size_t network_calls() const noexcept = 0;
};

struct ChatServiceConfig {
  std::string base_url;
  std::string api_key;
  std::string model = "gpt-4o";
  std::chrono::seconds timeout{120};
  std::ptrdiff_t max_in_flight = 4;

  /// AUTOPATCH_LLM_BASE, AUTOPATCH_LLM_KEY, AUTOPATCH_LLM_MODEL.
  static ChatServiceConfig from_env();
};

/// Live client: POST <base>/chat/completions, content from
/// choices[0].message.content. Throws Error(ServiceError).
class HttpChatClient final : public LlmClient {
 public:
  explicit HttpChatClient(ChatServiceConfig config);
  std::string complete(const ChatRequest& request) override;
  [[nodiscard]] std::size_t network_calls() const noexcept override { return calls_; }

 private:
  ChatServiceConfig config_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<std::size_t> calls_{0};
};

enum class CassetteMode { Replay, Record };

/// Request/response store keyed by request_hash. Replay never touches the
/// network and raises Error(ReplayMiss) for unknown requests. Record forwards
/// to the inner client and rewrites the cassette file after each new entry.
/// File layout: {"<hash>": {"request": ..., "response": {"content": ...}, "timestamp": ...}}.
class CassetteClient final : public LlmClient {
 public:
  CassetteClient(std::filesystem::path path, CassetteMode mode, std::shared_ptr<LlmClient> inner = nullptr);
  std::string complete(const ChatRequest& request) override;
  [[nodiscard]] std::size_t network_calls() const noexcept override;
  [[nodiscard]] std::size_t size() const;

 private:
  std::filesystem::path path_;
  CassetteMode mode_;
  std::shared_ptr<LlmClient> inner_;
  mutable std::mutex mutex_;
  nlohmann::json entries_;
};

}  // namespace autopatch
