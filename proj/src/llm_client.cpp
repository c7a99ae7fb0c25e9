#include "autopatch/llm_client.hpp"

#include <cstdlib>
#include <filesystem>

#include "autopatch/error.hpp"
#include "autopatch/http.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

using nlohmann::json;

std::string request_hash(const ChatRequest& request) {
  std::string material = request.model;
  material.push_back('\0');
  material += request.system_text;
  material.push_back('\0');
  material += request.user_text;
  return text::sha256_hex(material);
}

json chat_request_json(const ChatRequest& request) {
  return {{"model", request.model},
          {"messages",
           json::array({{{"role", "system"}, {"content", request.system_text}},
                        {{"role", "user"}, {"content", request.user_text}}})},
          {"temperature", request.temperature}};
}

ChatServiceConfig ChatServiceConfig::from_env() {
  ChatServiceConfig c;
  if (const char* v = std::getenv("AUTOPATCH_LLM_BASE")) c.base_url = v;
  if (const char* v = std::getenv("AUTOPATCH_LLM_KEY")) c.api_key = v;
  if (const char* v = std::getenv("AUTOPATCH_LLM_MODEL"); v != nullptr && *v != '\0') c.model = v;
  return c;
}

HttpChatClient::HttpChatClient(ChatServiceConfig config)
    : config_(std::move(config)), in_flight_(std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(config_.max_in_flight, 1024))) {}

std::string HttpChatClient::complete(const ChatRequest& request) {
  if (config_.base_url.empty()) throw Error(ErrorCode::ServiceError, "AUTOPATCH_LLM_BASE is not set");
  in_flight_.acquire();
  ++calls_;
  HttpResult res;
  try {
    res = post_json(parse_base_url(config_.base_url), "/chat/completions", chat_request_json(request).dump(),
                    config_.api_key, config_.timeout);
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();
  if (!res.connected) throw Error(ErrorCode::ServiceError, "transport: " + res.error);
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorCode::ServiceError, "status " + std::to_string(res.status) + ": " + res.body);
  }
  try {
    const json body = json::parse(res.body);
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ServiceError, std::string("malformed response: ") + e.what());
  }
}

CassetteClient::CassetteClient(std::filesystem::path path, CassetteMode mode, std::shared_ptr<LlmClient> inner)
    : path_(std::move(path)), mode_(mode), inner_(std::move(inner)), entries_(json::object()) {
  if (mode_ == CassetteMode::Record && !inner_) throw Error(ErrorCode::Usage, "record mode needs a live client");
  std::error_code ec;
  if (std::filesystem::exists(path_, ec)) {
    try {
      entries_ = json::parse(text::read_file(path_));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Io, "cassette " + path_.string() + ": " + e.what());
    }
    if (!entries_.is_object()) throw Error(ErrorCode::Io, "cassette " + path_.string() + " is not a JSON object");
  } else if (mode_ == CassetteMode::Replay) {
    throw Error(ErrorCode::FileNotFound, path_.string());
  }
}

std::string CassetteClient::complete(const ChatRequest& request) {
  const std::string key = request_hash(request);
  {
    std::lock_guard lock(mutex_);
    if (const auto it = entries_.find(key); it != entries_.end()) {
      return it->at("response").at("content").get<std::string>();
    }
  }
  if (mode_ == CassetteMode::Replay) throw Error(ErrorCode::ReplayMiss, key);
  std::string content = inner_->complete(request);
  std::lock_guard lock(mutex_);
  entries_[key] = {{"request", chat_request_json(request)},
                   {"response", {{"content", content}}},
                   {"timestamp", text::utc_timestamp()}};
  text::write_file(path_, entries_.dump(2) + "\n");
  return content;
}

std::size_t CassetteClient::network_calls() const noexcept { return inner_ ? inner_->network_calls() : 0; }

std::size_t CassetteClient::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace autopatch
