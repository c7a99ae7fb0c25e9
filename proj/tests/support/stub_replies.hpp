// Canned answers of the OpenAI-compatible test stub. Rationale requests get a
// sentence citing the first block id of the diff; patch requests get the
// target program echoed back in a cpp fence.
#pragma once

#include <regex>
#include <string>

#include <httplib.h>
#include <json.hpp>

namespace stub {

inline std::string reply_for(const std::string& user) {
  const auto diff = user.find("## CFG differences");
  if (diff != std::string::npos) {
    std::smatch m;
    const std::string section = user.substr(diff);
    if (std::regex_search(section, m, std::regex(R"(B\d+)"))) {
      return "The optimized program changes block " + m.str() + ", which removes redundant work on the hot path.";
    }
    return "The optimized program restructures its control flow.";
  }
  const auto target = user.rfind("## Target program");
  if (target == std::string::npos) return "no target";
  const auto open = user.find("```cpp\n", target);
  if (open == std::string::npos) return "no target";
  const auto close = user.find("\n```", open + 7);
  if (close == std::string::npos) return "no target";
  return "Here is the optimized program.\n\n```cpp\n" + user.substr(open + 7, close - open - 7) + "\n```\n";
}

inline void install(httplib::Server& server) {
  using nlohmann::json;
  server.Post("/v1/chat/completions", [](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    const std::string user = body.at("messages").at(1).at("content").get<std::string>();
    const json choice = {{"message", {{"role", "assistant"}, {"content", reply_for(user)}}}};
    res.set_content(json{{"choices", json::array({choice})}}.dump(), "application/json");
  });
  server.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    const std::string text = body.at("input").at(0).get<std::string>();
    json v = json::array();
    for (int k = 0; k < 8; ++k) v.push_back(double((text.size() * (k + 3)) % 17) + 1.0);
    res.set_content(json{{"data", json::array({{{"embedding", v}}})}}.dump(), "application/json");
  });
}

}  // namespace stub
