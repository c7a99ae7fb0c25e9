#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace autopatch {

struct BaseUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // "" or "/v1"
};

/// Splits "https://api.example.com/v1/" into origin and prefix (trailing '/'
/// dropped). A URL without a scheme is taken as http.
BaseUrl parse_base_url(std::string_view url);

struct HttpResult {
  bool connected = false;  // false: transport failure, see `error`
  int status = 0;
  std::string body;
  std::string error;
};

/// POSTs a JSON body to origin + path_prefix + path with an optional bearer token.
HttpResult post_json(const BaseUrl& base, std::string_view path, const std::string& body, const std::string& bearer,
                     std::chrono::seconds timeout);

}  // namespace autopatch
