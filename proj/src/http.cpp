#include "autopatch/http.hpp"

#include <httplib.h>

namespace autopatch {

BaseUrl parse_base_url(std::string_view url) {
  std::string u(url);
  while (!u.empty() && u.back() == '/') u.pop_back();
  std::size_t scheme_end = u.find("://");
  std::size_t host_start = 0;
  if (scheme_end == std::string::npos) {
    u = "http://" + u;
    scheme_end = 4;
  }
  host_start = scheme_end + 3;
  const std::size_t slash = u.find('/', host_start);
  if (slash == std::string::npos) return {u, ""};
  return {u.substr(0, slash), u.substr(slash)};
}

HttpResult post_json(const BaseUrl& base, std::string_view path, const std::string& body, const std::string& bearer,
                     std::chrono::seconds timeout) {
  httplib::Client client(base.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);
  const std::string full_path = base.path_prefix + std::string(path);
  auto res = client.Post(full_path, headers, body, "application/json");
  HttpResult out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.connected = true;
  out.status = res->status;
  out.body = res->body;
  return out;
}

}  // namespace autopatch
