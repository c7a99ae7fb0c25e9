// Usage: stub_chat_server [port]. Prints the bound port, then serves
// /v1/chat/completions and /v1/embeddings until killed.
#include <cstdlib>
#include <iostream>

#include "stub_replies.hpp"

int main(int argc, char** argv) {
  const int port = argc > 1 ? std::atoi(argv[1]) : 0;
  httplib::Server server;
  stub::install(server);
  int bound = port;
  if (port > 0) {
    if (!server.bind_to_port("127.0.0.1", port)) bound = -1;
  } else {
    bound = server.bind_to_any_port("127.0.0.1");
  }
  if (bound < 0) {
    std::cerr << "bind failed\n";
    return 1;
  }
  std::cout << bound << std::endl;
  server.listen_after_bind();
  return 0;
}
