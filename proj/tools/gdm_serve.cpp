#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gdm/service.hpp"

namespace {

gdm::service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for live multi-round decision sessions"};
  std::string listen = env_or("GDM_LISTEN", "127.0.0.1:8080");
  std::string storage = env_or("GDM_STORAGE", "./gdm-sessions");
  app.add_option("--listen", listen, "host:port to listen on (env GDM_LISTEN)");
  app.add_option("--storage", storage, "Directory holding session files (env GDM_STORAGE)");
  CLI11_PARSE(app, argc, argv);

  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --listen expects host:port\n";
    return 2;
  }
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "error: bad port in '" << listen << "'\n";
    return 2;
  }

  try {
    gdm::service::SessionStore store(storage);
    gdm::service::SessionService service(store);
    gdm::service::HttpServer server(service);
    const int bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "gdm-serve: listening on " << host << ":" << bound << ", " << store.size() << " sessions in "
              << storage << "\n";
    server.serve();
    g_server = nullptr;
  } catch (const gdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
