#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

namespace httplib {
class Server;
}

namespace dmgforge {

class SessionStore;

/// Registers the REST routes on `server`, backed by `store`.
void mount_routes(httplib::Server& server, SessionStore& store);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> log_dir;
  /// Static UI assets served under "/".
  std::optional<std::filesystem::path> static_dir;
};

/// Parses "host:port"; throws std::invalid_argument when malformed.
std::pair<std::string, int> parse_listen(const std::string& address);

/// Blocks until the server stops. Returns false if the address could not be bound.
bool serve(const ServeOptions& options);

}  // namespace dmgforge
