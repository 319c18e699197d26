#include "dmgforge/server.h"

#include <iostream>
#include <stdexcept>

#include "httplib.h"

#include "dmgforge/session.h"

namespace dmgforge {

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs a handler, turning service errors and malformed bodies into JSON errors.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const service_error& e) {
      send_json(res, e.body(), e.status());
    } catch (const nlohmann::json::exception& e) {
      send_json(res, json{{"error", std::string("malformed request body: ") + e.what()}}, 400);
    } catch (const std::logic_error& e) {
      send_json(res, json{{"error", std::string("malformed request field: ") + e.what()}}, 400);
    }
  };
}

json body_of(const httplib::Request& req) {
  auto j = json::parse(req.body);
  if (!j.is_object()) throw service_error(400, "request body must be a JSON object");
  return j;
}

std::size_t node_id_of(const json& body) {
  const auto& v = body.at("node_id");
  if (v.is_string()) return std::stoul(v.get<std::string>());
  return v.get<std::size_t>();
}

}  // namespace

void mount_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/grammars", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    // JSON {"source": text}; a text/plain body is taken as the grammar itself.
    if (req.get_header_value("Content-Type").rfind("text/plain", 0) == 0) {
      send_json(res, store.create_grammar(req.body), 201);
    } else {
      send_json(res, store.create_grammar(body_of(req).at("source").get<std::string>()), 201);
    }
  }));
  server.Get(R"(/grammars/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.grammar_summary(req.matches[1]));
  }));
  server.Get(R"(/grammars/([^/]+)/dmg)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    res.set_content(store.grammar_dmg_json(req.matches[1]), "application/json");
  }));
  server.Get(R"(/grammars/([^/]+)/dot)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    res.set_content(store.grammar_dot(req.matches[1]), "text/vnd.graphviz");
  }));
  server.Get(R"(/grammars/([^/]+)/analysis)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.grammar_analysis(req.matches[1]));
  }));

  server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.create_session(body_of(req).at("grammar_id").get<std::string>()), 201);
  }));
  server.Get(R"(/sessions/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.session_state(req.matches[1]));
  }));
  server.Post(R"(/sessions/([^/]+)/choices)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    auto body = body_of(req);
    send_json(res, store.apply_choice(req.matches[1], node_id_of(body), body.at("ordinal").get<int>()));
  }));
  server.Post(R"(/sessions/([^/]+)/lexemes)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    auto body = body_of(req);
    send_json(res, store.apply_lexeme(req.matches[1], node_id_of(body), body.at("value").get<std::string>()));
  }));
  server.Post(R"(/sessions/([^/]+)/undo)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.undo(req.matches[1]));
  }));
  server.Get(R"(/sessions/([^/]+)/result)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, store.get_result(req.matches[1]));
  }));
}

std::pair<std::string, int> parse_listen(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw std::invalid_argument("expected host:port, got '" + address + "'");
  }
  std::size_t used = 0;
  int port = std::stoi(address.substr(colon + 1), &used);
  if (used != address.size() - colon - 1 || port < 0 || port > 65535) {
    throw std::invalid_argument("bad port in '" + address + "'");
  }
  return {address.substr(0, colon), port};
}

bool serve(const ServeOptions& options) {
  SessionStore store(options.log_dir);
  if (options.log_dir) {
    std::size_t n = store.restore();
    if (n) std::cerr << "restored " << n << " session(s) from " << options.log_dir->string() << '\n';
  }
  httplib::Server server;
  mount_routes(server, store);
  if (options.static_dir && !server.set_mount_point("/", options.static_dir->string())) {
    std::cerr << "static directory " << options.static_dir->string() << " not found\n";
    return false;
  }
  std::cerr << "listening on " << options.host << ':' << options.port << '\n';
  return server.listen(options.host, options.port);
}

}  // namespace dmgforge
