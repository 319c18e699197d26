#include "doctest.h"

#include <filesystem>
#include <thread>

#include <unistd.h>

#include "httplib.h"

#include "dmgforge/server.h"
#include "dmgforge/session.h"
#include "support.h"

using namespace dmgforge;

namespace {

int status_of(auto&& f) {
  try {
    f();
  } catch (const service_error& e) {
    return e.status();
  }
  return 200;
}

// A server on an ephemeral loopback port, stopped on destruction.
struct LiveServer {
  SessionStore store;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  LiveServer() {
    mount_routes(server, store);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expected) {
  auto r = c.Post(path, body.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == expected);
  return json::parse(r->body);
}

json get(httplib::Client& c, const std::string& path, int expected) {
  auto r = c.Get(path);
  REQUIRE(r);
  CHECK(r->status == expected);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("store: grammar summary") {
  SessionStore store;
  json g = store.create_grammar(testsupport::kExample1);
  CHECK(g["grammar_id"] == "g1");
  CHECK(g["start"] == "S");
  CHECK(g["dnd"] == testsupport::golden("example1.dnd"));
  CHECK(g["statistics"]["nodes"] == 8);
  CHECK(store.grammar_dmg_json("g1") == export_json(build_dmg_from_source(testsupport::kExample1)));
  CHECK(store.grammar_dot("g1").rfind("digraph", 0) == 0);
  CHECK(store.grammar_analysis("g1")["cycles"].size() == 2);
  CHECK(status_of([&] { store.grammar_summary("g9"); }) == 404);
}

TEST_CASE("store: failed grammars are 422 with a kind") {
  SessionStore store;
  for (auto [file, kind] : {std::pair{"identity.g", "InvalidGrammar"}, std::pair{"bad_infinity.g", "BadInfinity"},
                            std::pair{"and_cycle.g", "AndCycle"}}) {
    CAPTURE(file);
    try {
      store.create_grammar(testsupport::fixture(file));
      FAIL("expected a failure");
    } catch (const service_error& e) {
      CHECK(e.status() == 422);
      CHECK(e.body()["kind"] == kind);
      CHECK_FALSE(e.body()["diagnostics"].empty());
    }
  }
  try {
    store.create_grammar("S -> \"a");
  } catch (const service_error& e) {
    CHECK(e.status() == 422);
    CHECK(e.body()["line"] == 1);
  }
}

TEST_CASE("store: scripted session with undo") {
  SessionStore store;
  store.create_grammar(testsupport::kExample2);
  json s = store.create_session("g1");
  CHECK(s["id"] == "s1");
  CHECK(s["status"] == "in_progress");
  REQUIRE(s["frontier"].size() == 1);
  CHECK(s["frontier"][0]["kind"] == "or");
  CHECK(s["frontier"][0]["alternatives"][0] == json{{"ordinal", 1}, {"target_label", "S1"}});
  CHECK(s["partial_string"] == "⟨S⟩");
  CHECK(status_of([&] { store.undo("s1"); }) == 409);

  s = store.apply_choice("s1", 0, 1);
  CHECK(s["partial_string"] == "⟨S⟩ + ⟨S⟩");
  REQUIRE(s["frontier"].size() == 2);
  std::size_t left = s["frontier"][0]["node_id"], right = s["frontier"][1]["node_id"];
  CHECK(status_of([&] { store.apply_choice("s1", left, 4); }) == 422);
  CHECK(status_of([&] { store.apply_choice("s1", 999, 1); }) == 404);
  CHECK(status_of([&] { store.apply_choice("s1", 0, 1); }) == 422);
  CHECK(status_of([&] { store.apply_lexeme("s1", left, "x"); }) == 422);

  s = store.apply_choice("s1", left, 3);
  s = store.undo("s1");
  CHECK(s["partial_string"] == "⟨S⟩ + ⟨S⟩");
  store.apply_choice("s1", left, 2);
  s = store.apply_choice("s1", right, 3);
  CHECK(s["status"] == "complete");
  CHECK(s["string"] == "1+a");
  CHECK(s["frontier"].empty());
  CHECK(status_of([&] { store.apply_choice("s1", right, 1); }) == 409);

  json r = store.get_result("s1");
  CHECK(r["status"] == "complete");
  CHECK(r["string"] == "1+a");
  CHECK(r["tad"]["label"] == "S");
  CHECK(status_of([&] { store.get_result("s7"); }) == 404);
}

TEST_CASE("store: a grammar with too many cycles is still usable") {
  std::string text;
  const char* names[] = {"A", "B", "C", "D", "E", "F", "G", "H", "I"};
  for (const char* lhs : names) {
    text += std::string(lhs) + " ->";
    for (const char* rhs : names) {
      if (rhs != lhs) text += std::string(" ") + rhs + " |";
    }
    text += " \"x\" ;\n";
  }
  SessionStore store;
  json g = store.create_grammar(text);
  CHECK(g["statistics"].is_null());
  CHECK(g["statistics_error"]["kind"] == "CycleExplosion");
  CHECK(status_of([&] { store.grammar_analysis("g1"); }) == 422);
  CHECK(store.create_session("g1")["status"] == "in_progress");
}

TEST_CASE("store: a grammar without choices completes at once") {
  SessionStore store;
  store.create_grammar(R"(S -> "a" ;)");
  json s = store.create_session("g1");
  CHECK(s["status"] == "complete");
  CHECK(s["string"] == "a");
  CHECK(status_of([&] { store.create_session("nope"); }) == 404);
}

TEST_CASE("store: lexeme frontier") {
  SessionStore store;
  store.create_grammar(testsupport::fixture("lexical.g"));
  json s = store.create_session("g1");
  REQUIRE(s["frontier"].size() == 2);
  CHECK(s["frontier"][0]["kind"] == "lexeme");
  CHECK(s["frontier"][0]["allowed"] == json::array({"x", "y"}));
  std::size_t id = s["frontier"][0]["node_id"];
  CHECK(status_of([&] { store.apply_lexeme("s1", id, "q"); }) == 422);
  s = store.apply_lexeme("s1", id, "x");
  CHECK(s["partial_string"] == "x = ⟨Value⟩");
}

TEST_CASE("store: event log replays sessions") {
  auto dir = std::filesystem::temp_directory_path() / ("dmgforge-log-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  json s1, s2;
  {
    SessionStore store(dir);
    store.create_grammar(testsupport::kExample2);
    store.create_grammar(testsupport::fixture("lexical.g"));
    store.create_session("g1");
    json s = store.apply_choice("s1", 0, 1);
    std::size_t left = s["frontier"][0]["node_id"];
    store.apply_choice("s1", left, 3);
    store.undo("s1");
    s1 = store.apply_choice("s1", left, 2);
    s = store.create_session("g2");
    s2 = store.apply_lexeme("s2", s["frontier"][0]["node_id"], "y");
  }
  SessionStore again(dir);
  CHECK(again.restore() == 2);
  CHECK(again.session_state("s1") == s1);
  CHECK(again.session_state("s2") == s2);
  CHECK(again.create_grammar(testsupport::kExample1)["grammar_id"] == "g3");
  CHECK(again.create_session("g3")["id"] == "s3");
  std::filesystem::remove_all(dir);
}

TEST_CASE("http: scripted session") {
  LiveServer live;
  auto c = live.client();
  json g = post(c, "/grammars", json{{"source", testsupport::kExample2}}, 201);
  std::string gid = g["grammar_id"];
  CHECK(get(c, "/grammars/" + gid, 200)["start"] == "S");
  CHECK(get(c, "/grammars/" + gid + "/dmg", 200)["start"] == "S");
  CHECK(get(c, "/grammars/" + gid + "/analysis", 200)["statistics"]["cycle_count"] == 2);
  auto dot = c.Get("/grammars/" + gid + "/dot");
  REQUIRE(dot);
  CHECK(dot->body.rfind("digraph", 0) == 0);
  get(c, "/grammars/g42", 404);

  json s = post(c, "/sessions", json{{"grammar_id", gid}}, 201);
  std::string sid = s["id"];
  s = post(c, "/sessions/" + sid + "/choices", json{{"node_id", 0}, {"ordinal", 1}}, 200);
  std::size_t left = s["frontier"][0]["node_id"], right = s["frontier"][1]["node_id"];
  post(c, "/sessions/" + sid + "/choices", json{{"node_id", left}, {"ordinal", 9}}, 422);
  post(c, "/sessions/" + sid + "/choices", json{{"node_id", std::to_string(left)}, {"ordinal", 2}}, 200);
  s = post(c, "/sessions/" + sid + "/choices", json{{"node_id", right}, {"ordinal", 3}}, 200);
  CHECK(s["status"] == "complete");
  CHECK(s["string"] == "1+a");
  post(c, "/sessions/" + sid + "/choices", json{{"node_id", right}, {"ordinal", 3}}, 409);
  CHECK(get(c, "/sessions/" + sid + "/result", 200)["string"] == "1+a");
  CHECK(get(c, "/sessions/" + sid, 200)["history_depth"] == 3);
  s = post(c, "/sessions/" + sid + "/undo", json::object(), 200);
  CHECK(s["status"] == "in_progress");
  CHECK(get(c, "/sessions/" + sid + "/result", 200)["status"] == "in_progress");
}

TEST_CASE("http: bad requests") {
  LiveServer live;
  auto c = live.client();
  auto r = c.Post("/grammars", "not json", "application/json");
  REQUIRE(r);
  CHECK(r->status == 400);
  post(c, "/grammars", json{{"source", "S -> S | \"a\" ;"}}, 422);
  post(c, "/sessions", json{{"grammar_id", "g5"}}, 404);
  post(c, "/sessions/s3/undo", json::object(), 404);
  post(c, "/grammars", json{{"text", "S -> ;"}}, 400);
  auto plain = c.Post("/grammars", "S -> ;", "text/plain");
  REQUIRE(plain);
  CHECK(plain->status == 201);
}

TEST_CASE("listen address parsing") {
  CHECK(parse_listen("0.0.0.0:9000") == std::pair<std::string, int>{"0.0.0.0", 9000});
  CHECK(parse_listen("localhost:1") == std::pair<std::string, int>{"localhost", 1});
  CHECK_THROWS(parse_listen("nohost"));
  CHECK_THROWS(parse_listen("h:0x"));
  CHECK_THROWS(parse_listen("h:70000"));
}
