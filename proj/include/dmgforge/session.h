#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dmgforge/dmg.h"
#include "dmgforge/dnd.h"
#include "dmgforge/grammar.h"
#include "dmgforge/tad.h"

namespace dmgforge {

using json = nlohmann::ordered_json;

/// A request the service refuses; `status` is the HTTP status to answer with.
class service_error : public std::runtime_error {
 public:
  service_error(int status, const std::string& message, json details = json::object())
      : std::runtime_error(message), status_(status), details_(std::move(details)) {}

  int status() const noexcept { return status_; }
  /// {"error": message, ...details}
  json body() const;

 private:
  int status_;
  json details_;
};

struct StoredGrammar {
  std::string id;
  std::string source;
  Grammar grammar;
  DndGrammar dnd;
  std::shared_ptr<const Dmg> dmg;
  std::vector<Diagnostic> diagnostics;
};

/// Grammars, their graphs and the derivation sessions over them.
///
/// Calls on different sessions may run concurrently; calls on one session are
/// serialized by that session's mutex. With a log directory every accepted
/// action is appended to a JSON-lines file, and `restore` replays them.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> log_dir = std::nullopt);

  json create_grammar(std::string_view source);
  json grammar_summary(const std::string& grammar_id) const;
  std::string grammar_dmg_json(const std::string& grammar_id) const;
  std::string grammar_dot(const std::string& grammar_id) const;
  json grammar_analysis(const std::string& grammar_id) const;

  json create_session(const std::string& grammar_id);
  json session_state(const std::string& session_id) const;
  json apply_choice(const std::string& session_id, std::size_t node_id, int ordinal);
  json apply_lexeme(const std::string& session_id, std::size_t node_id, const std::string& value);
  json undo(const std::string& session_id);
  json get_result(const std::string& session_id) const;

  /// Rebuilds grammars and sessions from the log directory. Returns the
  /// number of sessions restored.
  std::size_t restore();

 private:
  struct Session {
    std::string id;
    std::string grammar_id;
    Atad atad;
    std::vector<Atad> history;
    mutable std::mutex mutex;
  };

  std::shared_ptr<const StoredGrammar> find_grammar(const std::string& id) const;
  std::shared_ptr<Session> find_session(const std::string& id) const;
  std::shared_ptr<const StoredGrammar> add_grammar(std::string id, std::string_view source);
  std::shared_ptr<Session> add_session(std::string id, const std::shared_ptr<const StoredGrammar>& g);
  void log(const std::filesystem::path& file, const json& event) const;
  std::filesystem::path session_log(const std::string& session_id) const;

  static json state_of(const Session& s, const StoredGrammar& g);
  static void advance(Session& s, Atad next);

  std::optional<std::filesystem::path> log_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const StoredGrammar>> grammars_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_grammar_ = 1;
  std::size_t next_session_ = 1;
  mutable std::mutex log_mutex_;
};

}  // namespace dmgforge
