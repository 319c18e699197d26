#include "dmgforge/session.h"

#include <algorithm>
#include <fstream>

#include "dmgforge/analysis.h"
#include "dmgforge/error.h"

namespace dmgforge {

json service_error::body() const {
  json j;
  j["error"] = what();
  for (const auto& [key, value] : details_.items()) j[key] = value;
  return j;
}

namespace {

json diagnostics_json(const std::vector<Diagnostic>& diags) {
  json out = json::array();
  for (const auto& d : diags) {
    json j;
    j["severity"] = std::string(severity_name(d.severity));
    j["message"] = d.message;
    if (!d.symbol.empty()) j["symbol"] = d.symbol;
    out.push_back(std::move(j));
  }
  return out;
}

bool is_complete(const Atad& t) { return t.pending().empty(); }

// Maps engine failures on a session action to HTTP statuses.
[[noreturn]] void rethrow_action_error(const forge_error& e) {
  throw service_error(e.code() == errc::no_such_node ? 404 : 422, e.what(),
                      json{{"kind", std::string(errc_name(e.code()))}});
}

std::size_t parse_counter(const std::string& id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return 0;
  try {
    return std::stoul(id.substr(1));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

SessionStore::SessionStore(std::optional<std::filesystem::path> log_dir) : log_dir_(std::move(log_dir)) {
  if (log_dir_) std::filesystem::create_directories(*log_dir_);
}

std::shared_ptr<const StoredGrammar> SessionStore::add_grammar(std::string id, std::string_view source) {
  auto stored = std::make_shared<StoredGrammar>();
  stored->id = std::move(id);
  stored->source = std::string(source);
  try {
    stored->grammar = parse_grammar(source);
  } catch (const syntax_error& e) {
    json diag = json::array({json{{"severity", "ERROR"}, {"message", e.what()}}});
    throw service_error(422, e.what(),
                        json{{"kind", "SyntaxError"}, {"line", e.line()}, {"column", e.column()}, {"diagnostics", diag}});
  }
  stored->diagnostics = validate(stored->grammar);
  if (has_errors(stored->diagnostics)) {
    throw service_error(422, "grammar failed validation",
                        json{{"kind", "InvalidGrammar"}, {"diagnostics", diagnostics_json(stored->diagnostics)}});
  }
  try {
    stored->dnd = reduce_to_dnd(stored->grammar);
    stored->dmg = std::make_shared<const Dmg>(build_dmg(stored->dnd));
  } catch (const forge_error& e) {
    auto diags = diagnostics_json(stored->diagnostics);
    diags.push_back(json{{"severity", "ERROR"}, {"message", e.what()}});
    throw service_error(422, e.what(), json{{"kind", std::string(errc_name(e.code()))}, {"diagnostics", diags}});
  }
  return stored;
}

json SessionStore::create_grammar(std::string_view source) {
  std::unique_lock lock(mutex_);
  std::string id = "g" + std::to_string(next_grammar_);
  auto stored = add_grammar(id, source);
  ++next_grammar_;
  grammars_.emplace(id, stored);
  lock.unlock();
  if (log_dir_) log(*log_dir_ / "grammars.jsonl", json{{"grammar_id", id}, {"source", stored->source}});
  return grammar_summary(id);
}

std::shared_ptr<const StoredGrammar> SessionStore::find_grammar(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = grammars_.find(id);
  if (it == grammars_.end()) throw service_error(404, "unknown grammar '" + id + "'");
  return it->second;
}

std::shared_ptr<SessionStore::Session> SessionStore::find_session(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw service_error(404, "unknown session '" + id + "'");
  return it->second;
}

json SessionStore::grammar_summary(const std::string& grammar_id) const {
  auto g = find_grammar(grammar_id);
  json j;
  j["grammar_id"] = g->id;
  j["diagnostics"] = diagnostics_json(g->diagnostics);
  try {
    j["statistics"] = to_json(statistics(*g->dmg));
  } catch (const forge_error& e) {
    // Too many cycles to count; the grammar itself is still usable.
    j["statistics"] = nullptr;
    j["statistics_error"] = json{{"kind", std::string(errc_name(e.code()))}, {"message", e.what()}};
  }
  j["start"] = g->grammar.name(g->grammar.start());
  j["dnd"] = render_grammar(g->dnd.grammar);
  return j;
}

std::string SessionStore::grammar_dmg_json(const std::string& grammar_id) const {
  return export_json(*find_grammar(grammar_id)->dmg);
}

std::string SessionStore::grammar_dot(const std::string& grammar_id) const {
  return export_dot(*find_grammar(grammar_id)->dmg);
}

json SessionStore::grammar_analysis(const std::string& grammar_id) const {
  auto g = find_grammar(grammar_id);
  try {
    return to_json(analyze(*g->dmg));
  } catch (const forge_error& e) {
    throw service_error(422, e.what(), json{{"kind", std::string(errc_name(e.code()))}});
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::add_session(std::string id,
                                                                 const std::shared_ptr<const StoredGrammar>& g) {
  auto s = std::make_shared<Session>();
  s->id = std::move(id);
  s->grammar_id = g->id;
  s->atad = auto_expand(new_atad(g->dmg));
  return s;
}

json SessionStore::create_session(const std::string& grammar_id) {
  auto g = find_grammar(grammar_id);
  std::unique_lock lock(mutex_);
  std::string id = "s" + std::to_string(next_session_++);
  auto s = add_session(id, g);
  sessions_.emplace(id, s);
  lock.unlock();
  if (log_dir_) log(session_log(id), json{{"event", "create"}, {"grammar_id", grammar_id}});
  std::lock_guard session_lock(s->mutex);
  return state_of(*s, *g);
}

json SessionStore::session_state(const std::string& session_id) const {
  auto s = find_session(session_id);
  auto g = find_grammar(s->grammar_id);
  std::lock_guard lock(s->mutex);
  return state_of(*s, *g);
}

void SessionStore::advance(Session& s, Atad next) {
  s.history.push_back(std::move(s.atad));
  s.atad = std::move(next);
}

json SessionStore::apply_choice(const std::string& session_id, std::size_t node_id, int ordinal) {
  auto s = find_session(session_id);
  auto g = find_grammar(s->grammar_id);
  std::lock_guard lock(s->mutex);
  if (is_complete(s->atad)) throw service_error(409, "session is complete");
  try {
    advance(*s, auto_expand(choose(s->atad, static_cast<AtadNodeId>(node_id), ordinal)));
  } catch (const forge_error& e) {
    rethrow_action_error(e);
  }
  if (log_dir_) log(session_log(s->id), json{{"event", "choice"}, {"node_id", node_id}, {"ordinal", ordinal}});
  return state_of(*s, *g);
}

json SessionStore::apply_lexeme(const std::string& session_id, std::size_t node_id, const std::string& value) {
  auto s = find_session(session_id);
  auto g = find_grammar(s->grammar_id);
  std::lock_guard lock(s->mutex);
  if (is_complete(s->atad)) throw service_error(409, "session is complete");
  try {
    advance(*s, set_lexeme(s->atad, static_cast<AtadNodeId>(node_id), value));
  } catch (const forge_error& e) {
    rethrow_action_error(e);
  }
  if (log_dir_) log(session_log(s->id), json{{"event", "lexeme"}, {"node_id", node_id}, {"value", value}});
  return state_of(*s, *g);
}

json SessionStore::undo(const std::string& session_id) {
  auto s = find_session(session_id);
  auto g = find_grammar(s->grammar_id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) throw service_error(409, "nothing to undo");
  s->atad = std::move(s->history.back());
  s->history.pop_back();
  if (log_dir_) log(session_log(s->id), json{{"event", "undo"}});
  return state_of(*s, *g);
}

json SessionStore::get_result(const std::string& session_id) const {
  auto s = find_session(session_id);
  std::lock_guard lock(s->mutex);
  json j;
  if (!is_complete(s->atad)) {
    j["status"] = "in_progress";
    j["partial_string"] = join(partial_crone(s->atad), " ");
    return j;
  }
  Tad tad = finalize(s->atad);
  j["status"] = "complete";
  j["string"] = join(crone(tad));
  j["chain"] = crone(tad);
  j["tad"] = to_json(tad.atad());
  return j;
}

json SessionStore::state_of(const Session& s, const StoredGrammar& g) {
  const Atad& t = s.atad;
  const Dmg& dmg = *g.dmg;
  bool complete = is_complete(t);
  json j;
  j["id"] = s.id;
  j["grammar_id"] = s.grammar_id;
  j["status"] = complete ? "complete" : "in_progress";
  j["atad"] = to_json(t);
  json frontier = json::array();
  for (AtadNodeId id : t.pending()) {
    const AtadNode& n = t.node(id);
    json f;
    f["node_id"] = index_of(id);
    f["label"] = n.label;
    if (n.state == AtadState::pending_choice) {
      f["kind"] = "or";
      json alts = json::array();
      for (const DmgEdge& e : dmg.out_edges(n.dmg_ref)) {
        alts.push_back(json{{"ordinal", e.ordinal}, {"target_label", dmg.node(e.to).label}});
      }
      f["alternatives"] = std::move(alts);
    } else {
      f["kind"] = "lexeme";
      f["allowed"] = *dmg.node(n.dmg_ref).lexemes;
    }
    frontier.push_back(std::move(f));
  }
  j["frontier"] = std::move(frontier);
  j["partial_string"] = join(partial_crone(t), " ");
  if (complete) j["string"] = join(crone(finalize(t)));
  j["history_depth"] = s.history.size();
  return j;
}

std::filesystem::path SessionStore::session_log(const std::string& session_id) const {
  return *log_dir_ / (session_id + ".jsonl");
}

void SessionStore::log(const std::filesystem::path& file, const json& event) const {
  std::lock_guard lock(log_mutex_);
  std::ofstream out(file, std::ios::app);
  out << event.dump() << '\n';
}

std::size_t SessionStore::restore() {
  if (!log_dir_) return 0;
  auto read_lines = [](const std::filesystem::path& p) {
    std::vector<json> events;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) events.push_back(json::parse(line));
    }
    return events;
  };

  std::unique_lock lock(mutex_);
  auto grammar_file = *log_dir_ / "grammars.jsonl";
  if (std::filesystem::exists(grammar_file)) {
    for (const json& e : read_lines(grammar_file)) {
      auto id = e.at("grammar_id").get<std::string>();
      grammars_[id] = add_grammar(id, e.at("source").get<std::string>());
      next_grammar_ = std::max(next_grammar_, parse_counter(id, 'g') + 1);
    }
  }
  lock.unlock();

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*log_dir_)) {
    if (entry.path().extension() == ".jsonl" && entry.path().filename() != "grammars.jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::size_t restored = 0;
  for (const auto& file : files) {
    auto events = read_lines(file);
    if (events.empty() || events.front().value("event", "") != "create") continue;
    std::string id = file.stem().string();
    auto s = add_session(id, find_grammar(events.front().at("grammar_id").get<std::string>()));
    for (std::size_t i = 1; i < events.size(); ++i) {
      const json& e = events[i];
      auto kind = e.at("event").get<std::string>();
      if (kind == "choice") {
        auto node = static_cast<AtadNodeId>(e.at("node_id").get<std::size_t>());
        advance(*s, auto_expand(choose(s->atad, node, e.at("ordinal").get<int>())));
      } else if (kind == "lexeme") {
        auto node = static_cast<AtadNodeId>(e.at("node_id").get<std::size_t>());
        advance(*s, set_lexeme(s->atad, node, e.at("value").get<std::string>()));
      } else if (kind == "undo" && !s->history.empty()) {
        s->atad = std::move(s->history.back());
        s->history.pop_back();
      }
    }
    std::unique_lock relock(mutex_);
    sessions_[id] = s;
    next_session_ = std::max(next_session_, parse_counter(id, 's') + 1);
    ++restored;
  }
  return restored;
}

}  // namespace dmgforge
