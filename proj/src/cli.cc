#include "dmgforge/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"

#include "dmgforge/analysis.h"
#include "dmgforge/derivation.h"
#include "dmgforge/error.h"
#include "dmgforge/server.h"
#include "dmgforge/tad.h"

namespace dmgforge {

namespace {

struct Options {
  std::string file;
  std::string output;
  std::string dot_path;
  std::string json_path;
  std::size_t max_len = 0;
  std::string node_label;
  bool oracle = false;
  bool serial = false;
  std::string choices;
  std::string lexemes;
  bool analyze_json = false;
  std::string listen;
  std::string log_dir;
  std::string static_dir;
};

// Thrown for unreadable inputs and grammar errors; exit code 1.
struct input_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_failure("cannot write '" + path + "'");
  f << text;
}

struct Loaded {
  Grammar grammar;
  DndGrammar dnd;
  std::shared_ptr<const Dmg> dmg;
};

Grammar load_grammar(const std::string& path, std::ostream& err) {
  Grammar g = parse_grammar(read_file(path));
  auto diags = validate(g);
  for (const auto& d : diags) {
    if (d.severity != Severity::info) err << path << ": " << severity_name(d.severity) << ": " << d.message << '\n';
  }
  if (has_errors(diags)) throw input_failure("grammar has errors");
  return g;
}

Loaded load(const std::string& path, std::ostream& err) {
  Loaded l{load_grammar(path, err), {}, nullptr};
  l.dnd = reduce_to_dnd(l.grammar);
  l.dmg = std::make_shared<const Dmg>(build_dmg(l.dnd));
  return l;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

int cmd_enumerate(const Options& o, std::ostream& out, std::ostream& err) {
  LanguageSample sample;
  if (o.oracle) {
    Grammar g = load_grammar(o.file, err);
    if (!o.node_label.empty()) {
      auto s = g.find(o.node_label);
      if (!s || g.is_terminal(*s)) throw input_failure("no nonterminal '" + o.node_label + "' in the grammar");
      g = GrammarBuilder(g).start(*s).build();
    }
    sample = oracle_enumerate(g, o.max_len);
  } else {
    Loaded l = load(o.file, err);
    NodeId node = l.dmg->start();
    if (!o.node_label.empty()) {
      auto n = l.dmg->find_label(o.node_label);
      if (!n) throw input_failure("no node labelled '" + o.node_label + "'");
      node = *n;
    }
    sample = derive_from(*l.dmg, node, o.max_len, o.serial ? Kernel::serial : Kernel::parallel);
  }
  std::ostringstream text;
  for (const Chain& c : sorted_by_length(sample)) text << (c.empty() ? "<eps>" : join(c, " ")) << '\n';
  emit(text.str(), o.output, out);
  return 0;
}

int cmd_derive(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o.file, err);
  std::vector<int> choices;
  for (const auto& c : split(o.choices, ',')) {
    try {
      choices.push_back(std::stoi(c));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--choices", "'" + c + "' is not an ordinal");
    }
  }
  std::vector<std::pair<std::string, std::string>> lexemes;
  for (const auto& item : split(o.lexemes, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--lexemes", "expected name=value, got '" + item + "'");
    lexemes.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }

  // Choices go to OR-leaves and lexemes to lexical leaves, left to right.
  Atad t = auto_expand(new_atad(l.dmg));
  std::size_t next_choice = 0;
  for (bool progressed = true; progressed;) {
    progressed = false;
    for (AtadNodeId id : t.pending()) {
      const AtadNode& n = t.node(id);
      if (n.state == AtadState::pending_choice && next_choice < choices.size()) {
        t = auto_expand(choose(t, id, choices[next_choice++]));
        progressed = true;
      } else if (n.state == AtadState::lexeme_pending) {
        auto it = std::find_if(lexemes.begin(), lexemes.end(), [&](const auto& kv) { return kv.first == n.label; });
        if (it == lexemes.end()) continue;
        t = set_lexeme(t, id, it->second);
        lexemes.erase(it);
        progressed = true;
      }
      if (progressed) break;
    }
  }
  if (next_choice < choices.size()) {
    err << "warning: " << choices.size() - next_choice << " unused choice(s)\n";
  }

  auto pending = t.pending();
  if (pending.empty()) {
    out << join(crone(finalize(t))) << '\n';
    return 0;
  }
  out << "incomplete: " << join(partial_crone(t), " ") << '\n';
  for (AtadNodeId id : pending) {
    const AtadNode& n = t.node(id);
    out << "  node " << index_of(id) << ' ' << n.label;
    if (n.state == AtadState::pending_choice) {
      out << " choose:";
      for (const DmgEdge& e : l.dmg->out_edges(n.dmg_ref)) out << ' ' << e.ordinal << "->" << l.dmg->node(e.to).label;
    } else {
      out << " lexeme:";
      for (const auto& v : *l.dmg->node(n.dmg_ref).lexemes) out << ' ' << v;
    }
    out << '\n';
  }
  return 0;
}

int cmd_serve(const Options& o, std::ostream& err) {
  ServeOptions so;
  std::string listen = o.listen;
  if (listen.empty()) {
    if (const char* env = std::getenv("DMG_FORGE_LISTEN")) listen = env;
  }
  if (!listen.empty()) {
    try {
      std::tie(so.host, so.port) = parse_listen(listen);
    } catch (const std::exception& e) {
      throw CLI::ValidationError("--listen", e.what());
    }
  }
  if (!o.log_dir.empty()) so.log_dir = o.log_dir;
  if (!o.static_dir.empty()) so.static_dir = o.static_dir;
  if (!serve(so)) {
    err << "error: could not listen on " << so.host << ':' << so.port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision-making graphs for context-free grammars", "dmg-forge"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* parse = app.add_subcommand("parse", "Check a grammar and print it back in canonical form");
  parse->add_option("file", o.file, "Grammar file")->required();
  parse->add_option("-o,--output", o.output, "Write to a file instead of stdout");

  auto* dnd = app.add_subcommand("dnd", "Print the grammar reduced to one-to-one form");
  dnd->add_option("file", o.file, "Grammar file")->required();
  dnd->add_option("-o,--output", o.output, "Write to a file instead of stdout");

  auto* build = app.add_subcommand("build", "Build the decision-making graph");
  build->add_option("file", o.file, "Grammar file")->required();
  build->add_option("--dot", o.dot_path, "Write Graphviz DOT here ('-' for stdout)");
  build->add_option("--json", o.json_path, "Write graph JSON here ('-' for stdout)");

  auto* enumerate = app.add_subcommand("enumerate", "List every chain up to a length");
  enumerate->add_option("file", o.file, "Grammar file")->required();
  enumerate->add_option("--max-len", o.max_len, "Longest chain, in items")->required();
  enumerate->add_option("--node", o.node_label, "Derive from this node instead of the start");
  enumerate->add_flag("--oracle", o.oracle, "Use the brute-force grammar enumeration");
  enumerate->add_flag("--serial", o.serial, "Use the serial reference kernel");
  enumerate->add_option("-o,--output", o.output, "Write to a file instead of stdout");

  auto* derive = app.add_subcommand("derive", "Grow a decision tree from a list of choices");
  derive->add_option("file", o.file, "Grammar file")->required();
  derive->add_option("--choices", o.choices, "OR-edge ordinals, e.g. \"1,2,3\", applied left to right");
  derive->add_option("--lexemes", o.lexemes, "Lexemes as name=value,... applied left to right");

  auto* analyze_cmd = app.add_subcommand("analyze", "Report inaccessible and useless symbols, cycles, statistics");
  analyze_cmd->add_option("file", o.file, "Grammar file")->required();
  analyze_cmd->add_flag("--json", o.analyze_json, "Print JSON");
  analyze_cmd->add_option("-o,--output", o.output, "Write to a file instead of stdout");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  serve_cmd->add_option("--listen", o.listen, "host:port (default 127.0.0.1:8080, or $DMG_FORGE_LISTEN)");
  serve_cmd->add_option("--log-dir", o.log_dir, "Append session events here and restore them on start");
  serve_cmd->add_option("--static-dir", o.static_dir, "Serve UI assets from this directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) {
      Grammar g = load_grammar(o.file, err);
      emit(render_grammar(g), o.output, out);
    } else if (dnd->parsed()) {
      Loaded l = load(o.file, err);
      emit(render_grammar(l.dnd.grammar), o.output, out);
    } else if (build->parsed()) {
      Loaded l = load(o.file, err);
      if (o.dot_path.empty() && o.json_path.empty()) {
        out << export_json(*l.dmg) << '\n';
      } else {
        if (!o.dot_path.empty()) emit(export_dot(*l.dmg), o.dot_path, out);
        if (!o.json_path.empty()) emit(export_json(*l.dmg) + "\n", o.json_path, out);
      }
    } else if (enumerate->parsed()) {
      return cmd_enumerate(o, out, err);
    } else if (derive->parsed()) {
      return cmd_derive(o, out, err);
    } else if (analyze_cmd->parsed()) {
      Loaded l = load(o.file, err);
      AnalysisReport report = analyze(*l.dmg);
      emit(o.analyze_json ? to_json(report).dump() + "\n" : to_text(report), o.output, out);
    } else if (serve_cmd->parsed()) {
      return cmd_serve(o, err);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const input_failure& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const forge_error& e) {
    err << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dmgforge
