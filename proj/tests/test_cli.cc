#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "dmgforge/cli.h"
#include "support.h"

using namespace dmgforge;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& name) { return std::string(DMGFORGE_TEST_DATA) + "/fixtures/" + name; }

}  // namespace

TEST_CASE("parse prints the canonical grammar") {
  Run r = run({"parse", path("example1.g")});
  CHECK(r.code == 0);
  CHECK(r.out == "S -> \"a\" S \"c\" | B ;\nB -> \"b\" B \"c\" | ;\n");
}

TEST_CASE("dnd matches the golden file") {
  Run r = run({"dnd", path("example1.g")});
  CHECK(r.code == 0);
  CHECK(r.out == testsupport::golden("example1.dnd"));
}

TEST_CASE("build") {
  Run json = run({"build", path("example1.g")});
  CHECK(json.code == 0);
  CHECK(nlohmann::json::parse(json.out)["nodes"].size() == 8);
  Run dot = run({"build", path("example1.g"), "--dot", "-"});
  CHECK(dot.out.rfind("digraph dmg {", 0) == 0);
}

TEST_CASE("enumerate") {
  Run r = run({"enumerate", path("example1.g"), "--max-len", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "<eps>\na c\nb c\na a c c\na b c c\nb b c c\n");
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "4", "--oracle"}).out == r.out);
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "4", "--serial"}).out == r.out);
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "4", "--node", "B"}).out == "<eps>\nb c\nb b c c\n");
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "4", "--node", "B", "--oracle"}).out ==
        "<eps>\nb c\nb b c c\n");
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "4", "--node", "Q"}).code == 1);
  CHECK(run({"enumerate", path("example1.g")}).code == 2);
  CHECK(run({"enumerate", path("example1.g"), "--max-len", "many"}).code == 2);
}

TEST_CASE("derive") {
  CHECK(run({"derive", path("example2.g"), "--choices", "1,2,3"}).out == "1+a\n");
  Run partial = run({"derive", path("example2.g"), "--choices", "1"});
  CHECK(partial.code == 0);
  CHECK(partial.out.rfind("incomplete: ⟨S⟩ + ⟨S⟩\n", 0) == 0);
  CHECK(run({"derive", path("lexical.g"), "--choices", "2", "--lexemes", "Id=y"}).out == "y=0\n");
  CHECK(run({"derive", path("example2.g"), "--choices", "1,x"}).code == 2);
  CHECK(run({"derive", path("example2.g"), "--choices", "7"}).code == 1);
  Run extra = run({"derive", path("example2.g"), "--choices", "2,1"});
  CHECK(extra.out == "1\n");
  CHECK(extra.err.find("unused") != std::string::npos);
}

TEST_CASE("analyze") {
  Run text = run({"analyze", path("example1.g")});
  CHECK(text.code == 0);
  CHECK(text.out.find("cycles: 2") != std::string::npos);
  Run json = run({"analyze", path("example2.g"), "--json"});
  auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["statistics"]["cycle_count"] == 2);
}

TEST_CASE("errors and exit codes") {
  for (const char* f : {"identity.g", "bad_infinity.g", "and_cycle.g"}) {
    CAPTURE(f);
    Run r = run({"build", path(f)});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"parse", path("missing.g")}).code == 1);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(kVersion) != std::string::npos);
  CHECK(run({"serve", "--listen", "nonsense"}).code == 2);
}
