// Times the parallel language kernel against the serial reference on a few
// grammars and checks that both produce the same chains.
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "dmgforge/derivation.h"
#include "dmgforge/dmg.h"

namespace {

struct Case {
  const char* name;
  const char* source;
  std::size_t bound;
};

const Case kCases[] = {
    {"anbmcnm", R"g(S -> "a" S "c" | B ; B -> "b" B "c" | ;)g", 14},
    {"sum", R"g(S -> S "+" S | "1" | "a" ;)g", 9},
    {"expr", R"g(
      E -> E "+" T | E "-" T | T ;
      T -> T "*" F | F ;
      F -> "(" E ")" | "x" | "y" | "2" ;
    )g", 7},
    {"stmts", R"g(
      Prog -> Stmt | Stmt ";" Prog ;
      Stmt -> Id "=" Expr | "if" Expr Stmt | ;
      Expr -> Id | Id "+" Expr | "0" ;
      %lexical Id = "x", "y" ;
    )g", 8},
};

template <class F>
double millis(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::cout << "threads " << omp_get_max_threads() << "\n";
  bool ok = true;
  for (const Case& c : kCases) {
    dmgforge::Dmg g = dmgforge::build_dmg_from_source(c.source);
    dmgforge::LanguageSample serial, parallel;
    double ts = 0, tp = 0;
    for (int r = 0; r < repeats; ++r) {
      ts += millis([&] { serial = dmgforge::language(g, c.bound, dmgforge::Kernel::serial); });
      tp += millis([&] { parallel = dmgforge::language(g, c.bound, dmgforge::Kernel::parallel); });
    }
    bool same = serial == parallel;
    ok = ok && same;
    std::cout << c.name << " bound=" << c.bound << " chains=" << serial.chains.size() << " serial=" << ts / repeats
              << "ms parallel=" << tp / repeats << "ms " << (same ? "match" : "MISMATCH") << "\n";
  }
  return ok ? 0 : 1;
}
