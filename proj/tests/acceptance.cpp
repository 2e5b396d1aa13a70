// Acceptance suite: runs the named end-to-end scenarios and prints one
// PASS/FAIL line per criterion. Exit 0 iff everything passed.
//
//   mapode_acceptance            run every scenario
//   mapode_acceptance <id>...    run selected scenarios
//   mapode_acceptance --list     list scenario ids

#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "mapode/scenarios.hpp"

int main(int argc, char** argv) {
  using namespace mapode;

  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);

  if (ids.size() == 1 && ids[0] == "--list") {
    for (const auto& s : scenario_registry()) std::printf("%-24s %s\n", s.id.c_str(), s.summary.c_str());
    return 0;
  }

  ScenarioContext ctx;
  ctx.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<const Scenario*> todo;
  if (ids.empty()) {
    for (const auto& s : scenario_registry()) todo.push_back(&s);
  } else {
    for (const auto& id : ids) {
      const Scenario* s = find_scenario(id);
      if (!s) {
        std::fprintf(stderr, "unknown scenario '%s' (try --list)\n", id.c_str());
        return 2;
      }
      todo.push_back(s);
    }
  }

  int failures = 0;
  for (const Scenario* s : todo) {
    ScenarioResult res;
    try {
      res = s->run(ctx);
    } catch (const std::exception& e) {
      res = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %-24s %s\n", res.pass ? "PASS" : "FAIL", s->id.c_str(),
                res.details.c_str());
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
