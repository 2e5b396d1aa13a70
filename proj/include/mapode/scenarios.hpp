#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mapode {

struct ScenarioContext {
  int threads = 2;
};

struct ScenarioResult {
  bool pass = false;
  std::string details;
};

struct Scenario {
  std::string id;
  std::string summary;
  std::function<ScenarioResult(const ScenarioContext&)> run;
};

// Named end-to-end checks; the acceptance suite and the `reproduce`
// subcommand share this registry.
const std::vector<Scenario>& scenario_registry();

const Scenario* find_scenario(const std::string& id);

}  // namespace mapode
