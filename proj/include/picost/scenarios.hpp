#pragma once

#include "picost/costenv.hpp"
#include "picost/semantics.hpp"
#include "picost/syntax.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace picost {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  System system;
  CostEnv env;
  InputPolicy universe; // candidate input payloads for action views
  std::string notes;

  Configuration config() const { return make_config(env, system); }
};

using ScenarioParams = std::map<std::string, std::string>;

// `id` may carry its main parameter inline: "ud(42)", "fund-transfer(5)",
// "publishing(216)". Recognised keys: env, k, funds, p.
Scenario build(const std::string& id, const ScenarioParams& params = {});

std::vector<std::string> scenario_ids();

// Run constraints for a named variant ("no-store", "store", "" = none).
RunOptions run_variant(const std::string& variant);

// Process bodies shared with the corpus and witness files.
namespace code {
Thread reader();
Thread library();
Thread store();
Thread publisher();
Thread publisher_kickback();
Thread news_service();
Thread advertiser();
Thread advertiser_kickback();
Thread publish_reader();
Thread up_down();
} // namespace code

} // namespace picost
