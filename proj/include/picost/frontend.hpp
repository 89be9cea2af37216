#pragma once

#include "picost/costenv.hpp"
#include "picost/equivalence.hpp"
#include "picost/syntax.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace picost {

// `where` is "line:col" for program text, a JSON pointer for documents.
struct ParseError : std::runtime_error {
  std::string where;
  ParseError(const std::string& msg, std::string at)
      : std::runtime_error(at.empty() ? msg : at + ": " + msg), where(std::move(at)) {}
};

struct Definition {
  std::string name;
  std::vector<std::string> params;
  Thread body; // calls unexpanded
  int line = 0;
};

struct Program {
  std::map<std::string, Definition> defs;
  std::optional<System> system;
};

// Definitions (`def D(x) = thread;`) followed by an optional entry system.
// `base` supplies earlier definitions; `template_vars` are free value
// variables allowed in the entry system.
Program parse_program(const std::string& text, const Program* base = nullptr,
                      const std::vector<std::string>& template_vars = {});
System parse_system(const std::string& text, const Program* base = nullptr,
                    const std::vector<std::string>& template_vars = {});
Thread parse_thread(const std::string& text, const Program* base = nullptr);
Value parse_value(const std::string& text);
// Expanded body of D applied to args.
Thread expand_call(const Program& prog, const std::string& name, const std::vector<Value>& args);

std::string pretty(const System& s);
std::string pretty(const CostEnv& env);

CostEnv parse_env(const nlohmann::json& j, const std::string& pointer = "");
CostEnv parse_env_text(const std::string& text);
nlohmann::json env_to_json(const CostEnv& env);

WitnessFamily parse_witness(const nlohmann::json& j);
WitnessFamily parse_witness_text(const std::string& text);

std::string read_file(const std::string& path);

} // namespace picost
