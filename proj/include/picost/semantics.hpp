#pragma once

#include "picost/costenv.hpp"
#include "picost/syntax.hpp"
#include "picost/wlts.hpp"

#include <deque>
#include <optional>
#include <unordered_map>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace picost {

struct Label {
  enum class Kind { Tau, In, Out, Fund };
  Kind kind = Kind::Tau;
  bool abstract = false;
  Owner user;     // erased ("") on abstract outputs
  Owner provider; // erased ("") on abstract inputs
  std::vector<std::pair<Name, ResType>> bound;
  Name chan;
  std::vector<Value> payload;
  std::uint64_t amount = 0; // Fund

  static Label tau() { return Label{}; }
  bool is_tau() const { return kind == Kind::Tau; }
  NameSet names() const;
  std::string str() const;

  bool operator==(const Label&) const = default;
  bool operator<(const Label& o) const { return str() < o.str(); }
};

struct Transition {
  Label label;
  std::int64_t weight = 0;
  Configuration target;
  std::string info; // reduction rule name, for traces
};

// Candidate payloads for input actions.
struct InputPolicy {
  std::vector<Value> values;          // scenario value universe
  bool env_names = true;              // also every name of dom(Gamma^u)
  std::vector<ResType> fresh_types;   // palette for fresh names
  bool fresh_from_env = true;         // add the types already registered
  bool fresh_inputs = true;
};

struct Bounds {
  unsigned tau_depth = 64;
  std::int64_t weight_cap = 512;
  std::size_t state_cap = 20000;
  std::int64_t credit_cap = 32;
};

// Canonical system (bound names avoid the env domain), dynamic names
// garbage collected.
Configuration normalize(const Configuration& c);
Configuration make_config(const CostEnv& env, const System& sys);

std::vector<Transition> reductions(const Configuration& c);
std::vector<Transition> concrete_actions(const Configuration& c, const InputPolicy& pol = {});
std::vector<Transition> abstract_actions(const Configuration& c, const std::set<Owner>& observers,
                                         const std::set<std::uint64_t>& quanta,
                                         const InputPolicy& pol = {});
// usage costs of registered resources plus 0
std::set<std::uint64_t> default_quanta(const CostEnv& env);

struct WeakMove {
  Label label;
  std::int64_t min_weight = 0;
  std::int64_t max_weight = 0;
  Configuration target;
};
struct WeakResult {
  std::vector<WeakMove> moves;
  bool truncated = false;
};
WeakResult weak_closure(const Configuration& c, const InputPolicy& pol, const Bounds& b);

struct Barb {
  Name chan;
  char dir = '!';
  auto operator<=>(const Barb&) const = default;
};
struct BarbResult {
  std::set<Barb> barbs;
  bool truncated = false;
};
BarbResult barbs(const Configuration& c, unsigned depth);

struct RunOptions {
  std::size_t max_steps = 1000;
  std::set<Name> avoid;   // never fire a comm on these
  std::set<Name> require; // accepted runs must fire each of these
  bool stop_on_cycle = true;
};
struct RunStep {
  std::string info;
  std::int64_t weight = 0;
  Configuration after;
};
struct RunResult {
  Configuration start;
  std::vector<RunStep> steps;
  bool quiescent = false;
  bool cycled = false;
  bool found = true; // false when no run satisfies the constraints
};
RunResult run(const Configuration& c, const RunOptions& opt = {});

struct Lts {
  std::vector<Configuration> states;
  struct Edge {
    std::size_t from;
    Label label;
    std::int64_t weight;
    std::size_t to;
  };
  std::vector<Edge> edges;
  bool truncated = false;
};
Lts explore(const Configuration& c, const InputPolicy& pol, std::size_t max_states);
std::string to_dot(const Lts& lts);
std::string digest(const std::string& text);

enum class ViewKind { Concrete, Abstract, TauOnly };

// Configurations as a wLTS. States are normalized with the record zeroed;
// step weights carry the record deltas.
class ConfigView : public WltsView {
public:
  ConfigView(ViewKind kind, InputPolicy pol, std::set<Owner> observers = {},
             bool node_condition = true);

  std::size_t intern(const Configuration& c);
  const Configuration& state(std::size_t s) const { return states_.at(s); }
  std::size_t size() const { return states_.size(); }
  const std::vector<Transition>& transitions(std::size_t s);
  const std::vector<Step>& steps(std::size_t s) override;
  bool node_ok(std::size_t l, std::size_t r) override;
  std::string describe(std::size_t s) override;

  ViewKind kind() const { return kind_; }
  const std::set<Owner>& observers() const { return observers_; }
  const InputPolicy& policy() const { return pol_; }
  // Fixed fund quanta; default is per-state usage costs plus 0.
  std::optional<std::set<std::uint64_t>> quanta;

private:
  ViewKind kind_;
  InputPolicy pol_;
  std::set<Owner> observers_;
  bool node_condition_;
  std::deque<Configuration> states_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::deque<std::optional<std::vector<Transition>>> trans_;
  std::deque<std::optional<std::vector<Step>>> steps_;
};

} // namespace picost
