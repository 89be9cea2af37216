#pragma once

#include "picost/costenv.hpp"
#include "picost/semantics.hpp"
#include "picost/wlts.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace picost {

struct CheckOptions {
  Bounds bounds;
  bool negative_credit = false;
  std::size_t pair_cap = 200000;

  GameOptions game() const;
};

struct CheckResult {
  Verdict verdict = Verdict::Inconclusive;
  std::int64_t threshold = 0; // least credit for the root pair; > cap if none
  std::size_t pairs = 0;
  bool truncated = false;
  std::string cause;
  std::vector<std::string> witness; // "n: left ~ right"
  std::vector<TraceStep> steps;
  std::vector<std::string> trace; // rendered steps
};

// Def 3.2 game over the concrete action view.
CheckResult check_amortised(const Configuration& c, const Configuration& d, std::int64_t n0,
                            const InputPolicy& pol = {}, const CheckOptions& opt = {});
// Abstract O-actions plus fund transfers; node condition on observer funds.
CheckResult check_abstract_preorder(const Configuration& c, const Configuration& d, std::int64_t n0,
                                    const std::set<Owner>& observers, const InputPolicy& pol = {},
                                    const CheckOptions& opt = {}, bool node_condition = true);
// Reductions only.
CheckResult check_cost_improving(const Configuration& c, const Configuration& d, std::int64_t n0,
                                 const CheckOptions& opt = {});
// Generic entry point on a prepared view.
CheckResult check_on_view(ConfigView& view, const Configuration& c, const Configuration& d,
                          std::int64_t n0, const CheckOptions& opt);

struct WitnessEntry {
  std::string name;
  System left, right; // templates; parameters occur as value variables
  std::int64_t min_credit = 0;
  std::string env_left, env_right;
  std::vector<std::string> params;
  std::vector<std::vector<Value>> domains;
};

struct WitnessFamily {
  std::map<std::string, CostEnv> envs;
  std::map<std::string, std::vector<Value>> carriers;
  InputPolicy inputs;
  ViewKind view = ViewKind::Concrete;
  std::set<Owner> observers;
  std::vector<WitnessEntry> entries;
};

struct EntryReport {
  std::string name;
  bool ok = true;
  std::size_t instances = 0;
  std::string failure;
};

struct WitnessReport {
  bool ok = true;
  bool truncated = false;
  std::vector<EntryReport> entries;
};

// Checks both transfer clauses for every instance at its minimal credit,
// matching successors against the family up to beta-moves.
WitnessReport verify_witness(const WitnessFamily& fam, const CheckOptions& opt = {});

// Substitute a value for a template parameter throughout a system.
System instantiate(const System& s, const std::string& x, const Value& v);

} // namespace picost
