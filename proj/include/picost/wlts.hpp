#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace picost {

// A weighted LTS over integer state ids. Labels are compared as strings.
struct Step {
  std::string label;
  bool tau = false;
  std::int64_t weight = 0;
  std::size_t to = 0;
};

class WltsView {
public:
  virtual ~WltsView() = default;
  virtual const std::vector<Step>& steps(std::size_t s) = 0;
  // Extra admissibility of a pair (left, right); default: always.
  virtual bool node_ok(std::size_t, std::size_t) { return true; }
  virtual std::string describe(std::size_t s) { return std::to_string(s); }
};

// Explicit finite wLTS, used by tests and the hand-built oracles.
class TableWlts : public WltsView {
public:
  std::vector<std::vector<Step>> table;
  std::size_t add_state() {
    table.emplace_back();
    return table.size() - 1;
  }
  void add(std::size_t from, std::string label, std::int64_t w, std::size_t to) {
    bool tau = label == "tau";
    table.at(from).push_back(Step{std::move(label), tau, w, to});
  }
  const std::vector<Step>& steps(std::size_t s) override { return table.at(s); }
};

struct WeakStep {
  std::string label;
  bool tau = false;
  std::int64_t min_weight = 0;
  std::int64_t max_weight = 0;
  std::size_t to = 0;
};

struct WeakSet {
  std::vector<WeakStep> moves; // sorted by (label, to)
  std::map<std::string, std::vector<std::size_t>> by_label;
  bool truncated = false;
};

struct WeakLimits {
  unsigned tau_depth = 64;
  std::size_t state_cap = 20000;
  std::int64_t weight_cap = 512;
};

// tau* lambda tau* moves (and tau-hat, including the stay-put move).
// Weights of tau cycles saturate at +-weight_cap.
class WeakCache {
public:
  WeakCache(WltsView& v, WeakLimits lim) : view_(v), lim_(lim) {}
  const WeakSet& weak(std::size_t s);

  struct Reach {
    std::int64_t min_w, max_w;
  };
  struct Closure {
    std::map<std::size_t, Reach> reach;
    bool truncated = false;
  };
  const Closure& tau_closure(std::size_t s);

private:
  WltsView& view_;
  WeakLimits lim_;
  std::map<std::size_t, Closure> closures_;
  std::map<std::size_t, WeakSet> weak_;
};

enum class Verdict { Proven, RefutedWithinBounds, Inconclusive };
std::string verdict_name(Verdict v);

struct GameOptions {
  std::int64_t credit_cap = 32;
  WeakLimits weak;
  std::size_t pair_cap = 200000;
  bool negative_credit = false; // debug: credits may dip to -cap
};

struct TraceStep {
  bool left_challenges = true;
  std::string label;
  std::int64_t challenger_weight = 0;
  std::int64_t defender_weight = 0;
  std::int64_t credit_before = 0;
  std::int64_t credit_after = 0;
  std::size_t left = 0, right = 0; // pair after the exchange
  std::string note;
};

struct CreditedPair {
  std::size_t left, right;
  std::int64_t min_credit;
};

struct GameResult {
  Verdict verdict = Verdict::Inconclusive;
  std::int64_t root_threshold = 0; // > credit_cap means no credit suffices
  std::vector<CreditedPair> witness;
  std::vector<TraceStep> trace;
  std::string cause;
  std::size_t pairs = 0;
  bool truncated = false;
};

GameResult solve_game(WltsView& v, std::size_t s, std::size_t t, std::int64_t n0,
                      const GameOptions& opt);

// Independent check that a family of credited pairs satisfies the transfer
// clauses, using the weak moves of `v`. Identical pairs are admitted at any
// credit (up to identity).
bool check_family(WltsView& v, const std::vector<CreditedPair>& fam, const GameOptions& opt,
                  std::string* why = nullptr);

} // namespace picost
