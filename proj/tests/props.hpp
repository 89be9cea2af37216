#pragma once
// Property suites shared by the unit tests and the acceptance run.

#include "picost/equivalence.hpp"
#include "picost/frontend.hpp"
#include "picost/scenarios.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace props {

using namespace picost;

struct Tally {
  std::size_t count = 0;    // cases examined
  std::size_t failures = 0;
  std::string first;        // first failure

  void fail(const std::string& why) {
    if (!failures++) first = why;
  }
  bool ok() const { return failures == 0; }
};

// ------------------------------------------------ reductions vs tau actions

inline std::vector<std::pair<std::int64_t, std::string>> tau_moves(const std::vector<Transition>& ts) {
  std::vector<std::pair<std::int64_t, std::string>> out;
  for (auto& t : ts)
    if (t.label.is_tau()) out.push_back({t.weight, normalize(t.target).key()});
  std::sort(out.begin(), out.end());
  return out;
}

inline Tally tau_agreement() {
  const std::vector<std::string> ids = {"library-local",   "library-central", "fund-transfer(5)", "publishing(327)",
                                        "publishing(216)", "kickback(327)",   "kickback(216)",    "library-sys-local",
                                        "pa-k",            "lib-central"};
  Tally t;
  for (auto& id : ids) {
    Scenario s = build(id);
    Lts l = explore(s.config(), s.universe, 60);
    for (auto& c : l.states) {
      ++t.count;
      if (tau_moves(reductions(c)) != tau_moves(concrete_actions(c, s.universe)))
        t.fail(id + ": " + to_text(c.sys));
    }
  }
  return t;
}

// ------------------------------------------- game solver vs brute force

constexpr std::int64_t kCap = 32;
constexpr std::int64_t kInf = kCap + 1;

struct Weak {
  std::string label;
  std::int64_t w;
  std::size_t to;
};

// All weak moves; tau edges only go to larger states, so paths are finite.
inline std::vector<Weak> weak_moves(TableWlts& g, std::size_t s) {
  std::vector<std::pair<std::size_t, std::int64_t>> pre{{s, 0}};
  for (std::size_t i = 0; i < pre.size(); ++i)
    for (auto& e : g.steps(pre[i].first))
      if (e.tau) pre.push_back({e.to, pre[i].second + e.weight});
  std::vector<Weak> out;
  for (auto& [p, w] : pre) out.push_back({"tau", w, p});
  for (auto& [p, w] : pre)
    for (auto& e : g.steps(p)) {
      if (e.tau) continue;
      std::vector<std::pair<std::size_t, std::int64_t>> post{{e.to, w + e.weight}};
      for (std::size_t i = 0; i < post.size(); ++i)
        for (auto& f : g.steps(post[i].first))
          if (f.tau) post.push_back({f.to, post[i].second + f.weight});
      for (auto& [q, v] : post) out.push_back({e.label, v, q});
    }
  return out;
}

// Least credit for every pair straight from the transfer clauses, by upward
// iteration from 0; kInf when none up to the cap.
inline std::vector<std::vector<std::int64_t>> oracle(TableWlts& g) {
  std::size_t n = g.table.size();
  std::vector<std::vector<Weak>> weak(n);
  for (std::size_t s = 0; s < n; ++s) weak[s] = weak_moves(g, s);
  std::vector<std::vector<std::int64_t>> thr(n, std::vector<std::int64_t>(n, 0));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        std::int64_t need = 0;
        for (auto& e : g.steps(s)) {
          std::int64_t best = kInf;
          for (auto& m : weak[t])
            if (m.label == e.label && thr[e.to][m.to] < kInf) best = std::min(best, thr[e.to][m.to] - e.weight + m.w);
          need = std::max(need, best);
        }
        for (auto& e : g.steps(t)) {
          std::int64_t best = kInf;
          for (auto& m : weak[s])
            if (m.label == e.label && thr[m.to][e.to] < kInf) best = std::min(best, thr[m.to][e.to] - m.w + e.weight);
          need = std::max(need, best);
        }
        need = std::min(need, kInf);
        if (need > thr[s][t]) {
          thr[s][t] = need;
          changed = true;
        }
      }
  }
  return thr;
}

inline TableWlts random_wlts(std::mt19937& rng) {
  TableWlts g;
  std::size_t n = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
  for (std::size_t i = 0; i < n; ++i) g.add_state();
  const char* labels[] = {"a", "b", "tau"};
  for (std::size_t s = 0; s < n; ++s) {
    int k = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int j = 0; j < k; ++j) {
      std::string l = labels[std::uniform_int_distribution<int>(0, 2)(rng)];
      std::int64_t w = std::uniform_int_distribution<int>(-3, 3)(rng);
      if (l == "tau") {
        if (s + 1 >= n) continue;
        g.add(s, l, w, std::uniform_int_distribution<std::size_t>(s + 1, n - 1)(rng));
      } else {
        g.add(s, l, w, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
      }
    }
  }
  return g;
}

inline GameOptions game_opts() {
  GameOptions o;
  o.credit_cap = kCap;
  o.weak.tau_depth = 16;
  return o;
}

inline std::string where(int k, std::size_t s, std::size_t t) {
  std::ostringstream os;
  os << "wlts " << k << " pair (" << s << "," << t << ")";
  return os.str();
}

// Solver against the oracle, plus reflexivity, monotonicity in the credit
// and additivity over a middle state. count = wLTSs examined.
inline Tally game_laws(unsigned seed, int systems) {
  std::mt19937 rng(seed);
  Tally tl;
  for (int k = 0; k < systems; ++k) {
    TableWlts g = random_wlts(rng);
    ++tl.count;
    auto want = oracle(g);
    std::size_t n = g.table.size();
    std::vector<std::vector<std::int64_t>> thr(n, std::vector<std::int64_t>(n));
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        GameResult r = solve_game(g, s, t, 0, game_opts());
        if (r.truncated) tl.fail(where(k, s, t) + ": truncated");
        thr[s][t] = r.root_threshold > kCap ? kInf : r.root_threshold;
        if (thr[s][t] != want[s][t])
          tl.fail(where(k, s, t) + ": solver " + std::to_string(thr[s][t]) + ", oracle " + std::to_string(want[s][t]));
        if ((r.verdict == Verdict::Proven) != (want[s][t] == 0)) tl.fail(where(k, s, t) + ": verdict at 0");
        if (r.verdict == Verdict::Proven && !check_family(g, r.witness, game_opts()))
          tl.fail(where(k, s, t) + ": witness rejected");
      }
    for (std::size_t s = 0; s < n; ++s) {
      if (thr[s][s] != 0) tl.fail(where(k, s, s) + ": not reflexive");
      for (std::size_t t = 0; t < n; ++t) {
        if (thr[s][t] < kInf) {
          for (std::int64_t m : {thr[s][t], thr[s][t] + 1, kCap})
            if (m <= kCap && solve_game(g, s, t, m, game_opts()).verdict != Verdict::Proven)
              tl.fail(where(k, s, t) + ": not monotone at " + std::to_string(m));
          if (thr[s][t] > 0 && solve_game(g, s, t, thr[s][t] - 1, game_opts()).verdict == Verdict::Proven)
            tl.fail(where(k, s, t) + ": holds below its threshold");
        }
        for (std::size_t u = 0; u < n; ++u)
          if (thr[s][t] + thr[t][u] <= kCap && thr[s][u] > thr[s][t] + thr[t][u])
            tl.fail(where(k, s, u) + ": not additive via " + std::to_string(t));
      }
    }
  }
  return tl;
}

// ------------------------------------------------------ charging

// count = sequences; every successful charge is checked against the
// transfer equations, every refusal against the funds precondition.
inline Tally charge_sequences(unsigned seed, int sequences, std::size_t* charges = nullptr) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Tally tl;
  std::size_t done = 0;
  for (int seq = 0; seq < sequences; ++seq) {
    ++tl.count;
    CostEnv e;
    int owners = pick(2, 4), res = pick(1, 4);
    bool simple = seq % 2 == 0;
    for (int i = 0; i < owners; ++i) e.set_funds("o" + std::to_string(i), Funds::of(pick(0, 40)));
    for (int i = 0; i < res; ++i)
      e.declare(Name("r" + std::to_string(i)),
                ResType{std::uint64_t(pick(0, 10)), simple ? 0u : std::uint64_t(pick(0, 6))});
    auto total = [](const CostEnv& x) {
      std::uint64_t t = 0;
      for (auto& [_, f] : x.owners) t += f.amount;
      return t;
    };
    std::uint64_t start = total(e);
    std::int64_t provided = 0;
    for (int step = 0; step < 20; ++step) {
      Owner u = "o" + std::to_string(pick(0, owners - 1)), p = "o" + std::to_string(pick(0, owners - 1));
      Name a("r" + std::to_string(pick(0, res - 1)));
      ResType ty = e.resource(a).type;
      bool payable = e.funds(u).amount >= ty.use && e.funds(p).amount >= ty.provide;
      auto next = e.charge(u, a, p);
      std::string tag = "sequence " + std::to_string(seq) + " step " + std::to_string(step);
      if (bool(next) != payable) tl.fail(tag + ": precondition");
      if (!next) continue;
      ++done;
      provided += ty.provide;
      if (next->record - e.record != std::int64_t(ty.use) - std::int64_t(ty.provide)) tl.fail(tag + ": record");
      if (u != p) {
        if (next->funds(u).amount + ty.use != e.funds(u).amount) tl.fail(tag + ": user funds");
        if (next->funds(p).amount + ty.provide != e.funds(p).amount + ty.use) tl.fail(tag + ": provider funds");
      } else if (next->funds(u).amount + ty.provide != e.funds(u).amount) {
        tl.fail(tag + ": self charge");
      }
      for (auto& [o, f] : e.owners)
        if (o != u && o != p && next->funds(o) != f) tl.fail(tag + ": bystander funds");
      e = *next;
    }
    // simple environments keep the total; otherwise exactly the provide costs leave
    if (std::int64_t(start) - std::int64_t(total(e)) != provided) tl.fail("sequence " + std::to_string(seq) + ": total");
    if (simple && total(e) != start) tl.fail("sequence " + std::to_string(seq) + ": not conserved");
  }
  if (charges) *charges = done;
  return tl;
}

// ------------------------------------------------ non-compositionality

struct NonComp {
  Verdict single, both, both_at_cap;
};

inline NonComp non_compositional() {
  CostEnv g, d;
  for (CostEnv* e : {&g, &d}) {
    e->set_funds("o", Funds::inf());
    e->set_funds("p", Funds::inf());
  }
  g.declare(Name("a"), {20, 0});
  g.declare(Name("b"), {10, 0});
  d.declare(Name("a"), {10, 0});
  d.declare(Name("b"), {10, 0});
  d.set_funds("o", Funds::of(10));
  InputPolicy none;
  none.env_names = false;
  none.fresh_inputs = false;
  CheckOptions o;
  o.bounds.tau_depth = 16;
  System one = parse_system("[o] a!()");
  System two = parse_system("[o] a!() | [o] b!()");
  return NonComp{check_amortised({g, one}, {d, one}, 0, none, o).verdict,
                 check_amortised({g, two}, {d, two}, 0, none, o).verdict,
                 check_amortised({g, two}, {d, two}, kCap, none, o).verdict};
}

} // namespace props
