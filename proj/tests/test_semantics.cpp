#include "helpers.hpp"
#include "picost/frontend.hpp"
#include "picost/scenarios.hpp"
#include "picost/semantics.hpp"

#include <doctest.h>

using namespace th;

namespace {

CostEnv env_ou(std::uint64_t fo, std::uint64_t fp, ResType a) {
  CostEnv e;
  e.set_funds("o", Funds::of(fo));
  e.set_funds("p", Funds::of(fp));
  e.declare(Name("a"), a);
  e.declare(Name("v"), {});
  return e;
}

const CostEnv& final_env(const RunResult& r) { return r.steps.empty() ? r.start.env : r.steps.back().after.env; }

} // namespace

TEST_CASE("communication charges the sender as user and the receiver as provider") {
  Configuration c = make_config(env_ou(10, 10, {3, 1}), parse_system("[o] a!(v) | [p] a?(x)"));
  auto rs = reductions(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].weight == 2);
  CHECK(rs[0].target.env.funds("o") == Funds::of(7));
  CHECK(rs[0].target.env.funds("p") == Funds::of(12));
  CHECK(struct_eq(rs[0].target.sys, System::nil()));
}

TEST_CASE("unpayable communication is blocked") {
  Configuration c = make_config(env_ou(2, 10, {3, 1}), parse_system("[o] a!(v) | [p] a?(x)"));
  CHECK(reductions(c).empty());
  Configuration d = make_config(env_ou(10, 0, {3, 1}), parse_system("[o] a!(v) | [p] a?(x)"));
  CHECK(reductions(d).empty());
}

TEST_CASE("payload substitution") {
  CostEnv e = env_ou(10, 10, {});
  e.declare(Name("b"), {});
  Configuration c = make_config(e, parse_system("[o] a!(v) | [p] a?(x).b!(x)"));
  auto rs = reductions(c);
  REQUIRE(rs.size() == 1);
  CHECK(struct_eq(rs[0].target.sys, parse_system("[p] b!(v)")));
}

TEST_CASE("restricted channels are registered with the standard policy") {
  CostEnv e = env_ou(10, 10, {});
  e.resources.at(Name("a")).policy = RecPolicy::custom(-1, 1);
  // new c:(2,1) in ([o] c!() | [p] c?())  : standard record 2 - 1
  Configuration c = make_config(e, parse_system("new c:(2,1) in ([o] c!() | [p] c?())"));
  auto rs = reductions(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].weight == 1);
  CHECK(rs[0].target.env.funds("o") == Funds::of(8));
  CHECK(rs[0].target.env.funds("p") == Funds::of(11));
  // the dead restriction is gone afterwards
  CHECK_FALSE(rs[0].target.env.has(Name("c")));
}

TEST_CASE("concrete actions: output and input") {
  CostEnv e = env_ou(10, 10, {3, 1});
  InputPolicy pol;
  pol.values = {N("v")};
  pol.env_names = false;
  pol.fresh_inputs = false;
  auto outs = concrete_actions(make_config(e, parse_system("[o] a!(v)")), pol);
  // one per possible provider
  REQUIRE(outs.size() == 2);
  for (auto& t : outs) {
    CHECK(t.label.kind == Label::Kind::Out);
    CHECK(t.label.user == "o");
    CHECK(t.weight == 2);
  }
  auto ins = concrete_actions(make_config(e, parse_system("[p] a?(x).x!()")), pol);
  REQUIRE(!ins.empty());
  for (auto& t : ins) CHECK(t.label.kind == Label::Kind::In);
}

TEST_CASE("barbs need payable charges") {
  Scenario u = build("ud(25)");
  BarbResult b = barbs(u.config(), 8);
  CHECK(b.barbs == std::set<Barb>{Barb{Name("up"), '!'}});
  Configuration poor = u.config();
  poor.env.set_funds("o", Funds::of(1));
  CHECK(barbs(poor, 8).barbs.empty());
}

TEST_CASE("library runs") {
  struct Case {
    const char* id;
    const char* variant;
    std::int64_t record;
  };
  for (Case k : {Case{"library-local", "no-store", 5}, Case{"library-local", "store", 10},
                 Case{"library-central", "no-store", 11}, Case{"library-central", "store", 12}}) {
    CAPTURE(k.id);
    CAPTURE(k.variant);
    RunResult r = run(build(k.id).config(), run_variant(k.variant));
    CHECK(r.found);
    CHECK(r.quiescent);
    CHECK(final_env(r).record == k.record);
  }
}

TEST_CASE("a run with unsatisfiable requirements reports not found") {
  RunOptions o;
  o.require = {Name("nowhere")};
  RunResult r = run(build("library-local").config(), o);
  CHECK_FALSE(r.found);
}

TEST_CASE("step limit") {
  RunOptions o;
  o.max_steps = 2;
  RunResult r = run(build("publishing(327)").config(), o);
  CHECK(r.steps.size() == 2);
  CHECK_FALSE(r.quiescent);
}

TEST_CASE("exploration is deterministic and exports DOT") {
  Scenario s = build("publishing(216)");
  Lts a = explore(s.config(), s.universe, 200);
  Lts b = explore(s.config(), s.universe, 200);
  CHECK(to_dot(a) == to_dot(b));
  CHECK(to_dot(a).rfind("digraph", 0) == 0);
  CHECK(a.states.size() > 1);
}

TEST_CASE("normalisation is idempotent on reachable states") {
  Scenario s = build("kickback(216)");
  Lts l = explore(s.config(), s.universe, 300);
  for (auto& c : l.states) CHECK(normalize(c).key() == normalize(normalize(c)).key());
}

TEST_CASE("abstract actions erase owners and offer fund transfers") {
  Scenario s = build("publisher(327)");
  Configuration c = s.config();
  c.env = c.env.with_external();
  bool fund = false, act = false;
  // housekeeping taus (unwinding, registration) come first
  for (int k = 0; k < 6 && !act; ++k) {
    auto ts = abstract_actions(c, {kExternal}, default_quanta(c.env), s.universe);
    for (auto& t : ts) {
      if (t.label.kind == Label::Kind::Fund) fund = true;
      if (t.label.kind == Label::Kind::Out || t.label.kind == Label::Kind::In) {
        act = true;
        CHECK(t.label.abstract);
      }
    }
    auto rs = reductions(c);
    if (rs.empty()) break;
    c = rs[0].target;
  }
  CHECK(fund);
  CHECK(act);
}
