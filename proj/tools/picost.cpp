#include "picost/equivalence.hpp"
#include "picost/frontend.hpp"
#include "picost/scenarios.hpp"
#include "picost/semantics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

using namespace picost;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInconclusive = 2, kUsage = 64, kParse = 65 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::vector<std::string> programs, envs, seeds, params;
  std::string variant, witness, observers;
  std::size_t steps = 0;
  std::int64_t credit = 0;
  std::int64_t credit_cap = 32;
  unsigned tau_depth = 64;
  std::size_t max_states = 2000;
  bool as_json = false, as_dot = false;
};

// Named comparisons for a single --seed-example on check/check-abstract.
struct Pair {
  std::string left, right;
  std::int64_t credit;
};
const std::map<std::string, Pair> kConcretePairs = {
    {"ud", {"ud(25)", "ud(42)", 2}},
    {"library-sys", {"library-sys-central", "library-sys-local", 2}},
    {"lib", {"lib-central", "lib-local", 0}},
};
const std::map<std::string, Pair> kAbstractPairs = {
    {"reader", {"reader-central", "reader-local", 0}},
    {"publisher", {"publisher(216)", "publisher(327)", 0}},
    {"pa-k", {"pa-k", "pa", 0}},
};

ScenarioParams scenario_params(const Opts& o) {
  ScenarioParams p;
  for (auto& kv : o.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
    p[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return p;
}

struct Side {
  Configuration conf;
  InputPolicy universe;
  std::string label;
};

std::string slurp(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

Side from_seed(const std::string& id, const Opts& o) {
  Scenario s = build(id, scenario_params(o));
  return Side{s.config(), s.universe, s.name};
}

Side from_files(const std::string& prog, const std::string& env) {
  Program p = parse_program(slurp(prog));
  if (!p.system) throw ParseError("program has no entry system", prog);
  CostEnv e = parse_env_text(slurp(env));
  Configuration c = make_config(e, *p.system);
  if (!c.valid()) throw ParseError("system is not well formed under the environment", prog);
  return Side{c, InputPolicy{}, prog};
}

std::vector<Side> load_sides(const Opts& o, std::size_t want, const std::map<std::string, Pair>* pairs,
                             std::int64_t* credit_default) {
  std::vector<Side> out;
  if (!o.seeds.empty()) {
    if (!o.programs.empty() || !o.envs.empty()) throw UsageError("--seed-example excludes --program/--env");
    if (want == 2 && o.seeds.size() == 1 && pairs) {
      auto it = pairs->find(o.seeds[0]);
      if (it == pairs->end()) throw UsageError("no comparison named '" + o.seeds[0] + "'; give two --seed-example");
      out.push_back(from_seed(it->second.left, o));
      out.push_back(from_seed(it->second.right, o));
      if (credit_default) *credit_default = it->second.credit;
      return out;
    }
    if (o.seeds.size() != want) throw UsageError("expected " + std::to_string(want) + " --seed-example");
    for (auto& s : o.seeds) out.push_back(from_seed(s, o));
    return out;
  }
  if (o.programs.size() != want || o.envs.size() != want)
    throw UsageError("expected " + std::to_string(want) + " --program and --env");
  for (std::size_t i = 0; i < want; ++i) out.push_back(from_files(o.programs[i], o.envs[i]));
  return out;
}

json funds_json(const CostEnv& env) {
  json f = json::object();
  for (auto& [o, v] : env.owners) f[o] = v.infinite ? json("inf") : json(v.amount);
  return f;
}

std::string funds_text(const CostEnv& env) {
  std::string s;
  for (auto& [o, v] : env.owners) s += (s.empty() ? "" : ", ") + o + "=" + v.str();
  return s;
}

CheckOptions check_opts(const Opts& o) {
  CheckOptions c;
  c.bounds.credit_cap = o.credit_cap;
  c.bounds.tau_depth = o.tau_depth;
  return c;
}

std::set<Owner> observer_set(const std::string& spec) {
  std::set<Owner> obs;
  if (spec.empty() || spec == "external") return {kExternal};
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) obs.insert(item);
  if (obs.empty()) throw UsageError("empty --observers");
  return obs;
}

int verdict_exit(Verdict v) {
  switch (v) {
  case Verdict::Proven:
    return kOk;
  case Verdict::RefutedWithinBounds:
    return kFailed;
  default:
    return kInconclusive;
  }
}

// ---------------------------------------------------------------- commands

int cmd_run(const Opts& o) {
  Side s = load_sides(o, 1, nullptr, nullptr)[0];
  RunOptions ro = run_variant(o.variant);
  if (o.steps) ro.max_steps = o.steps;
  RunResult r = run(s.conf, ro);
  const CostEnv& fin = r.steps.empty() ? r.start.env : r.steps.back().after.env;
  std::string status = !r.found ? "no-run" : r.quiescent ? "quiescent" : r.cycled ? "cycle" : "step-limit";
  if (o.as_json) {
    json j;
    j["command"] = "run";
    j["start"] = {{"system", to_text(r.start.sys)}, {"record", r.start.env.record}, {"funds", funds_json(r.start.env)}};
    j["steps"] = json::array();
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      auto& st = r.steps[i];
      j["steps"].push_back({{"index", i + 1},
                            {"rule", st.info},
                            {"weight", st.weight},
                            {"record", st.after.env.record},
                            {"system", to_text(st.after.sys)}});
    }
    j["final"] = {{"record", fin.record}, {"funds", funds_json(fin)}};
    j["status"] = status;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "start  record " << r.start.env.record << "  " << to_text(r.start.sys) << "\n";
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      auto& st = r.steps[i];
      std::cout << i + 1 << ". " << st.info << "  weight " << st.weight << "  record " << st.after.env.record
                << "\n   " << to_text(st.after.sys) << "\n";
    }
    std::cout << "final record " << fin.record << "\nfunds " << funds_text(fin) << "\nstatus " << status << "\n";
  }
  if (!r.found) return kFailed;
  return kOk;
}

int cmd_actions(const Opts& o) {
  Side s = load_sides(o, 1, nullptr, nullptr)[0];
  std::vector<Transition> ts;
  if (!o.observers.empty()) {
    auto obs = observer_set(o.observers);
    Configuration c = s.conf;
    if (obs.count(kExternal) && !c.env.owners.count(kExternal)) c.env = c.env.with_external();
    ts = abstract_actions(c, obs, default_quanta(c.env), s.universe);
  } else {
    ts = concrete_actions(s.conf, s.universe);
  }
  if (o.as_json) {
    json j;
    j["command"] = "actions";
    j["items"] = json::array();
    for (auto& t : ts)
      j["items"].push_back(
          {{"label", t.label.str()}, {"weight", t.weight}, {"rule", t.info}, {"target", to_text(t.target.sys)}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto& t : ts)
      std::cout << t.label.str() << "  @" << t.weight << (t.info.empty() ? "" : "  [" + t.info + "]") << "\n   "
                << to_text(t.target.sys) << "\n";
  }
  return kOk;
}

void print_check(const std::string& cmd, const CheckResult& r, std::int64_t credit, const Opts& o) {
  if (o.as_json) {
    json j;
    j["command"] = cmd;
    j["verdict"] = verdict_name(r.verdict);
    j["credit"] = credit;
    j["threshold"] = r.threshold;
    j["pairs"] = r.pairs;
    j["truncated"] = r.truncated;
    j["cause"] = r.cause;
    j["witness"] = r.witness;
    j["trace"] = json::array();
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      auto& s = r.steps[i];
      j["trace"].push_back({{"challenger", s.left_challenges ? "left" : "right"},
                            {"label", s.label},
                            {"challenger_weight", s.challenger_weight},
                            {"defender_weight", s.defender_weight},
                            {"credit_before", s.credit_before},
                            {"credit_after", s.credit_after},
                            {"note", s.note},
                            {"text", i < r.trace.size() ? r.trace[i] : ""}});
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << verdict_name(r.verdict) << " at credit " << credit << "\n";
  if (r.threshold > o.credit_cap)
    std::cout << "least credit: none within cap " << o.credit_cap << "\n";
  else
    std::cout << "least credit: " << r.threshold << "\n";
  std::cout << "pairs explored: " << r.pairs << (r.truncated ? " (truncated)" : "") << "\n";
  if (!r.cause.empty()) std::cout << "cause: " << r.cause << "\n";
  if (r.verdict == Verdict::Proven && !r.witness.empty()) {
    std::cout << "witness (" << r.witness.size() << " pairs):\n";
    for (auto& w : r.witness) std::cout << "  " << w << "\n";
  }
  if (!r.trace.empty()) {
    std::cout << "trace:\n";
    for (auto& t : r.trace) std::cout << "  " << t << "\n";
  }
}

int cmd_check(const Opts& o, bool abstract, std::int64_t credit, bool credit_given) {
  std::int64_t dflt = credit;
  auto sides = load_sides(o, 2, abstract ? &kAbstractPairs : &kConcretePairs, &dflt);
  if (!credit_given) credit = dflt;
  CheckOptions co = check_opts(o);
  // inputs range over both sides' universes
  InputPolicy pol = sides[0].universe;
  for (auto& v : sides[1].universe.values)
    if (std::find(pol.values.begin(), pol.values.end(), v) == pol.values.end()) pol.values.push_back(v);
  CheckResult r = abstract ? check_abstract_preorder(sides[0].conf, sides[1].conf, credit,
                                                     observer_set(o.observers), pol, co)
                           : check_amortised(sides[0].conf, sides[1].conf, credit, pol, co);
  print_check(abstract ? "check-abstract" : "check", r, credit, o);
  return verdict_exit(r.verdict);
}

int cmd_verify(const Opts& o) {
  if (o.witness.empty()) throw UsageError("verify-witness needs --witness FILE");
  WitnessFamily fam = parse_witness_text(slurp(o.witness));
  CheckOptions co = check_opts(o);
  WitnessReport rep = verify_witness(fam, co);
  if (o.as_json) {
    json j;
    j["command"] = "verify-witness";
    j["verdict"] = rep.ok ? "Verified" : "Failed";
    j["truncated"] = rep.truncated;
    j["entries"] = json::array();
    for (auto& e : rep.entries)
      j["entries"].push_back({{"name", e.name}, {"ok", e.ok}, {"instances", e.instances}, {"failure", e.failure}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto& e : rep.entries)
      std::cout << (e.ok ? "ok    " : "FAIL  ") << e.name << " (" << e.instances << " instances)"
                << (e.ok ? "" : ": " + e.failure) << "\n";
    std::cout << (rep.ok ? "witness verified" : "witness rejected") << (rep.truncated ? " (weak moves truncated)" : "")
              << "\n";
  }
  if (!rep.ok) return kFailed;
  return rep.truncated ? kInconclusive : kOk;
}

int cmd_barbs(const Opts& o) {
  Side s = load_sides(o, 1, nullptr, nullptr)[0];
  BarbResult b = barbs(s.conf, o.tau_depth);
  if (o.as_json) {
    json j;
    j["command"] = "barbs";
    j["items"] = json::array();
    for (auto& x : b.barbs) j["items"].push_back({{"label", x.chan.str() + x.dir}});
    j["truncated"] = b.truncated;
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto& x : b.barbs) std::cout << x.chan.str() << x.dir << "\n";
    if (b.truncated) std::cout << "(search truncated)\n";
  }
  return b.truncated ? kInconclusive : kOk;
}

int cmd_example(const Opts& o) {
  if (o.seeds.empty()) {
    for (auto& id : scenario_ids()) std::cout << id << "\n";
    std::cout << "comparisons:";
    for (auto& [k, _] : kConcretePairs) std::cout << " " << k;
    for (auto& [k, _] : kAbstractPairs) std::cout << " " << k << "(abstract)";
    std::cout << "\n";
    return kOk;
  }
  Scenario s = build(o.seeds[0], scenario_params(o));
  if (o.as_json) {
    json j;
    j["name"] = s.name;
    j["system"] = to_text(s.system);
    j["env"] = env_to_json(s.env);
    j["notes"] = s.notes;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "// " << s.name << "\n";
    if (!s.notes.empty()) std::cout << "// " << s.notes << "\n";
    std::cout << pretty(s.system) << "\n";
    std::cout << pretty(s.env) << "\n";
  }
  return kOk;
}

int cmd_graph(const Opts& o) {
  Side s = load_sides(o, 1, nullptr, nullptr)[0];
  Lts l = explore(s.conf, s.universe, o.max_states);
  if (o.as_json) {
    json j;
    j["command"] = "graph";
    j["states"] = json::array();
    for (auto& c : l.states) j["states"].push_back({{"system", to_text(c.sys)}, {"record", c.env.record}});
    j["edges"] = json::array();
    for (auto& e : l.edges)
      j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"label", e.label.str()}, {"weight", e.weight}});
    j["truncated"] = l.truncated;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_dot(l);
  }
  return l.truncated ? kInconclusive : kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"picost: cost-aware pi-calculus runner and equivalence checker"};
  app.require_subcommand(1);
  Opts o;

  auto common = [&](CLI::App* c, bool pair) {
    c->add_option("--program", o.programs, pair ? "program file (give twice: left, right)" : "program file");
    c->add_option("--env", o.envs, pair ? "environment JSON (give twice)" : "environment JSON");
    c->add_option("--seed-example", o.seeds, "built-in scenario id");
    c->add_option("--param", o.params, "scenario parameter key=value");
    c->add_flag("--json", o.as_json, "JSON output");
  };

  auto* run_c = app.add_subcommand("run", "reduce to quiescence (or N steps)");
  common(run_c, false);
  run_c->add_option("--steps", o.steps, "step limit");
  run_c->add_option("--variant", o.variant, "run constraint: store | no-store");

  auto* act_c = app.add_subcommand("actions", "list reductions and actions of a configuration");
  common(act_c, false);
  act_c->add_option("--observers", o.observers, "abstract actions for o1,o2 or 'external'");

  std::int64_t credit = 0;
  CLI::Option* credit_opt[2];
  auto* chk_c = app.add_subcommand("check", "amortised bisimulation preorder at a credit");
  auto* abs_c = app.add_subcommand("check-abstract", "abstract preorder for observers");
  int k = 0;
  for (auto* c : {chk_c, abs_c}) {
    common(c, true);
    credit_opt[k++] = c->add_option("--credit", credit, "initial credit n0");
    c->add_option("--credit-cap", o.credit_cap, "largest credit considered");
    c->add_option("--tau-depth", o.tau_depth, "tau steps in a weak move");
  }
  abs_c->add_option("--observers", o.observers, "o1,o2 or 'external' (default)");

  auto* wit_c = app.add_subcommand("verify-witness", "check a witness family file");
  wit_c->add_option("--witness", o.witness, "witness JSON")->required();
  wit_c->add_option("--credit-cap", o.credit_cap, "largest credit considered");
  wit_c->add_option("--tau-depth", o.tau_depth, "tau steps in a weak move");
  wit_c->add_flag("--json", o.as_json, "JSON output");

  auto* barb_c = app.add_subcommand("barbs", "payable barbs after tau steps");
  common(barb_c, false);
  barb_c->add_option("--tau-depth", o.tau_depth, "tau steps explored");

  auto* ex_c = app.add_subcommand("example", "print a built-in scenario (or list them)");
  ex_c->add_option("--seed-example", o.seeds, "scenario id");
  ex_c->add_option("--param", o.params, "scenario parameter key=value");
  ex_c->add_flag("--json", o.as_json, "JSON output");

  auto* g_c = app.add_subcommand("graph", "explore the labelled transition system");
  common(g_c, false);
  g_c->add_flag("--dot", o.as_dot, "DOT output (default)");
  g_c->add_option("--max-states", o.max_states, "exploration limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (o.as_json && o.as_dot) {
    std::cerr << "--json and --dot are exclusive\n";
    return kUsage;
  }

  try {
    if (*run_c) return cmd_run(o);
    if (*act_c) return cmd_actions(o);
    if (*chk_c) return cmd_check(o, false, credit, credit_opt[0]->count() > 0);
    if (*abs_c) return cmd_check(o, true, credit, credit_opt[1]->count() > 0);
    if (*wit_c) return cmd_verify(o);
    if (*barb_c) return cmd_barbs(o);
    if (*ex_c) return cmd_example(o);
    if (*g_c) return cmd_graph(o);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CostError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
