#include "picost/scenarios.hpp"

#include <charconv>

namespace picost {

namespace {

Value N(const std::string& n) { return Value::of_name(Name(n)); }
Value V(const std::string& x) { return Value::var(x); }

Thread in(Value ch, std::vector<std::string> ps, Thread k) { return Thread::input(std::move(ch), std::move(ps), std::move(k)); }
Thread out(Value ch, std::vector<Value> vs, Thread k = Thread::stop()) {
  return Thread::output(std::move(ch), std::move(vs), std::move(k));
}
Thread nu(const std::string& n, Thread k, ResType t = {}) { return Thread::restrict(Name(n), t, std::move(k)); }
Thread X(const std::string& x) { return Thread::recvar(x); }

const RecPolicy kCostPolicy = RecPolicy::custom(-1, 1);  // records the provide cost
const RecPolicy kUsePolicy = RecPolicy::custom(-1, 0);   // records minus the use cost

std::uint64_t to_nat(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ScenarioError("parameter " + key + ": not a number: " + s);
  return v;
}

Funds to_funds(const std::string& key, const std::string& s) {
  if (s == "inf") return Funds::inf();
  return Funds::of(to_nat(key, s));
}

struct Args {
  std::string id;
  ScenarioParams p;
  std::string get(const std::string& k, const std::string& dflt) const {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
  }
};

Args split_id(const std::string& id, const ScenarioParams& params) {
  Args a{id, params};
  auto open = id.find('(');
  if (open != std::string::npos) {
    if (id.back() != ')') throw ScenarioError("malformed scenario id: " + id);
    a.id = id.substr(0, open);
    std::string inner = id.substr(open + 1, id.size() - open - 2);
    if (!inner.empty() && (inner[0] == 'G' || inner[0] == 'g')) inner = inner.substr(1);
    std::string key = a.id == "fund-transfer" ? "k" : "env";
    a.p.emplace(key, inner);
  }
  return a;
}

void check_keys(const Args& a, std::initializer_list<const char*> allowed) {
  for (auto& [k, _] : a.p) {
    bool ok = false;
    for (auto* x : allowed) ok = ok || k == x;
    if (!ok) throw ScenarioError("scenario " + a.id + ": unknown parameter " + k);
  }
}

// -------------------------------------------------------------- library

enum class Site { Local, Central };

ResType lib_cost(Site s, const std::string& res) {
  bool local = s == Site::Local;
  if (res == "goLib" || res == "goHome") return ResType{0, local ? 1u : 5u};
  if (res == "reqR") return ResType{0, local ? 3u : 1u};
  return ResType{0, local ? 5u : 1u}; // reqS
}

CostEnv library_env(Site s, Funds f) {
  CostEnv e;
  e.set_funds("pub", f);
  e.set_funds("lib", f);
  for (auto r : {"goLib", "goHome", "reqR", "reqS"}) e.declare(Name(r), lib_cost(s, r), kCostPolicy);
  return e;
}

void declare_values(CostEnv& e, const std::vector<Value>& vs) {
  for (auto& v : vs)
    for (auto& n : free_names(v))
      if (!e.has(n)) e.declare(n, ResType{});
}

std::vector<Value> book_universe() {
  return {N("n1"), N("n2"), Value::ctor("book", N("n1")), Value::ctor("book", N("n2"))};
}

Scenario library_scenario(const Args& a) {
  check_keys(a, {"funds"});
  Funds f = to_funds("funds", a.get("funds", "inf"));
  bool local = a.id.find("local") != std::string::npos;
  Site site = local ? Site::Local : Site::Central;
  std::string tag = local ? "local" : "central";

  Scenario sc;
  sc.name = a.id;
  sc.env = library_env(site, f);
  System reader = System::owned("pub", code::reader());
  System libstore = System::owned("lib", Thread::par(code::library(), code::store()));
  System lib = System::restrict(Name("reqS"), lib_cost(site, "reqS"), libstore);

  if (a.id == "library-local" || a.id == "library-central") {
    System book = System::owned("pub", out(N("goLib"), {N("str")}, in(N("goHome"), {"x"}, Thread::stop())));
    sc.system = System::par(book, System::par(reader, libstore));
    sc.universe.values = {N("str")};
    sc.universe.env_names = false;
    sc.universe.fresh_inputs = false;
    sc.notes = "Book | Sys under the " + tag + " cost table; provide costs recorded, use free";
  } else if (a.id == "library-sys-local" || a.id == "library-sys-central") {
    sc.system = System::restrict(Name("reqR"), lib_cost(site, "reqR"), System::par(reader, lib));
    sc.universe.values = book_universe();
    sc.universe.env_names = false;
    sc.universe.fresh_inputs = false;
    sc.notes = "reader and library with reqR, reqS internalised";
  } else if (a.id == "lib-local" || a.id == "lib-central") {
    sc.system = lib;
    sc.universe.values = book_universe();
    sc.universe.env_names = false;
    sc.universe.fresh_types = {ResType{}};
    sc.universe.fresh_from_env = false;
    sc.notes = "library service alone, store internalised; provides reqR";
  } else { // reader-*
    sc.system = reader;
    sc.universe.values = book_universe();
    sc.universe.env_names = false;
    sc.universe.fresh_inputs = false;
    sc.notes = "the reader alone against an open environment";
  }
  declare_values(sc.env, sc.universe.values);
  return sc;
}

// -------------------------------------------------------------- others

Scenario fund_transfer(const Args& a) {
  check_keys(a, {"k", "funds"});
  std::uint64_t k = to_nat("k", a.get("k", "5"));
  Funds f = to_funds("funds", a.get("funds", "20"));
  if (!f.covers(k)) throw ScenarioError("fund-transfer: dad cannot cover k = " + std::to_string(k));
  Scenario sc;
  sc.name = "fund-transfer";
  sc.env.set_funds("dad", f);
  sc.env.set_funds("kate", f);
  sc.env.declare(Name("req"), ResType{});
  Thread d = in(N("req"), {"x"}, nu("s", out(V("x"), {N("s")}, out(N("s"), {})), ResType{k, 0}));
  Thread kt = nu("r", out(N("req"), {N("r")}, in(N("r"), {"y"}, in(V("y"), {}, Thread::stop()))));
  sc.system = System::par(System::owned("dad", d), System::owned("kate", kt));
  sc.universe.env_names = false;
  sc.universe.fresh_inputs = false;
  sc.notes = "dad pays kate k through a private channel of type (k,0)";
  return sc;
}

void publishing_resources(CostEnv& e, const std::string& which, bool with_adv) {
  if (which == "327") {
    e.declare(Name("news"), ResType{3, 1}, kUsePolicy);
    if (with_adv) e.declare(Name("adv"), ResType{2, 0}, kUsePolicy);
    e.declare(Name("publish"), ResType{7, 1});
  } else if (which == "216") {
    e.declare(Name("news"), ResType{2, 1}, kUsePolicy);
    if (with_adv) e.declare(Name("adv"), ResType{1, 0}, kUsePolicy);
    e.declare(Name("publish"), ResType{6, 1});
  } else {
    throw ScenarioError("publishing environment must be 327 or 216, got " + which);
  }
}

ResType adv_type(const std::string& which) { return which == "216" ? ResType{1, 0} : ResType{2, 0}; }

Scenario publishing(const Args& a, bool kickback) {
  check_keys(a, {"env", "p"});
  std::string which = a.get("env", "327");
  Scenario sc;
  sc.name = a.id;
  // one cycle costs p five before publish is provided, which needs one more
  sc.env.set_funds("p", to_funds("p", a.get("p", "6")));
  sc.env.set_funds("n", Funds::inf());
  sc.env.set_funds("a", Funds::inf());
  sc.env.set_funds("r", Funds::inf());
  publishing_resources(sc.env, which, true);
  System p = System::owned("p", kickback ? code::publisher_kickback() : code::publisher());
  System adv = System::owned("a", kickback ? code::advertiser_kickback() : code::advertiser());
  sc.system = System::par(System::par(p, System::owned("n", code::news_service())),
                          System::par(adv, System::owned("r", code::publish_reader())));
  sc.universe.env_names = false;
  sc.universe.fresh_inputs = false;
  sc.notes = kickback ? "publishing with a (1,0) kickback channel from the agency"
                      : "publisher, news service, ad agency and reader";
  return sc;
}

InputPolicy news_universe() {
  InputPolicy u;
  u.values = {N("s1"), N("s2")};
  u.env_names = false;
  u.fresh_types = {ResType{}};
  u.fresh_from_env = false;
  return u;
}

Scenario publisher_alone(const Args& a) {
  check_keys(a, {"env", "p"});
  std::string which = a.get("env", "327");
  Scenario sc;
  sc.name = a.id;
  sc.env.set_funds("p", to_funds("p", a.get("p", "inf")));
  sc.env.set_funds("a", Funds::inf());
  publishing_resources(sc.env, which, true);
  sc.system = System::owned("p", code::publisher());
  sc.universe = news_universe();
  declare_values(sc.env, sc.universe.values);
  sc.notes = "the publisher alone; all three resources external";
  return sc;
}

Scenario pa(const Args& a, bool kickback) {
  check_keys(a, {"env", "p"});
  std::string which = a.get("env", "327");
  Scenario sc;
  sc.name = a.id;
  sc.env.set_funds("p", to_funds("p", a.get("p", "5")));
  sc.env.set_funds("a", Funds::inf());
  publishing_resources(sc.env, which, false);
  System body = System::par(System::owned("p", kickback ? code::publisher_kickback() : code::publisher()),
                            System::owned("a", kickback ? code::advertiser_kickback() : code::advertiser()));
  sc.system = System::restrict(Name("adv"), adv_type(which), body);
  sc.universe = news_universe();
  declare_values(sc.env, sc.universe.values);
  sc.notes = kickback ? "publisher and agency with kickback, adv internal" : "publisher and agency, adv internal";
  return sc;
}

Scenario ud(const Args& a) {
  check_keys(a, {"env"});
  std::string which = a.get("env", "25");
  Scenario sc;
  sc.name = "ud";
  sc.env.set_funds("o", Funds::inf());
  sc.env.set_funds("q", Funds::inf());
  if (which == "25") {
    sc.env.declare(Name("up"), ResType{2, 0});
    sc.env.declare(Name("down"), ResType{5, 0});
  } else if (which == "42") {
    sc.env.declare(Name("up"), ResType{4, 0});
    sc.env.declare(Name("down"), ResType{2, 0});
  } else {
    throw ScenarioError("ud environment must be 25 or 42, got " + which);
  }
  sc.system = System::owned("o", code::up_down());
  sc.universe.env_names = false;
  sc.universe.fresh_inputs = false;
  sc.notes = "alternating up/down outputs; second owner q only to satisfy the two-owner rule";
  return sc;
}

} // namespace

// ------------------------------------------------------------------ code

namespace code {

Thread reader() {
  return Thread::rec("R", in(N("goLib"), {"name"},
                             nu("r", out(N("reqR"), {N("r"), V("name")},
                                         in(N("r"), {"b"}, out(N("goHome"), {V("b")}, X("R")))))));
}

Thread library() {
  Thread direct = out(V("y"), {Value::ctor("book", V("z"))}, X("L"));
  Thread via_store =
      nu("r", out(N("reqS"), {N("r"), V("z")}, in(N("r"), {"b"}, out(V("y"), {V("b")}, X("L")))));
  NameSet avoid{Name("reqR"), Name("reqS"), Name("goLib"), Name("goHome")};
  return Thread::rec("L", in(N("reqR"), {"y", "z"}, desugar_choice(direct, via_store, avoid)));
}

Thread store() {
  return Thread::rec("S", in(N("reqS"), {"y", "z"}, out(V("y"), {Value::ctor("book", V("z"))}, X("S"))));
}

Thread publisher() {
  return Thread::rec(
      "P", nu("r1", out(N("news"), {N("r1")},
                        nu("r2", out(N("adv"), {N("r2")},
                                     in(N("r1"), {"n"},
                                        in(N("r2"), {"d"},
                                           in(N("publish"), {"z"}, out(V("z"), {V("n"), V("d")}, X("P"))))))))));
}

Thread publisher_kickback() {
  Thread tail = in(N("publish"), {"z"}, in(N("k"), {}, out(V("z"), {V("n"), V("d")}, X("P"))));
  return Thread::rec(
      "P", nu("r1", out(N("news"), {N("r1")},
                        nu("r2", nu("k", out(N("adv"), {N("k"), N("r2")}, in(N("r1"), {"n"}, in(N("r2"), {"d"}, tail))),
                                    ResType{1, 0})))));
}

Thread news_service() { return Thread::rec("N", in(N("news"), {"r"}, nu("n", out(V("r"), {N("n")}, X("N"))))); }

Thread advertiser() { return Thread::rec("A", in(N("adv"), {"r"}, nu("d", out(V("r"), {N("d")}, X("A"))))); }

Thread advertiser_kickback() {
  return Thread::rec("A", in(N("adv"), {"k", "r"},
                             nu("d", out(V("r"), {N("d")}, Thread::par(X("A"), out(V("k"), {}))))));
}

Thread publish_reader() {
  return Thread::rec("R", nu("r", out(N("publish"), {N("r")}, in(N("r"), {"n", "d"}, X("R")))));
}

Thread up_down() { return Thread::rec("x", out(N("up"), {}, out(N("down"), {}, X("x")))); }

} // namespace code

std::vector<std::string> scenario_ids() {
  return {"library-local", "library-central", "library-sys-local", "library-sys-central",
          "lib-local",     "lib-central",     "reader-local",      "reader-central",
          "fund-transfer", "publishing",      "kickback",          "publisher",
          "pa",            "pa-k",            "ud"};
}

Scenario build(const std::string& id, const ScenarioParams& params) {
  Args a = split_id(id, params);
  const std::string& s = a.id;
  if (s == "library-local" || s == "library-central" || s == "library-sys-local" || s == "library-sys-central" ||
      s == "lib-local" || s == "lib-central" || s == "reader-local" || s == "reader-central")
    return library_scenario(a);
  if (s == "fund-transfer") return fund_transfer(a);
  if (s == "publishing") return publishing(a, false);
  if (s == "kickback") return publishing(a, true);
  if (s == "publisher") return publisher_alone(a);
  if (s == "pa") return pa(a, false);
  if (s == "pa-k") return pa(a, true);
  if (s == "ud") return ud(a);
  throw ScenarioError("unknown scenario: " + id);
}

RunOptions run_variant(const std::string& variant) {
  RunOptions o;
  if (variant.empty()) return o;
  if (variant == "no-store") {
    o.avoid.insert(Name("reqS"));
  } else if (variant == "store") {
    o.require.insert(Name("reqS"));
  } else {
    throw ScenarioError("unknown variant: " + variant);
  }
  return o;
}

} // namespace picost
