#include "helpers.hpp"
#include "picost/frontend.hpp"
#include "picost/scenarios.hpp"

#include <doctest.h>

#include <filesystem>

using namespace th;

namespace {

std::string src(const std::string& rel) { return std::string(PICOST_SOURCE_DIR) + "/" + rel; }

const std::vector<std::string> kCorpus = {
    "library-local",   "library-central", "library-sys-local", "library-sys-central", "lib-local",
    "lib-central",     "reader-local",    "reader-central",    "fund-transfer-5",     "publishing-327",
    "publishing-216",  "kickback-327",    "kickback-216",      "publisher-327",       "publisher-216",
    "pa",              "pa-k",            "ud-25",             "ud-42"};

std::string scenario_of(const std::string& file) {
  // fund-transfer-5 -> fund-transfer(5), ud-25 -> ud(25)
  auto dash = file.find_last_of('-');
  std::string tail = file.substr(dash + 1);
  if (!tail.empty() && std::isdigit(static_cast<unsigned char>(tail[0]))) return file.substr(0, dash) + "(" + tail + ")";
  return file;
}

} // namespace

TEST_CASE("simple owned output") {
  System s = parse_system("[o] a!(v).stop");
  CHECK(s == own("o", out(N("a"), {N("v")})));
  CHECK(parse_system("[o] a!(v)") == s);
}

TEST_CASE("threads, choice and restriction syntax") {
  System s = parse_system("new c:(2,1) in [o] c?(x).x!() | [p] if a = b then stop else c!(a)");
  CHECK(s.kind == System::Kind::New);
  CHECK(s.type == ResType{2, 1});
  // omitted types are (0,0)
  System t = parse_system("[o] new r.r!()");
  CHECK(t.thread.type == ResType{});
  System ch = parse_system("[o] a!() (+) b!()");
  CHECK(to_text(ch).find("(+)") == std::string::npos);
}

TEST_CASE("reader definition text matches the built-in reader") {
  const char* text = R"(
    def Reader = goLib?(name). new r. reqR!(r, name). r?(b). goHome!(b). Reader;
    [pub] Reader
  )";
  Program p = parse_program(text);
  REQUIRE(p.system);
  CHECK(struct_eq(*p.system, build("reader-local").system));
}

TEST_CASE("up/down recursion") {
  CHECK(struct_eq(parse_system("[o] rec X. up!.down!.X"), build("ud(25)").system));
}

TEST_CASE("parameterised definitions expand") {
  const char* text = R"(
    def Fwd(x, y) = x?(v). y!(v). Loop;
    def Loop = Fwd(a, b);
    [o] Loop
  )";
  System s = parse_system(text);
  CHECK(struct_eq(s, parse_system("[o] rec L. a?(v). b!(v). L")));
}

TEST_CASE("environment documents") {
  CostEnv e = parse_env_text(read_file(src("corpus/library-local.env.json")));
  CostEnv want = build("library-local").env;
  CHECK(e == want);
  CHECK(e.resource(Name("goLib")).type == ResType{0, 1});
  CHECK(e.resource(Name("goHome")).type == ResType{0, 1});
  CHECK(e.resource(Name("reqR")).type == ResType{0, 3});
  CHECK(e.resource(Name("reqS")).type == ResType{0, 5});
}

TEST_CASE("environment errors carry JSON pointers") {
  auto err = [](const std::string& text) -> std::string {
    try {
      parse_env_text(text);
    } catch (const ParseError& e) {
      return e.where;
    }
    return "<accepted>";
  };
  CHECK(err(R"({"owners":{}})") == "/owners");
  CHECK(err(R"({"owners":{"a":"inf","b":-1}})") == "/owners/b");
  CHECK(err(R"({"owners":{"a":"inf","b":1},"resources":{"x":{"use":1}}})") == "/resources/x/provide");
  CHECK(err(R"({"owners":{"a":"inf","b":1},"resources":{"x":{"use":1,"provide":0,"rec":"odd"}}})") ==
        "/resources/x/rec");
  CHECK(err(R"({"owners":{"a":"inf","b":1},"bogus":1})") == "/bogus");
  CHECK(err(R"({"owners":{"a":"inf","b":1}})") == "<accepted>");
  CHECK_THROWS_AS(parse_env_text("{"), ParseError);
}

TEST_CASE("infinite funds map from inf") {
  CostEnv e = parse_env_text(R"({"owners":{"a":"inf","b":3}})");
  CHECK(e.funds("a").infinite);
  CHECK(e.funds("b") == Funds::of(3));
}

TEST_CASE("negative corpus is rejected with a position") {
  const std::vector<std::string> bad = {
      "",                              // no system
      "[o]",                           // missing thread
      "[o] a!(v",                      // unclosed payload
      "[o] a?(x.stop",                 // unclosed binders
      "[ ] a!()",                      // missing owner
      "o a!()",                        // no brackets
      "[o] a!() |",                    // dangling bar
      "new c:(1) in [o] c!()",         // half a type
      "new c:(1,2) [o] c!()",          // missing in
      "[o] if a = then stop else stop", // missing rhs
      "[o] if a = b then stop",        // missing else
      "[o] rec . a!()",                // rec without binder
      "[o] X",                         // unbound identifier
      "[o] a!(\"open",                 // unterminated string
      "[o] a!() $",                    // stray character
      "def D(x) = x!(); [o] D",        // arity mismatch
      "def D(x) = D(x); [o] D(a)",     // recursion only through parameters
      "[o] a?(x).x?(x, y).stop extra", // trailing junk
  };
  for (auto& s : bad) {
    CAPTURE(s);
    bool threw = false;
    try {
      parse_system(s);
    } catch (const ParseError& e) {
      threw = true;
      CHECK(e.where.find(':') != std::string::npos);
    }
    CHECK(threw);
  }
}

TEST_CASE("printing") {
  CHECK(pretty(System::nil()) == "0");
  Thread c = desugar_choice(out(N("a")), out(N("b")));
  CHECK(pretty(own("o", c)).find("new") != std::string::npos);
}

TEST_CASE("corpus round-trips against the scenario builders") {
  for (auto& f : kCorpus) {
    CAPTURE(f);
    Program p = parse_program(read_file(src("corpus/" + f + ".picost")));
    REQUIRE(p.system);
    Scenario s = build(scenario_of(f));
    CHECK(struct_eq(*p.system, s.system));
    CHECK(parse_env_text(read_file(src("corpus/" + f + ".env.json"))) == s.env);
    // printing the parsed form again is stable
    CHECK(struct_eq(parse_system(pretty(*p.system)), *p.system));
    CHECK(parse_env_text(pretty(s.env)) == s.env);
  }
}

TEST_CASE("every corpus file is covered") {
  std::size_t n = 0;
  for (auto& e : std::filesystem::directory_iterator(src("corpus")))
    if (e.path().extension() == ".picost") ++n;
  CHECK(n == kCorpus.size());
}

TEST_CASE("library witness file") {
  WitnessFamily f = parse_witness_text(read_file(src("witnesses/appendixA1.json")));
  std::vector<std::int64_t> mins;
  std::set<std::int64_t> distinct;
  for (auto& e : f.entries) {
    mins.push_back(e.min_credit);
    distinct.insert(e.min_credit);
  }
  CHECK(mins == std::vector<std::int64_t>{2, 6, 4, 4, 4, 0, 0, 0});
  CHECK(distinct == std::set<std::int64_t>{0, 2, 4, 6});
  CHECK(f.carriers.at("BN").size() == 2);
  CHECK(f.carriers.at("BK").size() == 2);
  CHECK(f.view == ViewKind::Concrete);
}

TEST_CASE("publishing witness file") {
  WitnessFamily f = parse_witness_text(read_file(src("witnesses/appendixA2.json")));
  CHECK(f.carriers.at("News").size() == 2);
  CHECK(f.view == ViewKind::Abstract);
  CHECK(f.observers == std::set<Owner>{kExternal});
  CHECK(f.envs.at("p5").funds("p") == Funds::of(5));
}

TEST_CASE("witness documents report pointers") {
  try {
    parse_witness_text(R"J({"envs":{},"entries":[{"left":"[o] a!()"}]})J");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.where.rfind("/entries/0", 0) == 0);
  }
}
