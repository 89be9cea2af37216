#include "picost/costenv.hpp"

#include <doctest.h>

using namespace picost;

namespace {

CostEnv two(std::uint64_t fu, std::uint64_t fp, ResType t, RecPolicy pol = {}) {
  CostEnv e;
  e.set_funds("u", Funds::of(fu));
  e.set_funds("p", Funds::of(fp));
  e.declare(Name("a"), t, pol);
  return e;
}

} // namespace

TEST_CASE("standard charge moves use cost to the provider, who pays the provide cost") {
  auto r = two(10, 10, {3, 1}).charge("u", Name("a"), "p");
  REQUIRE(r);
  CHECK(r->funds("u") == Funds::of(7));
  CHECK(r->funds("p") == Funds::of(12));
  CHECK(r->record == 2);
}

TEST_CASE("provide cost above use cost is a net loss for the provider") {
  auto r = two(10, 10, {1, 4}).charge("u", Name("a"), "p");
  REQUIRE(r);
  CHECK(r->funds("u") == Funds::of(9));
  CHECK(r->funds("p") == Funds::of(7));
  CHECK(r->record == -3);
}

TEST_CASE("charges need funds on both sides of the original environment") {
  CHECK_FALSE(two(2, 10, {3, 0}).charge("u", Name("a"), "p"));
  CHECK_FALSE(two(10, 0, {3, 1}).charge("u", Name("a"), "p"));
  CHECK(two(3, 1, {3, 1}).charge("u", Name("a"), "p"));
}

TEST_CASE("self charge costs the owner the provide cost only") {
  auto r = two(5, 0, {3, 2}).charge("u", Name("a"), "u");
  REQUIRE(r);
  CHECK(r->funds("u") == Funds::of(3));
}

TEST_CASE("custom recording policies") {
  auto cost = two(10, 10, {0, 5}, RecPolicy::custom(-1, 1)).charge("u", Name("a"), "p");
  REQUIRE(cost);
  CHECK(cost->record == 5);
  auto use = two(10, 10, {3, 1}, RecPolicy::custom(-1, 0)).charge("u", Name("a"), "p");
  REQUIRE(use);
  CHECK(use->record == -3);
}

TEST_CASE("infinite funds absorb any charge") {
  CostEnv e = two(0, 0, {7, 9});
  e.set_funds("u", Funds::inf());
  e.set_funds("p", Funds::inf());
  auto r = e.charge("u", Name("a"), "p");
  REQUIRE(r);
  CHECK(r->funds("u").infinite);
  CHECK(r->funds("p").infinite);
}

TEST_CASE("unknown resources and owners are errors") {
  CostEnv e = two(1, 1, {});
  CHECK_THROWS_AS(e.charge("u", Name("zz"), "p"), CostError);
  CHECK_THROWS_AS(e.charge("nobody", Name("a"), "p"), CostError);
}

TEST_CASE("registration uses the standard policy and marks the resource dynamic") {
  CostEnv e = two(1, 1, {}, RecPolicy::custom(-1, 1)).registered(Name("c"), {2, 1});
  CHECK(e.resource(Name("c")).policy.standard);
  CHECK(e.resource(Name("c")).dynamic);
  CHECK_THROWS_AS(e.registered(Name("c"), {}), CostError);
  CHECK_FALSE(e.collected({}).has(Name("c")));
  CHECK(e.collected({}).has(Name("a")));
  CHECK(e.collected({Name("c")}).has(Name("c")));
}

TEST_CASE("transfers") {
  CostEnv e = two(5, 0, {});
  auto t = e.transfer("u", 4, "p");
  REQUIRE(t);
  CHECK(t->funds("u") == Funds::of(1));
  CHECK(t->funds("p") == Funds::of(4));
  CHECK_FALSE(e.transfer("u", 6, "p"));
  CHECK(*e.transfer("u", 5, "u") == e);
}

TEST_CASE("external owner and simplicity") {
  CostEnv e = two(1, 1, {3, 0});
  CHECK(e.is_simple());
  CostEnv x = e.with_external();
  CHECK(x.funds(kExternal).infinite);
  CHECK_THROWS_AS(x.with_external(), CostError);
  CHECK_FALSE(two(1, 1, {3, 1}).is_simple());
}

TEST_CASE("environment keys separate records only when asked") {
  CostEnv a = two(1, 1, {}), b = a;
  b.record = 9;
  CHECK(a.key() != b.key());
  CHECK(a.key(false) == b.key(false));
}
