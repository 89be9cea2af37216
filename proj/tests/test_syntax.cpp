#include "helpers.hpp"

#include <doctest.h>

using namespace th;

TEST_CASE("fresh names skip the avoid set in order") {
  NameSet avoid{Name("r"), Name("r", 1)};
  CHECK(fresh_name("r", {}) == Name("r"));
  CHECK(fresh_name("r", avoid) == Name("r", 2));
  CHECK(fresh_name("r", avoid).str() == "r#2");
}

TEST_CASE("substitution avoids capture under restriction") {
  // new r. x!(r)  with x := r  must not capture the free r
  Thread t = Thread::restrict(Name("r"), {}, out(V("x"), {N("r")}));
  Thread s = substitute(t, "x", N("r"));
  REQUIRE(s.kind == Thread::Kind::New);
  CHECK(s.name != Name("r"));
  const Thread& o = s.sub[0];
  CHECK(o.chan == N("r"));
  CHECK(o.args[0] == Value::of_name(s.name));
}

TEST_CASE("substitution stops at a rebinding input") {
  Thread t = in(N("a"), {"x"}, out(V("x")));
  CHECK(substitute(t, "x", N("b")) == t);
}

TEST_CASE("free names") {
  System m = System::restrict(Name("c"), {}, own("o", out(N("c"), {N("d")})));
  CHECK(free_names(m) == NameSet{Name("d")});
  CHECK(all_names(m) == NameSet{Name("c"), Name("d")});
}

TEST_CASE("structural congruence: parallel laws and nil") {
  System a = own("o", out(N("a"))), b = own("p", out(N("b"))), c = own("o", in(N("c"), {}));
  CHECK(struct_eq(par(a, b), par(b, a)));
  CHECK(struct_eq(par(a, par(b, c)), par(par(a, b), c)));
  CHECK(struct_eq(par(a, System::nil()), a));
  CHECK_FALSE(struct_eq(a, b));
}

TEST_CASE("structural congruence: scope extrusion and alpha") {
  auto live = [](const std::string& c) { return par(own("o", out(N(c))), own("p", in(N(c), {}))); };
  System q = own("o", out(N("b")));
  System wide = System::restrict(Name("a"), {1, 0}, par(live("a"), q));
  System narrow = par(System::restrict(Name("a"), {1, 0}, live("a")), q);
  CHECK(struct_eq(wide, narrow));
  System renamed = System::restrict(Name("z"), {1, 0}, live("z"));
  CHECK(struct_eq(System::restrict(Name("a"), {1, 0}, live("a")), renamed));
  // the type is part of the binder
  CHECK_FALSE(struct_eq(System::restrict(Name("a"), {2, 0}, live("a")), renamed));
  // q's b is free and may not be captured
  System cap = System::restrict(Name("b"), {}, par(live("b"), q));
  CHECK_FALSE(struct_eq(cap, par(System::restrict(Name("b"), {}, live("b")), q)));
}

TEST_CASE("restrictions nobody can use are dropped") {
  CHECK(struct_eq(System::restrict(Name("a"), {2, 0}, own("o", out(N("a")))), System::nil()));
  CHECK_FALSE(struct_eq(own("o", out(N("a"))), System::nil()));
}

TEST_CASE("alpha_key agrees with struct_eq on variable spellings") {
  Thread t1 = Thread::rec("X", in(N("a"), {"x"}, out(V("x"), {}, Thread::recvar("X"))));
  Thread t2 = Thread::rec("Y", in(N("a"), {"y"}, out(V("y"), {}, Thread::recvar("Y"))));
  CHECK(alpha_key(own("o", t1)) == alpha_key(own("o", t2)));
  CHECK(struct_eq(own("o", t1), own("o", t2)));
  Thread t3 = Thread::rec("Y", in(N("a"), {"y"}, out(N("y"), {}, Thread::recvar("Y"))));
  CHECK(alpha_key(own("o", t1)) != alpha_key(own("o", t3)));
}

TEST_CASE("flatten and unflatten are inverse up to congruence") {
  System m = System::restrict(Name("c"), {1, 2},
                              par(own("o", out(N("c"))), System::restrict(Name("d"), {}, own("p", in(N("d"), {})))));
  Flat f = flatten(m);
  CHECK(f.bound.size() == 2);
  CHECK(f.comps.size() == 2);
  CHECK(struct_eq(unflatten(f), m));
}

TEST_CASE("beta normalisation resolves matches and splits") {
  System m = own("o", Thread::match(N("a"), N("a"), out(N("x")), out(N("y"))));
  CHECK(struct_eq(beta_normalize(m), own("o", out(N("x")))));
  System mm = own("o", Thread::match(N("a"), N("b"), out(N("x")), out(N("y"))));
  CHECK(struct_eq(beta_normalize(mm), own("o", out(N("y")))));
  System sp = own("o", Thread::par(out(N("x")), out(N("y"))));
  CHECK(struct_eq(beta_normalize(sp), par(own("o", out(N("x"))), own("o", out(N("y"))))));
}

TEST_CASE("beta normalisation never unwinds recursion") {
  System r = own("o", Thread::rec("X", out(N("a"), {}, Thread::recvar("X"))));
  CHECK(struct_eq(beta_normalize(r), r));
  System u = beta_unfold_normalize(r);
  CHECK(u.thread.kind == Thread::Kind::Output);
}

TEST_CASE("choice desugars to a private trigger channel") {
  Thread c = desugar_choice(out(N("a")), out(N("b")), {Name("a"), Name("b")});
  REQUIRE(c.kind == Thread::Kind::New);
  std::string text = to_text(c);
  CHECK(text.find("(+)") == std::string::npos);
  CHECK(text.find("new") == 0);
  CHECK_FALSE(free_names(c).count(c.name));
}

TEST_CASE("printing") {
  CHECK(to_text(System::nil()) == "0");
  CHECK(to_text(own("o", out(N("a"), {N("v")}))) == "[o] a!(v)");
  CHECK(to_text(Value::ctor("book", N("n1"))) == "book(n1)");
}
