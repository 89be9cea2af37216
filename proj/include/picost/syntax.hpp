#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace picost {

// Channel / resource name. Fresh variants of a base are printed base#k.
struct Name {
  std::string base;
  std::optional<unsigned> suffix;

  Name() = default;
  Name(std::string b, std::optional<unsigned> s = std::nullopt)
      : base(std::move(b)), suffix(s) {}

  std::string str() const;
  static Name parse(const std::string& text);

  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;
};

using NameSet = std::set<Name>;
using Owner = std::string;

struct ResType {
  std::uint64_t use = 0;
  std::uint64_t provide = 0;
  auto operator<=>(const ResType&) const = default;
  bool operator==(const ResType&) const = default;
  std::string str() const;
};

struct Value {
  enum class Kind { Name, Var, Nat, Str, Ctor, Tuple };
  Kind kind = Kind::Nat;
  Name name;               // Name
  std::string text;        // Var id, Str contents, Ctor tag
  std::uint64_t nat = 0;   // Nat
  std::vector<Value> args; // Ctor (exactly one), Tuple

  static Value of_name(Name n);
  static Value var(std::string id);
  static Value number(std::uint64_t n);
  static Value string(std::string s);
  static Value ctor(std::string tag, Value arg);
  static Value tuple(std::vector<Value> items);

  bool is_name() const { return kind == Kind::Name; }
  bool closed() const;

  bool operator<(const Value& o) const;
  bool operator==(const Value&) const = default;
};

struct Thread {
  enum class Kind { Input, Output, Match, New, Par, Rec, Var, Stop };
  Kind kind = Kind::Stop;
  Value chan;                      // Input/Output subject, Match lhs
  Value rhs;                       // Match rhs
  std::vector<std::string> params; // Input binders
  std::vector<Value> args;         // Output payload
  Name name;                       // New
  ResType type;                    // New
  std::string var;                 // Rec binder / recursion variable
  std::vector<Thread> sub;         // continuation | then,else | left,right | rec body

  static Thread stop();
  static Thread input(Value chan, std::vector<std::string> params, Thread body);
  static Thread output(Value chan, std::vector<Value> args, Thread body);
  static Thread match(Value a, Value b, Thread then_, Thread else_);
  static Thread restrict(Name n, ResType t, Thread body);
  static Thread par(Thread l, Thread r);
  static Thread rec(std::string x, Thread body);
  static Thread recvar(std::string x);

  bool operator==(const Thread&) const = default;
};

struct System {
  enum class Kind { Owned, Par, New, Nil };
  Kind kind = Kind::Nil;
  Owner owner;             // Owned
  Thread thread;           // Owned
  Name name;               // New
  ResType type;            // New
  std::vector<System> sub; // Par: two, New: one

  static System nil();
  static System owned(Owner o, Thread t);
  static System par(System l, System r);
  static System restrict(Name n, ResType t, System body);

  bool operator==(const System&) const = default;
};

// Deterministic supply: base, base#1, base#2, ... first not in `avoid`.
Name fresh_name(const std::string& base, const NameSet& avoid);

NameSet free_names(const Value& v);
NameSet free_names(const Thread& t);
NameSet free_names(const System& s);
// Every name occurring anywhere, bound or free.
void all_names(const Thread& t, NameSet& out);
void all_names(const System& s, NameSet& out);
NameSet all_names(const System& s);

// Capture-avoiding substitutions.
Value substitute(const Value& v, const std::string& x, const Value& by);
Thread substitute(const Thread& t, const std::string& x, const Value& by);
Thread substitute_many(const Thread& t, const std::vector<std::string>& xs,
                       const std::vector<Value>& vs);
Thread substitute_recvar(const Thread& t, const std::string& x, const Thread& by);
Value rename_name(const Value& v, const Name& from, const Name& to);
Thread rename_name(const Thread& t, const Name& from, const Name& to);
System rename_name(const System& s, const Name& from, const Name& to);

// Structural canonical form. `avoid` names are never chosen for bound names
// (a configuration passes its environment domain here).
System struct_canonical(const System& m, const NameSet& avoid = {});
bool struct_eq(const System& m, const System& n);
// Text of the canonical form with every bound name and variable respelled;
// equal exactly when struct_eq holds.
std::string alpha_key(const System& m);

// split / export / match / mismatch to a fixpoint; never unwinds.
System beta_normalize(const System& m, const NameSet& avoid = {});
// As beta_normalize, additionally unwinding each top-level rec once.
// Used for matching "up to beta-moves" where unwind counts as one.
System beta_unfold_normalize(const System& m, const NameSet& avoid = {});

Thread desugar_choice(const Thread& p, const Thread& q, const NameSet& avoid = {});

// Flattened view of a system: new b~ ([T1]o1 | ... | [Tk]ok).
struct Component {
  Owner owner;
  Thread thread;
};
struct Flat {
  std::vector<std::pair<Name, ResType>> bound;
  std::vector<Component> comps;
};
Flat flatten(const System& s);
System unflatten(const Flat& f);

std::string to_text(const Value& v);
std::string to_text(const Thread& t);
std::string to_text(const System& s);

} // namespace picost
