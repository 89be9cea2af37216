#include "picost/syntax.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace picost {

std::string Name::str() const {
  if (!suffix) return base;
  return base + "#" + std::to_string(*suffix);
}

Name Name::parse(const std::string& text) {
  auto pos = text.rfind('#');
  if (pos == std::string::npos || pos + 1 >= text.size()) return Name(text);
  for (size_t i = pos + 1; i < text.size(); ++i)
    if (text[i] < '0' || text[i] > '9') return Name(text);
  return Name(text.substr(0, pos), static_cast<unsigned>(std::stoul(text.substr(pos + 1))));
}

std::string ResType::str() const {
  return "(" + std::to_string(use) + "," + std::to_string(provide) + ")";
}

Value Value::of_name(Name n) {
  Value v;
  v.kind = Kind::Name;
  v.name = std::move(n);
  return v;
}
Value Value::var(std::string id) {
  Value v;
  v.kind = Kind::Var;
  v.text = std::move(id);
  return v;
}
Value Value::number(std::uint64_t n) {
  Value v;
  v.kind = Kind::Nat;
  v.nat = n;
  return v;
}
Value Value::string(std::string s) {
  Value v;
  v.kind = Kind::Str;
  v.text = std::move(s);
  return v;
}
Value Value::ctor(std::string tag, Value arg) {
  Value v;
  v.kind = Kind::Ctor;
  v.text = std::move(tag);
  v.args.push_back(std::move(arg));
  return v;
}
Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.kind = Kind::Tuple;
  v.args = std::move(items);
  return v;
}

bool Value::operator<(const Value& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  if (text != o.text) return text < o.text;
  if (nat != o.nat) return nat < o.nat;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
}

bool Value::closed() const {
  if (kind == Kind::Var) return false;
  for (auto& a : args)
    if (!a.closed()) return false;
  return true;
}

Thread Thread::stop() { return Thread{}; }
Thread Thread::input(Value chan, std::vector<std::string> params, Thread body) {
  Thread t;
  t.kind = Kind::Input;
  t.chan = std::move(chan);
  t.params = std::move(params);
  t.sub.push_back(std::move(body));
  return t;
}
Thread Thread::output(Value chan, std::vector<Value> args, Thread body) {
  Thread t;
  t.kind = Kind::Output;
  t.chan = std::move(chan);
  t.args = std::move(args);
  t.sub.push_back(std::move(body));
  return t;
}
Thread Thread::match(Value a, Value b, Thread then_, Thread else_) {
  Thread t;
  t.kind = Kind::Match;
  t.chan = std::move(a);
  t.rhs = std::move(b);
  t.sub.push_back(std::move(then_));
  t.sub.push_back(std::move(else_));
  return t;
}
Thread Thread::restrict(Name n, ResType ty, Thread body) {
  Thread t;
  t.kind = Kind::New;
  t.name = std::move(n);
  t.type = ty;
  t.sub.push_back(std::move(body));
  return t;
}
Thread Thread::par(Thread l, Thread r) {
  Thread t;
  t.kind = Kind::Par;
  t.sub.push_back(std::move(l));
  t.sub.push_back(std::move(r));
  return t;
}
Thread Thread::rec(std::string x, Thread body) {
  Thread t;
  t.kind = Kind::Rec;
  t.var = std::move(x);
  t.sub.push_back(std::move(body));
  return t;
}
Thread Thread::recvar(std::string x) {
  Thread t;
  t.kind = Kind::Var;
  t.var = std::move(x);
  return t;
}

System System::nil() { return System{}; }
System System::owned(Owner o, Thread t) {
  System s;
  s.kind = Kind::Owned;
  s.owner = std::move(o);
  s.thread = std::move(t);
  return s;
}
System System::par(System l, System r) {
  System s;
  s.kind = Kind::Par;
  s.sub.push_back(std::move(l));
  s.sub.push_back(std::move(r));
  return s;
}
System System::restrict(Name n, ResType t, System body) {
  System s;
  s.kind = Kind::New;
  s.name = std::move(n);
  s.type = t;
  s.sub.push_back(std::move(body));
  return s;
}

Name fresh_name(const std::string& base, const NameSet& avoid) {
  Name n(base);
  if (!avoid.count(n)) return n;
  for (unsigned k = 1;; ++k) {
    Name c(base, k);
    if (!avoid.count(c)) return c;
  }
}

// ---------------------------------------------------------------- names

static void value_names(const Value& v, NameSet& out) {
  if (v.kind == Value::Kind::Name) out.insert(v.name);
  for (auto& a : v.args) value_names(a, out);
}

NameSet free_names(const Value& v) {
  NameSet out;
  value_names(v, out);
  return out;
}

static void thread_fn(const Thread& t, NameSet& out) {
  switch (t.kind) {
  case Thread::Kind::Input:
    value_names(t.chan, out);
    thread_fn(t.sub[0], out);
    break;
  case Thread::Kind::Output:
    value_names(t.chan, out);
    for (auto& a : t.args) value_names(a, out);
    thread_fn(t.sub[0], out);
    break;
  case Thread::Kind::Match:
    value_names(t.chan, out);
    value_names(t.rhs, out);
    thread_fn(t.sub[0], out);
    thread_fn(t.sub[1], out);
    break;
  case Thread::Kind::New: {
    NameSet inner;
    thread_fn(t.sub[0], inner);
    inner.erase(t.name);
    out.insert(inner.begin(), inner.end());
    break;
  }
  case Thread::Kind::Par:
    thread_fn(t.sub[0], out);
    thread_fn(t.sub[1], out);
    break;
  case Thread::Kind::Rec:
    thread_fn(t.sub[0], out);
    break;
  case Thread::Kind::Var:
  case Thread::Kind::Stop:
    break;
  }
}

NameSet free_names(const Thread& t) {
  NameSet out;
  thread_fn(t, out);
  return out;
}

static void system_fn(const System& s, NameSet& out) {
  switch (s.kind) {
  case System::Kind::Owned:
    thread_fn(s.thread, out);
    break;
  case System::Kind::Par:
    system_fn(s.sub[0], out);
    system_fn(s.sub[1], out);
    break;
  case System::Kind::New: {
    NameSet inner;
    system_fn(s.sub[0], inner);
    inner.erase(s.name);
    out.insert(inner.begin(), inner.end());
    break;
  }
  case System::Kind::Nil:
    break;
  }
}

NameSet free_names(const System& s) {
  NameSet out;
  system_fn(s, out);
  return out;
}

void all_names(const Thread& t, NameSet& out) {
  value_names(t.chan, out);
  value_names(t.rhs, out);
  for (auto& a : t.args) value_names(a, out);
  if (t.kind == Thread::Kind::New) out.insert(t.name);
  for (auto& s : t.sub) all_names(s, out);
}

void all_names(const System& s, NameSet& out) {
  if (s.kind == System::Kind::Owned) all_names(s.thread, out);
  if (s.kind == System::Kind::New) out.insert(s.name);
  for (auto& c : s.sub) all_names(c, out);
}

NameSet all_names(const System& s) {
  NameSet out;
  all_names(s, out);
  return out;
}

static void value_vars(const Value& v, std::set<std::string>& out) {
  if (v.kind == Value::Kind::Var) out.insert(v.text);
  for (auto& a : v.args) value_vars(a, out);
}

static void thread_vars(const Thread& t, std::set<std::string>& out) {
  value_vars(t.chan, out);
  value_vars(t.rhs, out);
  for (auto& a : t.args) value_vars(a, out);
  for (auto& p : t.params) out.insert(p);
  for (auto& s : t.sub) thread_vars(s, out);
}

static std::string fresh_var(const std::string& base, const std::set<std::string>& avoid) {
  std::string v = base + "'";
  while (avoid.count(v)) v += "'";
  return v;
}

// --------------------------------------------------------- substitution

Value substitute(const Value& v, const std::string& x, const Value& by) {
  if (v.kind == Value::Kind::Var) return v.text == x ? by : v;
  if (v.args.empty()) return v;
  Value out = v;
  for (auto& a : out.args) a = substitute(a, x, by);
  return out;
}

Value rename_name(const Value& v, const Name& from, const Name& to) {
  if (v.kind == Value::Kind::Name) return v.name == from ? Value::of_name(to) : v;
  if (v.args.empty()) return v;
  Value out = v;
  for (auto& a : out.args) a = rename_name(a, from, to);
  return out;
}

// Copy of the node without its children; avoids copying subtrees that are
// rebuilt anyway.
static Thread shell(const Thread& t) {
  Thread o;
  o.kind = t.kind;
  o.chan = t.chan;
  o.rhs = t.rhs;
  o.params = t.params;
  o.args = t.args;
  o.name = t.name;
  o.type = t.type;
  o.var = t.var;
  o.sub.reserve(t.sub.size());
  return o;
}

Thread rename_name(const Thread& t, const Name& from, const Name& to) {
  if (from == to) return t;
  Thread out = shell(t);
  if (t.kind == Thread::Kind::New) {
    if (t.name == from) return t;
    if (t.name == to) {
      NameSet avoid;
      all_names(t.sub[0], avoid);
      avoid.insert(from);
      avoid.insert(to);
      Name nn = fresh_name(t.name.base, avoid);
      out.name = nn;
      out.sub.push_back(rename_name(rename_name(t.sub[0], t.name, nn), from, to));
    } else {
      out.sub.push_back(rename_name(t.sub[0], from, to));
    }
    return out;
  }
  out.chan = rename_name(t.chan, from, to);
  out.rhs = rename_name(t.rhs, from, to);
  for (auto& a : out.args) a = rename_name(a, from, to);
  for (auto& c : t.sub) out.sub.push_back(rename_name(c, from, to));
  return out;
}

System rename_name(const System& s, const Name& from, const Name& to) {
  if (from == to) return s;
  System out = s;
  switch (s.kind) {
  case System::Kind::Owned:
    out.thread = rename_name(s.thread, from, to);
    return out;
  case System::Kind::Par:
    out.sub[0] = rename_name(s.sub[0], from, to);
    out.sub[1] = rename_name(s.sub[1], from, to);
    return out;
  case System::Kind::New:
    if (s.name == from) return s;
    if (s.name == to) {
      NameSet avoid = all_names(s.sub[0]);
      avoid.insert(from);
      avoid.insert(to);
      Name nn = fresh_name(s.name.base, avoid);
      out.name = nn;
      out.sub[0] = rename_name(s.sub[0], s.name, nn);
    }
    out.sub[0] = rename_name(out.sub[0], from, to);
    return out;
  case System::Kind::Nil:
    return s;
  }
  return out;
}

Thread substitute(const Thread& t, const std::string& x, const Value& by) {
  Thread out = shell(t);
  switch (t.kind) {
  case Thread::Kind::Input: {
    out.chan = substitute(t.chan, x, by);
    if (std::find(t.params.begin(), t.params.end(), x) != t.params.end()) {
      out.sub = t.sub;
      return out;
    }
    std::set<std::string> byv;
    value_vars(by, byv);
    Thread body = t.sub[0];
    for (auto& p : out.params) {
      if (byv.count(p)) {
        std::set<std::string> avoid = byv;
        thread_vars(body, avoid);
        std::string np = fresh_var(p, avoid);
        body = substitute(body, p, Value::var(np));
        p = np;
      }
    }
    out.sub.push_back(substitute(body, x, by));
    return out;
  }
  case Thread::Kind::New: {
    NameSet byn = free_names(by);
    if (byn.count(t.name)) {
      NameSet avoid = byn;
      all_names(t.sub[0], avoid);
      Name nn = fresh_name(t.name.base, avoid);
      out.name = nn;
      out.sub.push_back(substitute(rename_name(t.sub[0], t.name, nn), x, by));
    } else {
      out.sub.push_back(substitute(t.sub[0], x, by));
    }
    return out;
  }
  default:
    break;
  }
  out.chan = substitute(t.chan, x, by);
  out.rhs = substitute(t.rhs, x, by);
  for (auto& a : out.args) a = substitute(a, x, by);
  for (auto& c : t.sub) out.sub.push_back(substitute(c, x, by));
  return out;
}

Thread substitute_many(const Thread& t, const std::vector<std::string>& xs,
                       const std::vector<Value>& vs) {
  // Closed values cannot capture each other, so sequential is simultaneous.
  Thread out = t;
  for (size_t i = 0; i < xs.size() && i < vs.size(); ++i) out = substitute(out, xs[i], vs[i]);
  return out;
}

Thread substitute_recvar(const Thread& t, const std::string& x, const Thread& by) {
  switch (t.kind) {
  case Thread::Kind::Var:
    return t.var == x ? by : t;
  case Thread::Kind::Rec:
    if (t.var == x) return t;
    break;
  case Thread::Kind::New: {
    NameSet byn = free_names(by);
    Thread out = shell(t);
    if (byn.count(t.name)) {
      NameSet avoid = byn;
      all_names(t.sub[0], avoid);
      Name nn = fresh_name(t.name.base, avoid);
      out.name = nn;
      out.sub.push_back(substitute_recvar(rename_name(t.sub[0], t.name, nn), x, by));
    } else {
      out.sub.push_back(substitute_recvar(t.sub[0], x, by));
    }
    return out;
  }
  case Thread::Kind::Input: {
    std::set<std::string> byv;
    thread_vars(by, byv);
    Thread out = shell(t);
    Thread body = t.sub[0];
    for (auto& p : out.params) {
      if (byv.count(p)) {
        std::set<std::string> avoid = byv;
        thread_vars(body, avoid);
        std::string np = fresh_var(p, avoid);
        body = substitute(body, p, Value::var(np));
        p = np;
      }
    }
    out.sub.push_back(substitute_recvar(body, x, by));
    return out;
  }
  default:
    break;
  }
  Thread out = shell(t);
  for (auto& c : t.sub) out.sub.push_back(substitute_recvar(c, x, by));
  return out;
}

// ------------------------------------------------------------- printing

static std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string to_text(const Value& v) {
  switch (v.kind) {
  case Value::Kind::Name:
    return v.name.str();
  case Value::Kind::Var:
    return v.text;
  case Value::Kind::Nat:
    return std::to_string(v.nat);
  case Value::Kind::Str:
    return quote(v.text);
  case Value::Kind::Ctor:
    return v.text + "(" + to_text(v.args.at(0)) + ")";
  case Value::Kind::Tuple: {
    std::string s = "<";
    for (size_t i = 0; i < v.args.size(); ++i) s += (i ? "," : "") + to_text(v.args[i]);
    return s + ">";
  }
  }
  return "?";
}

static void print_thread(const Thread& t, std::string& out);

static void par_items(const Thread& t, std::vector<const Thread*>& items) {
  if (t.kind == Thread::Kind::Par) {
    par_items(t.sub[0], items);
    par_items(t.sub[1], items);
  } else {
    items.push_back(&t);
  }
}

static void print_cont(const Thread& t, std::string& out) {
  if (t.kind == Thread::Kind::Stop) return;
  out += '.';
  print_thread(t, out);
}

static void print_thread(const Thread& t, std::string& out) {
  switch (t.kind) {
  case Thread::Kind::Stop:
    out += "stop";
    return;
  case Thread::Kind::Var:
    out += t.var;
    return;
  case Thread::Kind::Input:
    out += to_text(t.chan) + "?";
    if (!t.params.empty()) {
      out += '(';
      for (size_t i = 0; i < t.params.size(); ++i) out += (i ? "," : "") + t.params[i];
      out += ')';
    }
    print_cont(t.sub[0], out);
    return;
  case Thread::Kind::Output:
    out += to_text(t.chan) + "!";
    if (!t.args.empty()) {
      out += '(';
      for (size_t i = 0; i < t.args.size(); ++i) out += (i ? "," : "") + to_text(t.args[i]);
      out += ')';
    }
    print_cont(t.sub[0], out);
    return;
  case Thread::Kind::Match:
    out += "if " + to_text(t.chan) + " = " + to_text(t.rhs) + " then ";
    print_thread(t.sub[0], out);
    out += " else ";
    print_thread(t.sub[1], out);
    return;
  case Thread::Kind::New:
    out += "new " + t.name.str() + ":" + t.type.str() + ".";
    print_thread(t.sub[0], out);
    return;
  case Thread::Kind::Rec:
    out += "rec " + t.var + ".";
    print_thread(t.sub[0], out);
    return;
  case Thread::Kind::Par: {
    std::vector<const Thread*> items;
    par_items(t, items);
    out += '(';
    for (size_t i = 0; i < items.size(); ++i) {
      if (i) out += " | ";
      print_thread(*items[i], out);
    }
    out += ')';
    return;
  }
  }
}

std::string to_text(const Thread& t) {
  std::string out;
  print_thread(t, out);
  return out;
}

static void sys_items(const System& s, std::vector<const System*>& items) {
  if (s.kind == System::Kind::Par) {
    sys_items(s.sub[0], items);
    sys_items(s.sub[1], items);
  } else {
    items.push_back(&s);
  }
}

static void print_system(const System& s, std::string& out) {
  switch (s.kind) {
  case System::Kind::Nil:
    out += "0";
    return;
  case System::Kind::Owned:
    out += "[" + s.owner + "] ";
    print_thread(s.thread, out);
    return;
  case System::Kind::New:
    out += "new " + s.name.str() + ":" + s.type.str() + " in ";
    print_system(s.sub[0], out);
    return;
  case System::Kind::Par: {
    std::vector<const System*> items;
    sys_items(s, items);
    for (size_t i = 0; i < items.size(); ++i) {
      if (i) out += " | ";
      bool wrap = items[i]->kind == System::Kind::New;
      if (wrap) out += '(';
      print_system(*items[i], out);
      if (wrap) out += ')';
    }
    return;
  }
  }
}

std::string to_text(const System& s) {
  std::string out;
  print_system(s, out);
  return out;
}

// ------------------------------------------------------------ flattening

static void flatten_into(const System& s, Flat& f, NameSet& taken) {
  switch (s.kind) {
  case System::Kind::Nil:
    return;
  case System::Kind::Owned:
    f.comps.push_back({s.owner, s.thread});
    return;
  case System::Kind::Par:
    flatten_into(s.sub[0], f, taken);
    flatten_into(s.sub[1], f, taken);
    return;
  case System::Kind::New: {
    Name n = s.name;
    System body = s.sub[0];
    if (taken.count(n)) {
      Name nn = fresh_name(n.base, taken);
      body = rename_name(body, n, nn);
      n = nn;
    }
    taken.insert(n);
    f.bound.push_back({n, s.type});
    flatten_into(body, f, taken);
    return;
  }
  }
}

Flat flatten(const System& s) {
  Flat f;
  NameSet taken = free_names(s);
  NameSet every = all_names(s);
  // Binders must be distinct from each other and from free names; names used
  // elsewhere as inner binders are left alone (capture-avoiding renaming).
  (void)every;
  flatten_into(s, f, taken);
  return f;
}

System unflatten(const Flat& f) {
  System body = System::nil();
  if (!f.comps.empty()) {
    body = System::owned(f.comps.back().owner, f.comps.back().thread);
    for (size_t i = f.comps.size() - 1; i-- > 0;)
      body = System::par(System::owned(f.comps[i].owner, f.comps[i].thread), std::move(body));
  }
  for (size_t i = f.bound.size(); i-- > 0;)
    body = System::restrict(f.bound[i].first, f.bound[i].second, std::move(body));
  return body;
}

// ---------------------------------------------------------- canonical form

static std::string comp_text(const Component& c) { return "[" + c.owner + "] " + to_text(c.thread); }

// Names in printing order (first occurrence wins).
static void value_order(const Value& v, std::vector<Name>& out) {
  if (v.kind == Value::Kind::Name) out.push_back(v.name);
  for (auto& a : v.args) value_order(a, out);
}
static void thread_order(const Thread& t, std::vector<Name>& out) {
  value_order(t.chan, out);
  value_order(t.rhs, out);
  for (auto& a : t.args) value_order(a, out);
  if (t.kind == Thread::Kind::New) out.push_back(t.name);
  for (auto& s : t.sub) thread_order(s, out);
}

static void free_vars(const Thread& t, std::set<std::string>& out) {
  value_vars(t.chan, out);
  value_vars(t.rhs, out);
  for (auto& a : t.args) value_vars(a, out);
  if (t.kind == Thread::Kind::Input) {
    std::set<std::string> inner;
    free_vars(t.sub[0], inner);
    for (auto& p : t.params) inner.erase(p);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (auto& s : t.sub) free_vars(s, out);
}

// Input binders get their base name plus the fewest primes that do not
// collide with variables free in the body.
static Thread canonical_params(const Thread& t) {
  Thread out = t;
  std::vector<std::string> tmp;
  for (size_t i = 0; i < out.params.size(); ++i) {
    tmp.push_back("\x02" + std::to_string(i));
    out.sub[0] = substitute(out.sub[0], out.params[i], Value::var(tmp.back()));
  }
  std::set<std::string> avoid;
  free_vars(out.sub[0], avoid);
  for (auto& x : tmp) avoid.erase(x);
  for (size_t i = 0; i < out.params.size(); ++i) {
    std::string base = t.params[i];
    while (base.size() > 1 && base.back() == '\'') base.pop_back();
    std::string nv = avoid.count(base) ? fresh_var(base, avoid) : base;
    avoid.insert(nv);
    out.sub[0] = substitute(out.sub[0], tmp[i], Value::var(nv));
    out.params[i] = nv;
  }
  return out;
}

static Thread alpha_thread(const Thread& t, const NameSet& outer) {
  if (t.kind == Thread::Kind::Input) {
    Thread c = canonical_params(t);
    Thread out = shell(c);
    for (auto& x : c.sub) out.sub.push_back(alpha_thread(x, outer));
    return out;
  }
  Thread out = shell(t);
  if (t.kind == Thread::Kind::New) {
    NameSet avoid = free_names(t.sub[0]);
    avoid.erase(t.name);
    avoid.insert(outer.begin(), outer.end());
    Name nn = fresh_name(t.name.base, avoid);
    out.name = nn;
    NameSet inner = outer;
    inner.insert(nn);
    out.sub.push_back(alpha_thread(nn != t.name ? rename_name(t.sub[0], t.name, nn) : t.sub[0], inner));
    return out;
  }
  for (auto& x : t.sub) out.sub.push_back(alpha_thread(x, outer));
  return out;
}

// A restricted channel whose every occurrence is the subject of a top-level
// prefix of one polarity can never fire.
static bool dead_channel(const Name& b, const std::vector<Component>& comps,
                         std::vector<size_t>& users) {
  int polarity = 0;
  users.clear();
  for (size_t i = 0; i < comps.size(); ++i) {
    NameSet fn = free_names(comps[i].thread);
    if (!fn.count(b)) continue;
    const Thread& t = comps[i].thread;
    int p = 0;
    if (t.kind == Thread::Kind::Input && t.chan.is_name() && t.chan.name == b) p = 1;
    if (t.kind == Thread::Kind::Output && t.chan.is_name() && t.chan.name == b) p = 2;
    if (p == 0) return false;
    if (t.kind == Thread::Kind::Output) {
      for (auto& a : t.args)
        if (free_names(a).count(b)) return false;
    }
    if (polarity && polarity != p) return false;
    polarity = p;
    users.push_back(i);
  }
  return true;
}

static void collect_garbage(Flat& f) {
  f.comps.erase(std::remove_if(f.comps.begin(), f.comps.end(),
                               [](const Component& c) { return c.thread.kind == Thread::Kind::Stop; }),
                f.comps.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < f.bound.size(); ++i) {
      std::vector<size_t> users;
      if (!dead_channel(f.bound[i].first, f.comps, users)) continue;
      for (size_t k = users.size(); k-- > 0;) f.comps.erase(f.comps.begin() + users[k]);
      f.bound.erase(f.bound.begin() + i);
      changed = true;
      break;
    }
  }
}

System struct_canonical(const System& m, const NameSet& avoid) {
  Flat f = flatten(m);
  collect_garbage(f);

  NameSet boundset;
  for (auto& [n, _] : f.bound) boundset.insert(n);
  NameSet freeset;
  for (auto& c : f.comps) {
    NameSet fn = free_names(c.thread);
    for (auto& n : fn)
      if (!boundset.count(n)) freeset.insert(n);
  }

  // Round 1: shapes with bound names anonymised to their base.
  auto anonymise = [&](const Component& c, const std::map<Name, Name>& to) {
    Thread t = c.thread;
    // two phases so that targets cannot collide with sources
    std::map<Name, Name> tmp;
    unsigned k = 0;
    for (auto& [from, _] : to) {
      Name mid("\x01", k++);
      tmp[mid] = to.at(from);
      t = rename_name(t, from, mid);
    }
    for (auto& [mid, dst] : tmp) t = rename_name(t, mid, dst);
    return "[" + c.owner + "] " + to_text(t);
  };

  std::map<Name, Name> anon1;
  for (auto& [n, _] : f.bound) anon1[n] = Name("?" + n.base);
  std::vector<std::string> shape1(f.comps.size());
  for (size_t i = 0; i < f.comps.size(); ++i) shape1[i] = anonymise(f.comps[i], anon1);

  // Round 2: colour bound names by the shapes of the components using them.
  std::map<Name, std::string> sig;
  for (auto& [n, ty] : f.bound) {
    std::vector<std::string> uses;
    for (size_t i = 0; i < f.comps.size(); ++i) {
      std::vector<Name> order;
      thread_order(f.comps[i].thread, order);
      std::string pos;
      int idx = 0;
      for (auto& o : order) {
        if (boundset.count(o)) {
          if (o == n) pos += std::to_string(idx) + ",";
          ++idx;
        }
      }
      if (!pos.empty()) uses.push_back(shape1[i] + "@" + pos);
    }
    std::sort(uses.begin(), uses.end());
    std::string s = n.base + "|" + ty.str();
    for (auto& u : uses) s += "\x02" + u;
    sig[n] = s;
  }
  std::vector<std::string> colours;
  for (auto& [_, s] : sig) colours.push_back(s);
  std::sort(colours.begin(), colours.end());
  colours.erase(std::unique(colours.begin(), colours.end()), colours.end());
  std::map<Name, Name> anon2;
  for (auto& [n, s] : sig) {
    auto idx = std::lower_bound(colours.begin(), colours.end(), s) - colours.begin();
    anon2[n] = Name("?" + n.base + "~" + std::to_string(idx));
  }
  std::vector<std::pair<std::string, size_t>> order;
  for (size_t i = 0; i < f.comps.size(); ++i)
    order.push_back({anonymise(f.comps[i], anon2) + "\x03" + comp_text(f.comps[i]), i});
  std::sort(order.begin(), order.end());

  // Assign final bound names by first occurrence.
  NameSet used = freeset;
  used.insert(avoid.begin(), avoid.end());
  std::map<Name, Name> final_name;
  for (auto& [_, i] : order) {
    std::vector<Name> occ;
    thread_order(f.comps[i].thread, occ);
    for (auto& o : occ) {
      if (!boundset.count(o) || final_name.count(o)) continue;
      Name nn = fresh_name(o.base, used);
      used.insert(nn);
      final_name[o] = nn;
    }
  }

  Flat g;
  for (auto& [n, ty] : f.bound)
    if (final_name.count(n)) g.bound.push_back({final_name[n], ty});
  std::sort(g.bound.begin(), g.bound.end());
  for (auto& c : f.comps) {
    Thread t = c.thread;
    std::map<Name, Name> tmp;
    unsigned k = 0;
    for (auto& [from, to] : final_name) {
      Name mid("\x01", k++);
      tmp[mid] = to;
      t = rename_name(t, from, mid);
    }
    for (auto& [mid, to] : tmp) t = rename_name(t, mid, to);
    g.comps.push_back({c.owner, alpha_thread(t, {})});
  }
  std::sort(g.comps.begin(), g.comps.end(), [](const Component& a, const Component& b) {
    return comp_text(a) < comp_text(b);
  });
  return unflatten(g);
}

// Replace every binder by a name fixed by its nesting depth so that the
// original spelling no longer matters.
static Thread erase_binders(const Thread& t, unsigned depth) {
  Thread out = shell(t);
  switch (t.kind) {
  case Thread::Kind::Input: {
    Thread body = t.sub[0];
    for (size_t i = 0; i < out.params.size(); ++i) {
      std::string nv = "~v" + std::to_string(depth) + "_" + std::to_string(i);
      body = substitute(body, out.params[i], Value::var(nv));
      out.params[i] = nv;
    }
    out.sub.push_back(erase_binders(body, depth + 1));
    return out;
  }
  case Thread::Kind::New: {
    Name nn("~t" + std::to_string(depth));
    out.name = nn;
    out.sub.push_back(erase_binders(rename_name(t.sub[0], t.name, nn), depth + 1));
    return out;
  }
  case Thread::Kind::Rec: {
    std::string nx = "~X" + std::to_string(depth);
    out.var = nx;
    out.sub.push_back(erase_binders(substitute_recvar(t.sub[0], t.var, Thread::recvar(nx)), depth + 1));
    return out;
  }
  default:
    for (auto& x : t.sub) out.sub.push_back(erase_binders(x, depth));
    return out;
  }
}

std::string alpha_key(const System& m) {
  Flat f = flatten(m);
  for (size_t i = 0; i < f.bound.size(); ++i) {
    Name nn("~s", static_cast<unsigned>(i));
    for (auto& c : f.comps) c.thread = rename_name(c.thread, f.bound[i].first, nn);
    f.bound[i].first = nn;
  }
  for (auto& c : f.comps) c.thread = erase_binders(c.thread, 0);
  return to_text(struct_canonical(unflatten(f)));
}

bool struct_eq(const System& m, const System& n) { return alpha_key(m) == alpha_key(n); }

static bool beta_step(Flat& f, bool unwind, NameSet& taken) {
  bool changed = false;
  std::vector<Component> next;
  for (auto& c : f.comps) {
    const Thread& t = c.thread;
    switch (t.kind) {
    case Thread::Kind::Par:
      next.push_back({c.owner, t.sub[0]});
      next.push_back({c.owner, t.sub[1]});
      changed = true;
      break;
    case Thread::Kind::New: {
      Name n = t.name;
      Thread body = t.sub[0];
      if (taken.count(n)) {
        Name nn = fresh_name(n.base, taken);
        body = rename_name(body, n, nn);
        n = nn;
      }
      taken.insert(n);
      f.bound.push_back({n, t.type});
      next.push_back({c.owner, body});
      changed = true;
      break;
    }
    case Thread::Kind::Match:
      if (t.chan.closed() && t.rhs.closed()) {
        next.push_back({c.owner, t.chan == t.rhs ? t.sub[0] : t.sub[1]});
        changed = true;
      } else {
        next.push_back(c);
      }
      break;
    case Thread::Kind::Rec:
      if (unwind) {
        next.push_back({c.owner, substitute_recvar(t.sub[0], t.var, t)});
        changed = true;
      } else {
        next.push_back(c);
      }
      break;
    default:
      next.push_back(c);
    }
  }
  f.comps = std::move(next);
  return changed;
}

static System beta_impl(const System& m, const NameSet& avoid, bool unfold) {
  System cur = struct_canonical(m, avoid);
  // Recursion unwinding is bounded: each component is unwound at most
  // `limit` times, enough for guarded terms.
  const int limit = 64;
  for (int round = 0; round < limit; ++round) {
    Flat f = flatten(cur);
    NameSet taken = all_names(cur);
    taken.insert(avoid.begin(), avoid.end());
    bool any = false;
    while (beta_step(f, false, taken)) any = true;
    if (unfold) {
      bool unwound = beta_step(f, true, taken);
      any = any || unwound;
    }
    if (!any) return cur;
    cur = struct_canonical(unflatten(f), avoid);
  }
  return cur;
}

System beta_normalize(const System& m, const NameSet& avoid) { return beta_impl(m, avoid, false); }

System beta_unfold_normalize(const System& m, const NameSet& avoid) {
  return beta_impl(m, avoid, true);
}

Thread desugar_choice(const Thread& p, const Thread& q, const NameSet& avoid) {
  NameSet used = avoid;
  all_names(p, used);
  all_names(q, used);
  Name c = fresh_name("c", used);
  Value cv = Value::of_name(c);
  Thread body = Thread::par(Thread::output(cv, {}, Thread::stop()),
                            Thread::par(Thread::input(cv, {}, p), Thread::input(cv, {}, q)));
  return Thread::restrict(c, ResType{0, 0}, body);
}

} // namespace picost
