#include "picost/frontend.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace picost {

using nlohmann::json;

namespace {

const std::string kCall = "\x04";

struct Token {
  enum Kind { Ident, Nat, Str, Punct, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

std::string at(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.col); }

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      if (j + 1 < src.size() && src[j] == '#' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      t.kind = Token::Ident;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Nat;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (c == '"') {
      std::string s;
      adv(1);
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '\\' && i + 1 < src.size()) {
          s += src[i + 1];
          adv(2);
          continue;
        }
        if (d == '"') {
          closed = true;
          adv(1);
          break;
        }
        s += d;
        adv(1);
      }
      if (!closed) throw ParseError("unterminated string", at(t));
      t.kind = Token::Str;
      t.text = s;
    } else if (src.compare(i, 3, "(+)") == 0) {
      t.kind = Token::Punct;
      t.text = "(+)";
      adv(3);
    } else if (std::string("[](),.?!|=:<>;").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      adv(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", at(t));
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw{"new", "in", "if", "then", "else", "rec", "stop", "def"};
  return kw.count(s) > 0;
}

class Parser {
public:
  Parser(std::vector<Token> toks, const Program* base) : toks_(std::move(toks)) {
    if (base) prog_.defs = base->defs;
    for (size_t k = 0; k + 1 < toks_.size(); ++k)
      if (toks_[k].kind == Token::Ident && toks_[k].text == "def" && toks_[k + 1].kind == Token::Ident)
        def_names_.insert(toks_[k + 1].text);
    for (auto& [n, _] : prog_.defs) def_names_.insert(n);
  }

  Program program(const std::vector<std::string>& tvars) {
    while (is("def")) definition();
    if (peek().kind != Token::End) {
      vars_ = tvars;
      System s = system_par();
      expect_end();
      prog_.system = expand_system(s);
    }
    return prog_;
  }

  Thread lone_thread() {
    while (is("def")) definition();
    Thread t = thread_expr();
    expect_end();
    std::vector<std::string> stack;
    return expand(t, stack);
  }

  Value lone_value() {
    Value v = value();
    expect_end();
    return v;
  }

  Thread expand(const Thread& t, std::vector<std::string>& stack) {
    if (t.kind == Thread::Kind::Var && t.var.rfind(kCall, 0) == 0) {
      std::string d = t.var.substr(kCall.size());
      auto it = prog_.defs.find(d);
      if (it == prog_.defs.end()) throw ParseError("unknown definition " + d, "");
      const Definition& def = it->second;
      if (def.params.size() != t.args.size())
        throw ParseError("definition " + d + " expects " + std::to_string(def.params.size()) +
                             " arguments",
                         std::to_string(def.line) + ":1");
      auto on = std::find(stack.begin(), stack.end(), d);
      if (on != stack.end()) {
        if (def.params.empty()) return Thread::recvar(d);
        // unfold once more if the cycle is closed by a parameterless definition
        bool closes = false;
        for (auto k = on + 1; k != stack.end(); ++k) closes = closes || prog_.defs.at(*k).params.empty();
        if (!closes)
          throw ParseError("recursive definition " + d + " must pass through a parameterless one",
                           std::to_string(def.line) + ":1");
      }
      stack.push_back(d);
      Thread body = expand(def.body, stack);
      stack.pop_back();
      if (has_free_recvar(body, d)) body = Thread::rec(d, body);
      return substitute_many(body, def.params, t.args);
    }
    Thread out = t;
    for (auto& s : out.sub) s = expand(s, stack);
    return out;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Program prog_;
  std::set<std::string> def_names_;
  std::vector<std::string> vars_;
  std::vector<std::string> recs_;

  static bool has_free_recvar(const Thread& t, const std::string& x) {
    if (t.kind == Thread::Kind::Var) return t.var == x;
    if (t.kind == Thread::Kind::Rec && t.var == x) return false;
    for (auto& s : t.sub)
      if (has_free_recvar(s, x)) return true;
    return false;
  }

  System expand_system(const System& s) {
    System out = s;
    std::vector<std::string> stack;
    if (s.kind == System::Kind::Owned) out.thread = expand(s.thread, stack);
    for (auto& c : out.sub) c = expand_system(c);
    return out;
  }

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is(const std::string& s, size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Token::Punct || t.kind == Token::Ident) && t.text == s;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + got, at(t));
  }
  void expect(const std::string& s) {
    if (!is(s)) fail("expected '" + s + "'");
    next();
  }
  void expect_end() {
    if (peek().kind != Token::End) fail("expected end of input");
  }
  std::string ident(const char* what) {
    if (peek().kind != Token::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
    return next().text;
  }
  std::uint64_t nat() {
    if (peek().kind != Token::Nat) fail("expected a natural number");
    return std::stoull(next().text);
  }
  bool bound_var(const std::string& x) const {
    return std::find(vars_.begin(), vars_.end(), x) != vars_.end();
  }

  void definition() {
    int line = peek().line;
    expect("def");
    Definition d;
    d.line = line;
    d.name = ident("definition name");
    if (is("(")) {
      next();
      if (!is(")")) {
        d.params.push_back(ident("parameter"));
        while (is(",")) {
          next();
          d.params.push_back(ident("parameter"));
        }
      }
      expect(")");
    }
    expect("=");
    auto saved = vars_;
    vars_ = d.params;
    recs_.clear();
    d.body = thread_expr();
    vars_ = saved;
    expect(";");
    prog_.defs[d.name] = d;
  }

  ResType opt_type() {
    if (!is(":")) return ResType{0, 0};
    next();
    expect("(");
    ResType t;
    t.use = nat();
    expect(",");
    t.provide = nat();
    expect(")");
    return t;
  }

  System system_par() {
    System s = system_atom();
    while (is("|")) {
      next();
      s = System::par(std::move(s), system_atom());
    }
    return s;
  }

  System system_atom() {
    const Token& t = peek();
    if (t.kind == Token::Nat && t.text == "0") {
      next();
      return System::nil();
    }
    if (is("[")) {
      next();
      std::string o = ident("owner");
      expect("]");
      // '|' belongs to the system level; a choice cannot be confused with it
      return System::owned(o, thread_choice());
    }
    if (is("new")) {
      next();
      Name n = Name::parse(ident("resource name"));
      ResType ty = opt_type();
      expect("in");
      return System::restrict(n, ty, system_par());
    }
    if (is("(")) {
      next();
      System s = system_par();
      expect(")");
      return s;
    }
    fail("expected a system ('0', '[owner] thread', 'new' or '(')");
  }

  Thread thread_expr() {
    Thread t = thread_choice();
    while (is("|")) {
      next();
      t = Thread::par(std::move(t), thread_choice());
    }
    return t;
  }

  Thread thread_choice() {
    Thread t = thread_prefix();
    while (is("(+)")) {
      next();
      Thread u = thread_prefix();
      t = desugar_choice(t, u);
    }
    return t;
  }

  Thread continuation() {
    if (!is(".")) return Thread::stop();
    next();
    return thread_prefix();
  }

  Thread thread_prefix() {
    if (is("stop")) {
      next();
      return Thread::stop();
    }
    if (is("(")) {
      next();
      Thread t = thread_expr();
      expect(")");
      return t;
    }
    if (is("if")) {
      next();
      Value a = value();
      expect("=");
      Value b = value();
      expect("then");
      Thread p = thread_prefix();
      expect("else");
      Thread q = thread_prefix();
      return Thread::match(a, b, p, q);
    }
    if (is("new")) {
      next();
      Name n = Name::parse(ident("resource name"));
      ResType ty = opt_type();
      expect(".");
      return Thread::restrict(n, ty, thread_prefix());
    }
    if (is("rec")) {
      next();
      std::string x = ident("recursion variable");
      expect(".");
      recs_.push_back(x);
      Thread body = thread_prefix();
      recs_.pop_back();
      return Thread::rec(x, body);
    }
    if (peek().kind != Token::Ident || is_keyword(peek().text)) fail("expected a thread");
    if (is("?", 1) || is("!", 1)) {
      Token ct = next();
      Value chan = bound_var(ct.text) ? Value::var(ct.text) : Value::of_name(Name::parse(ct.text));
      bool input = next().text == "?";
      if (input) {
        std::vector<std::string> params;
        if (is("(")) {
          next();
          if (!is(")")) {
            params.push_back(ident("parameter"));
            while (is(",")) {
              next();
              params.push_back(ident("parameter"));
            }
          }
          expect(")");
        }
        auto saved = vars_;
        vars_.insert(vars_.end(), params.begin(), params.end());
        Thread body = continuation();
        vars_ = saved;
        return Thread::input(chan, params, body);
      }
      std::vector<Value> args;
      if (is("(")) {
        next();
        if (!is(")")) {
          args.push_back(value());
          while (is(",")) {
            next();
            args.push_back(value());
          }
        }
        expect(")");
      }
      return Thread::output(chan, args, continuation());
    }
    Token id = next();
    if (std::find(recs_.begin(), recs_.end(), id.text) != recs_.end()) return Thread::recvar(id.text);
    if (def_names_.count(id.text)) {
      Thread call;
      call.kind = Thread::Kind::Var;
      call.var = kCall + id.text;
      if (is("(")) {
        next();
        if (!is(")")) {
          call.args.push_back(value());
          while (is(",")) {
            next();
            call.args.push_back(value());
          }
        }
        expect(")");
      }
      return call;
    }
    throw ParseError("unbound identifier '" + id.text + "'", at(id));
  }

  Value value() {
    const Token& t = peek();
    if (t.kind == Token::Nat) return Value::number(std::stoull(next().text));
    if (t.kind == Token::Str) return Value::string(next().text);
    if (is("<")) {
      next();
      std::vector<Value> items;
      if (!is(">")) {
        items.push_back(value());
        while (is(",")) {
          next();
          items.push_back(value());
        }
      }
      expect(">");
      return Value::tuple(items);
    }
    if (t.kind == Token::Ident && !is_keyword(t.text)) {
      std::string x = next().text;
      if (is("(")) {
        next();
        Value arg = value();
        expect(")");
        return Value::ctor(x, arg);
      }
      if (bound_var(x)) return Value::var(x);
      return Value::of_name(Name::parse(x));
    }
    fail("expected a value");
  }
};

} // namespace

Program parse_program(const std::string& text, const Program* base,
                      const std::vector<std::string>& template_vars) {
  Parser p(lex(text), base);
  return p.program(template_vars);
}

System parse_system(const std::string& text, const Program* base,
                    const std::vector<std::string>& template_vars) {
  Program p = parse_program(text, base, template_vars);
  if (!p.system) throw ParseError("no system given", at(lex(text).back()));
  return *p.system;
}

Thread parse_thread(const std::string& text, const Program* base) {
  Parser p(lex(text), base);
  return p.lone_thread();
}

Value parse_value(const std::string& text) {
  Parser p(lex(text), nullptr);
  return p.lone_value();
}

Thread expand_call(const Program& prog, const std::string& name, const std::vector<Value>& args) {
  Parser p(lex(""), &prog);
  Thread call;
  call.kind = Thread::Kind::Var;
  call.var = kCall + name;
  call.args = args;
  std::vector<std::string> stack;
  return p.expand(call, stack);
}

std::string pretty(const System& s) { return to_text(s); }

std::string pretty(const CostEnv& env) { return env_to_json(env).dump(2); }

// ------------------------------------------------------------------- JSON

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string k;
  for (char c : key) {
    if (c == '~')
      k += "~0";
    else if (c == '/')
      k += "~1";
    else
      k += c;
  }
  return ptr + "/" + k;
}

std::uint64_t get_nat(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw ParseError("expected a natural number", ptr);
  return j.get<std::uint64_t>();
}

std::int64_t get_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", ptr);
  return j.get<std::int64_t>();
}

const std::string& get_str(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ParseError("expected a string", ptr);
  return j.get_ref<const std::string&>();
}

void check_keys(const json& j, const std::string& ptr, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ParseError("expected an object", ptr);
  for (auto& [k, _] : j.items())
    if (!allowed.count(k) && k.rfind("_", 0) != 0 && k != "comment")
      throw ParseError("unknown key", child(ptr, k));
}

} // namespace

CostEnv parse_env(const json& j, const std::string& ptr) {
  check_keys(j, ptr, {"owners", "resources", "record"});
  CostEnv env;
  if (!j.contains("owners")) throw ParseError("missing owners", child(ptr, "owners"));
  const json& own = j["owners"];
  std::string op = child(ptr, "owners");
  if (!own.is_object()) throw ParseError("expected an object", op);
  for (auto& [o, f] : own.items()) {
    std::string p = child(op, o);
    if (f.is_string()) {
      if (f.get<std::string>() != "inf") throw ParseError("expected a natural or \"inf\"", p);
      env.owners[o] = Funds::inf();
    } else {
      env.owners[o] = Funds::of(get_nat(f, p));
    }
  }
  if (env.owners.size() < 2) throw ParseError("at least two owners are required", op);
  if (j.contains("resources")) {
    std::string rp = child(ptr, "resources");
    const json& res = j["resources"];
    if (!res.is_object()) throw ParseError("expected an object", rp);
    for (auto& [n, r] : res.items()) {
      std::string p = child(rp, n);
      check_keys(r, p, {"use", "provide", "rec", "dynamic"});
      if (!r.contains("use")) throw ParseError("missing use", child(p, "use"));
      if (!r.contains("provide")) throw ParseError("missing provide", child(p, "provide"));
      ResType t{get_nat(r["use"], child(p, "use")), get_nat(r["provide"], child(p, "provide"))};
      RecPolicy pol;
      if (r.contains("rec")) {
        const json& rc = r["rec"];
        std::string pp = child(p, "rec");
        if (rc.is_string()) {
          if (rc.get<std::string>() != "standard") throw ParseError("expected \"standard\"", pp);
        } else {
          check_keys(rc, pp, {"u", "p"});
          if (!rc.contains("u") || !rc.contains("p")) throw ParseError("expected {u, p}", pp);
          pol = RecPolicy::custom(get_int(rc["u"], child(pp, "u")), get_int(rc["p"], child(pp, "p")));
        }
      }
      if (n.empty()) throw ParseError("empty resource name", p);
      env.declare(Name::parse(n), t, pol);
      if (r.contains("dynamic")) {
        if (!r["dynamic"].is_boolean()) throw ParseError("expected a boolean", child(p, "dynamic"));
        env.resources[Name::parse(n)].dynamic = r["dynamic"].get<bool>();
      }
    }
  }
  if (j.contains("record")) env.record = get_int(j["record"], child(ptr, "record"));
  return env;
}

CostEnv parse_env_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  return parse_env(j);
}

json env_to_json(const CostEnv& env) {
  json j;
  j["owners"] = json::object();
  for (auto& [o, f] : env.owners) {
    if (f.infinite)
      j["owners"][o] = "inf";
    else
      j["owners"][o] = f.amount;
  }
  j["resources"] = json::object();
  for (auto& [n, r] : env.resources) {
    json e;
    e["use"] = r.type.use;
    e["provide"] = r.type.provide;
    if (r.policy.standard)
      e["rec"] = "standard";
    else
      e["rec"] = json{{"u", r.policy.u}, {"p", r.policy.p}};
    if (r.dynamic) e["dynamic"] = true;
    j["resources"][n.str()] = e;
  }
  j["record"] = env.record;
  return j;
}

WitnessFamily parse_witness(const json& j) {
  check_keys(j, "", {"definitions", "envs", "carriers", "inputs", "view", "observers", "entries"});
  WitnessFamily fam;
  Program defs;
  if (j.contains("definitions")) {
    // a single string or an array of lines
    std::string text;
    const json& dj = j["definitions"];
    if (dj.is_array()) {
      for (size_t i = 0; i < dj.size(); ++i) text += get_str(dj[i], "/definitions/" + std::to_string(i)) + "\n";
    } else {
      text = get_str(dj, "/definitions");
    }
    try {
      defs = parse_program(text);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), "/definitions");
    }
  }
  if (j.contains("envs")) {
    if (!j["envs"].is_object()) throw ParseError("expected an object", "/envs");
    for (auto& [k, e] : j["envs"].items()) fam.envs[k] = parse_env(e, child("/envs", k));
  }
  if (j.contains("carriers")) {
    if (!j["carriers"].is_object()) throw ParseError("expected an object", "/carriers");
    for (auto& [k, vals] : j["carriers"].items()) {
      std::string p = child("/carriers", k);
      if (!vals.is_array()) throw ParseError("expected an array", p);
      std::vector<Value> vs;
      for (size_t i = 0; i < vals.size(); ++i) {
        std::string vp = p + "/" + std::to_string(i);
        try {
          vs.push_back(parse_value(get_str(vals[i], vp)));
        } catch (const ParseError& e) {
          throw ParseError(e.what(), vp);
        }
      }
      fam.carriers[k] = vs;
    }
  }
  auto values_of = [&](const json& spec, const std::string& p) {
    std::vector<Value> out;
    std::vector<json> items;
    if (spec.is_array())
      items.assign(spec.begin(), spec.end());
    else
      items.push_back(spec);
    for (size_t i = 0; i < items.size(); ++i) {
      std::string ip = spec.is_array() ? p + "/" + std::to_string(i) : p;
      const std::string& s = get_str(items[i], ip);
      auto c = fam.carriers.find(s);
      if (c != fam.carriers.end()) {
        out.insert(out.end(), c->second.begin(), c->second.end());
      } else {
        try {
          out.push_back(parse_value(s));
        } catch (const ParseError& e) {
          throw ParseError(e.what(), ip);
        }
      }
    }
    return out;
  };
  fam.inputs.env_names = false;
  fam.inputs.fresh_inputs = false;
  fam.inputs.fresh_from_env = false;
  if (j.contains("inputs")) {
    const json& in = j["inputs"];
    check_keys(in, "/inputs", {"values", "env_names", "fresh_types"});
    if (in.contains("values")) fam.inputs.values = values_of(in["values"], "/inputs/values");
    if (in.contains("env_names")) {
      if (!in["env_names"].is_boolean()) throw ParseError("expected a boolean", "/inputs/env_names");
      fam.inputs.env_names = in["env_names"].get<bool>();
    }
    if (in.contains("fresh_types")) {
      const json& ft = in["fresh_types"];
      if (!ft.is_array()) throw ParseError("expected an array", "/inputs/fresh_types");
      for (size_t i = 0; i < ft.size(); ++i) {
        std::string p = "/inputs/fresh_types/" + std::to_string(i);
        if (!ft[i].is_array() || ft[i].size() != 2) throw ParseError("expected [use, provide]", p);
        fam.inputs.fresh_types.push_back(ResType{get_nat(ft[i][0], p + "/0"), get_nat(ft[i][1], p + "/1")});
      }
      fam.inputs.fresh_inputs = !fam.inputs.fresh_types.empty();
    }
  } else {
    for (auto& [_, vs] : fam.carriers) fam.inputs.values.insert(fam.inputs.values.end(), vs.begin(), vs.end());
  }
  if (j.contains("view")) {
    const std::string& v = get_str(j["view"], "/view");
    if (v == "concrete")
      fam.view = ViewKind::Concrete;
    else if (v == "abstract")
      fam.view = ViewKind::Abstract;
    else if (v == "tau")
      fam.view = ViewKind::TauOnly;
    else
      throw ParseError("expected concrete, abstract or tau", "/view");
  }
  if (j.contains("observers")) {
    const json& ob = j["observers"];
    if (!ob.is_array()) throw ParseError("expected an array", "/observers");
    for (size_t i = 0; i < ob.size(); ++i) fam.observers.insert(get_str(ob[i], "/observers/" + std::to_string(i)));
  }
  if (!j.contains("entries") || !j["entries"].is_array()) throw ParseError("expected an array", "/entries");
  const json& es = j["entries"];
  for (size_t i = 0; i < es.size(); ++i) {
    std::string p = "/entries/" + std::to_string(i);
    const json& e = es[i];
    check_keys(e, p, {"name", "left", "right", "min_credit", "env_left", "env_right", "params"});
    WitnessEntry we;
    we.name = e.contains("name") ? get_str(e["name"], child(p, "name")) : "entry" + std::to_string(i);
    if (e.contains("params")) {
      const json& ps = e["params"];
      if (!ps.is_object()) throw ParseError("expected an object", child(p, "params"));
      for (auto& [x, spec] : ps.items()) {
        we.params.push_back(x);
        we.domains.push_back(values_of(spec, child(child(p, "params"), x)));
      }
    }
    for (const char* side : {"left", "right"}) {
      std::string sp = child(p, side);
      if (!e.contains(side)) throw ParseError("missing template", sp);
      System s;
      try {
        s = parse_system(get_str(e[side], sp), &defs, we.params);
      } catch (const ParseError& err) {
        throw ParseError(err.what(), sp);
      }
      (std::string(side) == "left" ? we.left : we.right) = s;
    }
    we.min_credit = e.contains("min_credit") ? static_cast<std::int64_t>(get_nat(e["min_credit"], child(p, "min_credit"))) : 0;
    for (const char* side : {"env_left", "env_right"}) {
      std::string sp = child(p, side);
      if (!e.contains(side)) throw ParseError("missing environment", sp);
      const json& ev = e[side];
      std::string key;
      if (ev.is_string()) {
        key = ev.get<std::string>();
        if (!fam.envs.count(key)) throw ParseError("unknown environment '" + key + "'", sp);
      } else {
        key = "#" + std::to_string(i) + side;
        fam.envs[key] = parse_env(ev, sp);
      }
      (std::string(side) == "env_left" ? we.env_left : we.env_right) = key;
    }
    fam.entries.push_back(std::move(we));
  }
  if (fam.view == ViewKind::Abstract) {
    for (auto& [_, env] : fam.envs)
      for (auto& o : fam.observers)
        if (!env.owners.count(o)) env = env.with_external(o);
  }
  return fam;
}

WitnessFamily parse_witness_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  return parse_witness(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace picost
