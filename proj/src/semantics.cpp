#include "picost/semantics.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace picost {

// ---------------------------------------------------------------- labels

NameSet Label::names() const {
  NameSet out;
  if (kind == Kind::Tau || kind == Kind::Fund) return out;
  out.insert(chan);
  for (auto& [b, _] : bound) out.insert(b);
  for (auto& v : payload) {
    NameSet fn = free_names(v);
    out.insert(fn.begin(), fn.end());
  }
  return out;
}

std::string Label::str() const {
  switch (kind) {
  case Kind::Tau:
    return "tau";
  case Kind::Fund:
    return "fund(" + user + "," + std::to_string(amount) + "," + provider + ")";
  default:
    break;
  }
  std::string s;
  if (!user.empty()) s += "[" + user + "]";
  if (!bound.empty()) {
    s += "(new ";
    for (size_t i = 0; i < bound.size(); ++i) {
      if (i) s += ",";
      s += bound[i].first.str();
      if (!(abstract && kind == Kind::Out)) s += ":" + bound[i].second.str();
    }
    s += ")";
  }
  s += chan.str() + (kind == Kind::In ? "?" : "!");
  if (!payload.empty()) {
    s += "(";
    for (size_t i = 0; i < payload.size(); ++i) s += (i ? "," : "") + to_text(payload[i]);
    s += ")";
  }
  if (!provider.empty()) s += "[" + provider + "]";
  return s;
}

// ------------------------------------------------------------ configurations

Configuration normalize(const Configuration& c) {
  Configuration out;
  out.env = c.env.collected(free_names(c.sys));
  out.sys = struct_canonical(c.sys, out.env.domain());
  return out;
}

Configuration make_config(const CostEnv& env, const System& sys) {
  return normalize(Configuration{env, sys});
}

namespace {

void sort_unique(std::vector<Transition>& ts) {
  std::vector<std::string> keys;
  keys.reserve(ts.size());
  for (auto& t : ts)
    keys.push_back(t.label.str() + "\x01" + t.info + "\x01" + std::to_string(t.weight) + "\x01" + t.target.key());
  std::vector<std::size_t> order(ts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<Transition> out;
  out.reserve(ts.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    if (i == 0 || keys[order[i]] != keys[order[i - 1]]) out.push_back(std::move(ts[order[i]]));
  ts = std::move(out);
}

} // namespace

// ---------------------------------------------------------------- reductions

std::vector<Transition> reductions(const Configuration& c0) {
  Configuration c = normalize(c0);
  Flat f = flatten(c.sys);
  std::map<Name, ResType> bound(f.bound.begin(), f.bound.end());
  NameSet occupied = free_names(c.sys);
  for (auto& [b, _] : f.bound) occupied.insert(b);
  NameSet dom = c.env.domain();
  occupied.insert(dom.begin(), dom.end());

  std::vector<Transition> out;
  auto emit = [&](const Flat& g, const CostEnv& env, std::string info) {
    Transition t;
    t.label = Label::tau();
    t.weight = env.record - c.env.record;
    t.target = normalize(Configuration{env, unflatten(g)});
    t.info = std::move(info);
    out.push_back(std::move(t));
  };

  for (size_t i = 0; i < f.comps.size(); ++i) {
    const Component& ci = f.comps[i];
    const Thread& t = ci.thread;
    switch (t.kind) {
    case Thread::Kind::Par: {
      Flat g = f;
      g.comps[i].thread = t.sub[0];
      g.comps.push_back({ci.owner, t.sub[1]});
      emit(g, c.env, "split");
      break;
    }
    case Thread::Kind::New: {
      Flat g = f;
      Name n = fresh_name(t.name.base, occupied);
      g.comps[i].thread = rename_name(t.sub[0], t.name, n);
      g.bound.push_back({n, t.type});
      emit(g, c.env, "export");
      break;
    }
    case Thread::Kind::Match:
      if (t.chan.closed() && t.rhs.closed()) {
        Flat g = f;
        bool eq = t.chan == t.rhs;
        g.comps[i].thread = eq ? t.sub[0] : t.sub[1];
        emit(g, c.env, eq ? "match" : "mismatch");
      }
      break;
    case Thread::Kind::Rec: {
      Flat g = f;
      g.comps[i].thread = substitute_recvar(t.sub[0], t.var, t);
      emit(g, c.env, "unwind");
      break;
    }
    case Thread::Kind::Output: {
      if (!t.chan.is_name()) break;
      bool closed = std::all_of(t.args.begin(), t.args.end(), [](const Value& v) { return v.closed(); });
      if (!closed) break;
      const Name& a = t.chan.name;
      CostEnv ce = c.env;
      auto bit = bound.find(a);
      if (bit != bound.end()) {
        ce = ce.registered(a, bit->second);
      } else if (!ce.has(a)) {
        break;
      }
      for (size_t j = 0; j < f.comps.size(); ++j) {
        if (j == i) continue;
        const Thread& r = f.comps[j].thread;
        if (r.kind != Thread::Kind::Input || !r.chan.is_name() || r.chan.name != a) continue;
        if (r.params.size() != t.args.size()) continue;
        auto d = ce.charge(ci.owner, a, f.comps[j].owner);
        if (!d) continue;
        CostEnv env = bit != bound.end() ? d->without(a) : *d;
        Flat g = f;
        g.comps[i].thread = t.sub[0];
        g.comps[j].thread = substitute_many(r.sub[0], r.params, t.args);
        emit(g, env, "comm " + ci.owner + " " + a.str() + " " + f.comps[j].owner);
      }
      break;
    }
    default:
      break;
    }
  }
  sort_unique(out);
  return out;
}

// ------------------------------------------------------- action semantics

namespace {

struct Act {
  Label label;
  CostEnv env;
  System sys;
};

struct Ctx {
  const InputPolicy* pol = nullptr;
  NameSet top_free; // binders clashing with these are renamed
  NameSet top_all;  // fresh inputs avoid these
  const Label* target = nullptr;
};

bool names_known(const Value& v, const CostEnv& g) {
  for (auto& n : free_names(v))
    if (!g.has(n)) return false;
  return true;
}

struct Option {
  bool fresh = false;
  Value value;
  ResType type;
};

std::vector<Option> input_options(const CostEnv& g, const InputPolicy& pol) {
  std::set<Value> known;
  for (auto& v : pol.values)
    if (names_known(v, g)) known.insert(v);
  if (pol.env_names)
    for (auto& [n, _] : g.resources) known.insert(Value::of_name(n));
  std::vector<Option> out;
  for (auto& v : known) out.push_back(Option{false, v, {}});
  if (pol.fresh_inputs) {
    std::set<ResType> palette(pol.fresh_types.begin(), pol.fresh_types.end());
    if (pol.fresh_from_env) {
      palette.insert(ResType{0, 0});
      for (auto& [_, r] : g.resources) palette.insert(r.type);
    }
    for (auto& t : palette) out.push_back(Option{true, {}, t});
  }
  return out;
}

std::vector<Act> acts(const CostEnv& g, const System& m, const Ctx& cx);

void thread_acts(const CostEnv& g, const Owner& o, const Thread& t, const Ctx& cx,
                 std::vector<Act>& out) {
  auto tau = [&](System s) { out.push_back(Act{Label::tau(), g, std::move(s)}); };
  switch (t.kind) {
  case Thread::Kind::Input: {
    if (!t.chan.is_name() || !g.has(t.chan.name)) return;
    const Name& a = t.chan.name;
    if (cx.target) {
      const Label& L = *cx.target;
      if (L.chan != a || L.provider != o || L.payload.size() != t.params.size()) return;
      auto d = g.charge(L.user, a, o);
      if (!d) return;
      CostEnv env = *d;
      for (auto& [b, ty] : L.bound) {
        if (env.has(b)) return;
        env = env.registered(b, ty);
      }
      Label lab = L;
      lab.kind = Label::Kind::In;
      out.push_back(Act{lab, env, System::owned(o, substitute_many(t.sub[0], t.params, L.payload))});
      return;
    }
    std::vector<Option> opts = input_options(g, *cx.pol);
    NameSet avoid = cx.top_all;
    for (auto& [n, _] : g.resources) avoid.insert(n);
    for (auto& [u, _] : g.owners) {
      auto d = g.charge(u, a, o);
      if (!d) continue;
      std::vector<size_t> pick(t.params.size(), 0);
      std::function<void(size_t)> rec = [&](size_t k) {
        if (k == t.params.size()) {
          Label lab;
          lab.kind = Label::Kind::In;
          lab.user = u;
          lab.provider = o;
          lab.chan = a;
          CostEnv env = *d;
          NameSet used = avoid;
          for (size_t i = 0; i < pick.size(); ++i) {
            const Option& op = opts[pick[i]];
            if (op.fresh) {
              Name b = fresh_name("f", used);
              used.insert(b);
              lab.bound.push_back({b, op.type});
              lab.payload.push_back(Value::of_name(b));
              env = env.registered(b, op.type);
            } else {
              lab.payload.push_back(op.value);
            }
          }
          out.push_back(Act{lab, env, System::owned(o, substitute_many(t.sub[0], t.params, lab.payload))});
          return;
        }
        for (size_t i = 0; i < opts.size(); ++i) {
          pick[k] = i;
          rec(k + 1);
        }
      };
      rec(0);
    }
    return;
  }
  case Thread::Kind::Output: {
    if (cx.target) return;
    if (!t.chan.is_name() || !g.has(t.chan.name)) return;
    for (auto& v : t.args)
      if (!v.closed()) return;
    for (auto& [p, _] : g.owners) {
      auto d = g.charge(o, t.chan.name, p);
      if (!d) continue;
      Label lab;
      lab.kind = Label::Kind::Out;
      lab.user = o;
      lab.provider = p;
      lab.chan = t.chan.name;
      lab.payload = t.args;
      out.push_back(Act{lab, *d, System::owned(o, t.sub[0])});
    }
    return;
  }
  default:
    break;
  }
  if (cx.target) return;
  switch (t.kind) {
  case Thread::Kind::Par:
    tau(System::par(System::owned(o, t.sub[0]), System::owned(o, t.sub[1])));
    return;
  case Thread::Kind::New:
    tau(System::restrict(t.name, t.type, System::owned(o, t.sub[0])));
    return;
  case Thread::Kind::Match:
    if (t.chan.closed() && t.rhs.closed()) tau(System::owned(o, t.chan == t.rhs ? t.sub[0] : t.sub[1]));
    return;
  case Thread::Kind::Rec:
    tau(System::owned(o, substitute_recvar(t.sub[0], t.var, t)));
    return;
  default:
    return;
  }
}

std::vector<Act> acts(const CostEnv& g, const System& m, const Ctx& cx) {
  std::vector<Act> out;
  switch (m.kind) {
  case System::Kind::Nil:
    break;
  case System::Kind::Owned:
    thread_acts(g, m.owner, m.thread, cx, out);
    break;
  case System::Kind::Par: {
    const System& l = m.sub[0];
    const System& r = m.sub[1];
    std::vector<Act> la = acts(g, l, cx);
    std::vector<Act> ra = acts(g, r, cx);
    for (auto& a : la) out.push_back(Act{a.label, a.env, System::par(a.sys, r)});
    for (auto& a : ra) out.push_back(Act{a.label, a.env, System::par(l, a.sys)});
    if (cx.target) break;
    auto comm = [&](const std::vector<Act>& outs, const System& other, bool out_left) {
      for (auto& oa : outs) {
        if (oa.label.kind != Label::Kind::Out) continue;
        Ctx tc = cx;
        tc.target = &oa.label;
        for (auto& ia : acts(g, other, tc)) {
          CostEnv env = oa.env;
          for (auto& [b, _] : oa.label.bound) env = env.without(b);
          System body = out_left ? System::par(oa.sys, ia.sys) : System::par(ia.sys, oa.sys);
          for (size_t k = oa.label.bound.size(); k-- > 0;)
            body = System::restrict(oa.label.bound[k].first, oa.label.bound[k].second, body);
          out.push_back(Act{Label::tau(), env, body});
        }
      }
    };
    comm(la, r, true);
    comm(ra, l, false);
    break;
  }
  case System::Kind::New: {
    Name b = m.name;
    System body = m.sub[0];
    NameSet clash = cx.top_free;
    for (auto& [n, _] : g.resources) clash.insert(n);
    if (cx.target)
      for (auto& [n, _] : cx.target->bound) clash.insert(n);
    if (clash.count(b)) {
      NameSet avoid = clash;
      all_names(body, avoid);
      avoid.insert(cx.top_all.begin(), cx.top_all.end());
      Name nb = fresh_name(b.base, avoid);
      body = rename_name(body, b, nb);
      b = nb;
    }
    CostEnv gb = g.registered(b, m.type);
    for (auto& a : acts(gb, body, cx)) {
      NameSet ln = a.label.names();
      if (!ln.count(b)) {
        out.push_back(Act{a.label, a.env.without(b), System::restrict(b, m.type, a.sys)});
        continue;
      }
      if (cx.target || a.label.kind != Label::Kind::Out || a.label.chan == b) continue;
      bool bound_already = false;
      for (auto& [x, _] : a.label.bound) bound_already = bound_already || x == b;
      if (bound_already) continue;
      Act opened = a;
      opened.label.bound.insert(opened.label.bound.begin(), {b, m.type});
      out.push_back(std::move(opened));
    }
    break;
  }
  }
  return out;
}

} // namespace

std::vector<Transition> concrete_actions(const Configuration& c0, const InputPolicy& pol) {
  Configuration c = normalize(c0);
  Ctx cx;
  cx.pol = &pol;
  cx.top_free = free_names(c.sys);
  cx.top_all = all_names(c.sys);
  NameSet dom = c.env.domain();
  cx.top_all.insert(dom.begin(), dom.end());

  std::vector<Transition> out;
  for (auto& a : acts(c.env, c.sys, cx)) {
    Transition t;
    t.label = a.label;
    CostEnv env = a.env;
    System sys = a.sys;
    if (!a.label.bound.empty()) {
      // canonical names for extruded (e) and fresh (f) resources
      std::string base = a.label.kind == Label::Kind::Out ? "e" : "f";
      NameSet used = cx.top_all;
      std::vector<std::pair<Name, Name>> plan;
      for (size_t k = 0; k < a.label.bound.size(); ++k) {
        Name nb = fresh_name(base, used);
        used.insert(nb);
        plan.push_back({a.label.bound[k].first, nb});
      }
      std::vector<Name> mids;
      for (size_t k = 0; k < plan.size(); ++k) {
        Name mid("\x01" "x", static_cast<unsigned>(k));
        mids.push_back(mid);
        sys = rename_name(sys, plan[k].first, mid);
        for (auto& v : t.label.payload) v = rename_name(v, plan[k].first, mid);
        auto node = env.resources.extract(plan[k].first);
        if (node) {
          node.key() = mid;
          env.resources.insert(std::move(node));
        }
      }
      for (size_t k = 0; k < plan.size(); ++k) {
        sys = rename_name(sys, mids[k], plan[k].second);
        for (auto& v : t.label.payload) v = rename_name(v, mids[k], plan[k].second);
        auto node = env.resources.extract(mids[k]);
        if (node) {
          node.key() = plan[k].second;
          env.resources.insert(std::move(node));
        }
        t.label.bound[k].first = plan[k].second;
      }
    }
    t.weight = env.record - c.env.record;
    t.target = normalize(Configuration{env, sys});
    t.info = t.label.str();
    out.push_back(std::move(t));
  }
  sort_unique(out);
  return out;
}

std::set<std::uint64_t> default_quanta(const CostEnv& env) {
  std::set<std::uint64_t> q{0};
  for (auto& [_, r] : env.resources) q.insert(r.type.use);
  return q;
}

std::vector<Transition> abstract_actions(const Configuration& c, const std::set<Owner>& observers,
                                         const std::set<std::uint64_t>& quanta,
                                         const InputPolicy& pol) {
  Configuration cn = normalize(c);
  std::vector<Transition> out;
  for (auto& t : concrete_actions(cn, pol)) {
    Transition a = t;
    a.label.abstract = true;
    switch (t.label.kind) {
    case Label::Kind::Tau:
      a.label.abstract = false;
      break;
    case Label::Kind::Out:
      if (!observers.count(t.label.provider)) continue;
      a.label.user.clear();
      for (auto& [_, ty] : a.label.bound) ty = ResType{};
      break;
    case Label::Kind::In:
      if (!observers.count(t.label.user)) continue;
      a.label.provider.clear();
      break;
    default:
      continue;
    }
    a.info = a.label.str();
    out.push_back(std::move(a));
  }
  for (auto& u : observers) {
    if (!cn.env.owners.count(u)) continue;
    for (auto& p : observers) {
      if (!cn.env.owners.count(p)) continue;
      for (auto k : quanta) {
        auto d = cn.env.transfer(u, k, p);
        if (!d) continue;
        Transition f;
        f.label.kind = Label::Kind::Fund;
        f.label.abstract = true;
        f.label.user = u;
        f.label.provider = p;
        f.label.amount = k;
        f.weight = 0;
        f.target = Configuration{*d, cn.sys};
        f.info = f.label.str();
        out.push_back(std::move(f));
      }
    }
  }
  sort_unique(out);
  return out;
}

// -------------------------------------------------------------- the view

ConfigView::ConfigView(ViewKind kind, InputPolicy pol, std::set<Owner> observers,
                       bool node_condition)
    : kind_(kind), pol_(std::move(pol)), observers_(std::move(observers)),
      node_condition_(node_condition) {}

std::size_t ConfigView::intern(const Configuration& c) {
  Configuration n = normalize(c);
  n.env.record = 0;
  std::string k = n.key();
  auto it = ids_.find(k);
  if (it != ids_.end()) return it->second;
  std::size_t id = states_.size();
  states_.push_back(std::move(n));
  trans_.emplace_back();
  steps_.emplace_back();
  ids_.emplace(std::move(k), id);
  return id;
}

const std::vector<Transition>& ConfigView::transitions(std::size_t s) {
  if (trans_.at(s)) return *trans_[s];
  Configuration c = states_[s];
  std::vector<Transition> ts;
  switch (kind_) {
  case ViewKind::Concrete:
    ts = concrete_actions(c, pol_);
    break;
  case ViewKind::Abstract:
    ts = abstract_actions(c, observers_, quanta ? *quanta : default_quanta(c.env), pol_);
    break;
  case ViewKind::TauOnly:
    ts = reductions(c);
    break;
  }
  trans_[s] = std::move(ts);
  return *trans_[s];
}

const std::vector<Step>& ConfigView::steps(std::size_t s) {
  if (steps_.at(s)) return *steps_[s];
  std::vector<Transition> ts = transitions(s);
  std::vector<Step> st;
  for (auto& t : ts) st.push_back(Step{t.label.str(), t.label.is_tau(), t.weight, intern(t.target)});
  steps_[s] = std::move(st);
  return *steps_[s];
}

bool ConfigView::node_ok(std::size_t l, std::size_t r) {
  if (kind_ != ViewKind::Abstract || !node_condition_) return true;
  const CostEnv& a = states_.at(l).env;
  const CostEnv& b = states_.at(r).env;
  for (auto& o : observers_) {
    auto x = a.owners.find(o);
    auto y = b.owners.find(o);
    if (x == a.owners.end() || y == b.owners.end() || x->second != y->second) return false;
  }
  return true;
}

std::string ConfigView::describe(std::size_t s) {
  const Configuration& c = states_.at(s);
  std::string f;
  for (auto& [o, v] : c.env.owners) f += (f.empty() ? "" : ",") + o + "=" + v.str();
  return "{" + f + "} |> " + to_text(c.sys);
}

// ---------------------------------------------------------- weak closure

WeakResult weak_closure(const Configuration& c, const InputPolicy& pol, const Bounds& b) {
  ConfigView view(ViewKind::Concrete, pol);
  std::size_t s = view.intern(c);
  WeakCache cache(view, WeakLimits{b.tau_depth, b.state_cap, b.weight_cap});
  const WeakSet& ws = cache.weak(s);
  // recover the label objects from the strong steps
  std::map<std::string, Label> labels;
  labels["tau"] = Label::tau();
  for (std::size_t i = 0; i < view.size(); ++i) {
    if (!view.steps(i).empty() || true) {
      for (auto& t : view.transitions(i)) labels.emplace(t.label.str(), t.label);
    }
    if (i > b.state_cap) break;
  }
  WeakResult out;
  out.truncated = ws.truncated;
  for (auto& m : ws.moves) {
    WeakMove w;
    w.label = labels.count(m.label) ? labels[m.label] : Label::tau();
    w.min_weight = m.min_weight;
    w.max_weight = m.max_weight;
    w.target = view.state(m.to);
    w.target.env.record = c.env.record + m.min_weight;
    out.moves.push_back(std::move(w));
  }
  return out;
}

// ----------------------------------------------------------------- barbs

BarbResult barbs(const Configuration& c, unsigned depth) {
  BarbResult res;
  std::set<std::string> seen;
  std::vector<Configuration> frontier{normalize(c)};
  seen.insert(frontier[0].key(false));
  for (unsigned d = 0; d <= depth && !frontier.empty(); ++d) {
    std::vector<Configuration> next;
    for (auto& s : frontier) {
      Flat f = flatten(s.sys);
      NameSet bound;
      for (auto& [n, _] : f.bound) bound.insert(n);
      for (auto& comp : f.comps) {
        const Thread& t = comp.thread;
        if (t.kind != Thread::Kind::Input && t.kind != Thread::Kind::Output) continue;
        if (!t.chan.is_name() || bound.count(t.chan.name) || !s.env.has(t.chan.name)) continue;
        bool payable = false;
        for (auto& [o, _] : s.env.owners) {
          auto ch = t.kind == Thread::Kind::Output ? s.env.charge(comp.owner, t.chan.name, o)
                                                   : s.env.charge(o, t.chan.name, comp.owner);
          if (ch) payable = true;
        }
        if (payable) res.barbs.insert(Barb{t.chan.name, t.kind == Thread::Kind::Output ? '!' : '?'});
      }
      auto rs = reductions(s);
      if (d == depth) {
        if (!rs.empty()) res.truncated = true;
        continue;
      }
      for (auto& r : rs)
        if (seen.insert(r.target.key(false)).second) next.push_back(r.target);
    }
    frontier = std::move(next);
  }
  return res;
}

// ------------------------------------------------------------------- runs

namespace {

Name comm_channel(const std::string& info) {
  std::istringstream in(info);
  std::string w, o, a;
  in >> w >> o >> a;
  return Name::parse(a);
}

} // namespace

RunResult run(const Configuration& c, const RunOptions& opt) {
  RunResult res;
  res.start = normalize(c);
  const std::string home = to_text(beta_unfold_normalize(res.start.sys, res.start.env.domain()));
  std::set<std::string> visited;
  std::size_t budget = 200000;
  std::vector<RunStep> path;

  auto satisfied = [&](const std::set<Name>& fired) {
    for (auto& r : opt.require)
      if (!fired.count(r)) return false;
    return true;
  };

  std::function<bool(const Configuration&, std::set<Name>, bool)> dfs =
      [&](const Configuration& cur, std::set<Name> fired, bool any_comm) -> bool {
    if (budget-- == 0) return false;
    if (path.size() >= opt.max_steps) return satisfied(fired);
    std::vector<Transition> rs = reductions(cur);
    std::vector<Transition> allowed;
    for (auto& t : rs) {
      if (t.info.rfind("comm", 0) == 0 && opt.avoid.count(comm_channel(t.info))) continue;
      allowed.push_back(t);
    }
    if (allowed.empty()) {
      if (!rs.empty()) return false; // only avoided comms left: not a real end
      res.quiescent = true;
      return satisfied(fired);
    }
    for (auto& t : allowed) {
      std::set<Name> f2 = fired;
      bool comm = t.info.rfind("comm", 0) == 0;
      if (comm) f2.insert(comm_channel(t.info));
      path.push_back(RunStep{t.info, t.weight, t.target});
      if (opt.stop_on_cycle && (any_comm || comm) &&
          to_text(beta_unfold_normalize(t.target.sys, t.target.env.domain())) == home) {
        if (satisfied(f2)) {
          res.cycled = true;
          return true;
        }
        path.pop_back();
        continue;
      }
      std::string k = t.target.key(false);
      if (visited.insert(k).second) {
        if (dfs(t.target, f2, any_comm || comm)) return true;
      }
      path.pop_back();
      res.quiescent = false;
    }
    return false;
  };
  res.found = dfs(res.start, {}, false);
  if (!res.found) {
    res.quiescent = false;
    res.cycled = false;
  }
  res.steps = path;
  return res;
}

// ----------------------------------------------------------- exploration

Lts explore(const Configuration& c, const InputPolicy& pol, std::size_t max_states) {
  Lts lts;
  std::map<std::string, std::size_t> ids;
  Configuration s0 = normalize(c);
  std::string k0 = s0.key(false);
  ids[k0] = 0;
  lts.states.push_back(s0);
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    Configuration cur = lts.states[i];
    for (auto& t : concrete_actions(cur, pol)) {
      std::string k = t.target.key(false);
      auto it = ids.find(k);
      std::size_t to;
      if (it != ids.end()) {
        to = it->second;
      } else {
        if (lts.states.size() >= max_states) {
          lts.truncated = true;
          continue;
        }
        to = lts.states.size();
        ids[k] = to;
        lts.states.push_back(t.target);
      }
      lts.edges.push_back(Lts::Edge{i, t.label, t.weight, to});
    }
  }
  return lts;
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 8);
}

static std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string to_dot(const Lts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    const Configuration& c = lts.states[i];
    os << "  s" << i << " [label=\"" << digest(c.key(false)) << " rec=" << c.env.record << "\"];\n";
  }
  for (auto& e : lts.edges)
    os << "  s" << e.from << " -> s" << e.to << " [label=\"" << dot_escape(e.label.str()) << "@"
       << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

} // namespace picost
