#include "picost/equivalence.hpp"

#include <functional>
#include <sstream>

namespace picost {

GameOptions CheckOptions::game() const {
  GameOptions g;
  g.credit_cap = bounds.credit_cap;
  g.weak = WeakLimits{bounds.tau_depth, bounds.state_cap, bounds.weight_cap};
  g.pair_cap = pair_cap;
  g.negative_credit = negative_credit;
  return g;
}

namespace {

std::string render_step(ConfigView& view, const TraceStep& s) {
  std::ostringstream os;
  if (s.label.empty()) {
    os << "at credit " << s.credit_before << ": " << s.note;
  } else {
    os << (s.left_challenges ? "left" : "right") << " challenges " << s.label << " @"
       << s.challenger_weight;
    if (s.note == "no matching response") {
      os << ", no matching response";
    } else {
      os << ", " << (s.left_challenges ? "right" : "left") << " answers @" << s.defender_weight
         << ", credit " << s.credit_before << " -> " << s.credit_after;
      if (!s.note.empty()) os << " (" << s.note << ")";
    }
  }
  os << "\n    left:  " << view.describe(s.left) << "\n    right: " << view.describe(s.right);
  return os.str();
}

Configuration with_observers(Configuration c, const std::set<Owner>& observers) {
  for (auto& o : observers)
    if (!c.env.owners.count(o) && o == kExternal) c.env = c.env.with_external(o);
  return c;
}

} // namespace

CheckResult check_on_view(ConfigView& view, const Configuration& c, const Configuration& d,
                          std::int64_t n0, const CheckOptions& opt) {
  std::size_t s = view.intern(c);
  std::size_t t = view.intern(d);
  GameResult g = solve_game(view, s, t, n0, opt.game());
  CheckResult r;
  r.verdict = g.verdict;
  r.threshold = g.root_threshold;
  r.pairs = g.pairs;
  r.truncated = g.truncated;
  r.cause = g.cause;
  for (auto& p : g.witness)
    r.witness.push_back(std::to_string(p.min_credit) + ": " + view.describe(p.left) + "  ~  " +
                        view.describe(p.right));
  r.steps = g.trace;
  for (auto& st : g.trace) r.trace.push_back(render_step(view, st));
  return r;
}

CheckResult check_amortised(const Configuration& c, const Configuration& d, std::int64_t n0,
                            const InputPolicy& pol, const CheckOptions& opt) {
  ConfigView view(ViewKind::Concrete, pol);
  return check_on_view(view, c, d, n0, opt);
}

CheckResult check_abstract_preorder(const Configuration& c, const Configuration& d, std::int64_t n0,
                                    const std::set<Owner>& observers, const InputPolicy& pol,
                                    const CheckOptions& opt, bool node_condition) {
  ConfigView view(ViewKind::Abstract, pol, observers, node_condition);
  // both sides must offer the same transfer amounts
  std::set<std::uint64_t> q = default_quanta(c.env);
  for (auto k : default_quanta(d.env)) q.insert(k);
  view.quanta = q;
  return check_on_view(view, with_observers(c, observers), with_observers(d, observers), n0, opt);
}

CheckResult check_cost_improving(const Configuration& c, const Configuration& d, std::int64_t n0,
                                 const CheckOptions& opt) {
  ConfigView view(ViewKind::TauOnly, InputPolicy{});
  return check_on_view(view, c, d, n0, opt);
}

// ------------------------------------------------------------- witnesses

namespace {

Thread inst_thread(const Thread& t, const std::string& x, const Value& v) { return substitute(t, x, v); }

} // namespace

System instantiate(const System& s, const std::string& x, const Value& v) {
  System out = s;
  switch (s.kind) {
  case System::Kind::Owned:
    out.thread = inst_thread(s.thread, x, v);
    break;
  case System::Kind::Par:
    out.sub[0] = instantiate(s.sub[0], x, v);
    out.sub[1] = instantiate(s.sub[1], x, v);
    break;
  case System::Kind::New: {
    NameSet vn = free_names(v);
    if (vn.count(s.name)) {
      NameSet avoid = all_names(s.sub[0]);
      avoid.insert(vn.begin(), vn.end());
      Name nn = fresh_name(s.name.base, avoid);
      out.name = nn;
      out.sub[0] = rename_name(s.sub[0], s.name, nn);
    }
    out.sub[0] = instantiate(out.sub[0], x, v);
    break;
  }
  case System::Kind::Nil:
    break;
  }
  return out;
}

namespace {

std::string match_key(const Configuration& c) {
  Configuration n = normalize(c);
  n.sys = beta_unfold_normalize(n.sys, n.env.domain());
  n = normalize(n);
  n.env.record = 0;
  return n.key();
}

Configuration beta_rep(const Configuration& c) {
  Configuration n = normalize(c);
  n.sys = beta_unfold_normalize(n.sys, n.env.domain());
  return normalize(n);
}

struct Instance {
  std::string entry;
  std::string binding;
  Configuration left, right;
  std::int64_t credit;
};

} // namespace

WitnessReport verify_witness(const WitnessFamily& fam, const CheckOptions& opt) {
  WitnessReport rep;
  std::vector<Instance> insts;
  std::map<std::pair<std::string, std::string>, std::int64_t> family;

  for (auto& e : fam.entries) {
    EntryReport er;
    er.name = e.name;
    std::vector<size_t> pick(e.params.size(), 0);
    std::function<void(size_t)> gen = [&](size_t k) {
      if (k == e.params.size()) {
        System l = e.left, r = e.right;
        std::string binding;
        for (size_t i = 0; i < e.params.size(); ++i) {
          const Value& v = e.domains[i][pick[i]];
          l = instantiate(l, e.params[i], v);
          r = instantiate(r, e.params[i], v);
          binding += (i ? "," : "") + e.params[i] + "=" + to_text(v);
        }
        Configuration lc{fam.envs.at(e.env_left), l};
        Configuration rc{fam.envs.at(e.env_right), r};
        insts.push_back(Instance{e.name, binding, lc, rc, e.min_credit});
        auto key = std::make_pair(match_key(lc), match_key(rc));
        auto it = family.find(key);
        if (it == family.end() || it->second > e.min_credit) family[key] = e.min_credit;
        ++er.instances;
        return;
      }
      for (size_t i = 0; i < e.domains[k].size(); ++i) {
        pick[k] = i;
        gen(k + 1);
      }
    };
    gen(0);
    rep.entries.push_back(er);
  }

  ConfigView view(fam.view, fam.inputs, fam.observers, true);
  std::set<std::uint64_t> q{0};
  for (auto& [_, env] : fam.envs)
    for (auto k : default_quanta(env)) q.insert(k);
  view.quanta = q;
  GameOptions g = opt.game();
  WeakCache weak(view, g.weak);
  std::map<std::size_t, std::string> keys;
  auto key_of = [&](std::size_t s) -> const std::string& {
    auto it = keys.find(s);
    if (it != keys.end()) return it->second;
    return keys.emplace(s, match_key(view.state(s))).first->second;
  };
  auto admits = [&](std::size_t l, std::size_t r, std::int64_t credit) {
    if (credit < 0) return false;
    if (key_of(l) == key_of(r)) return true; // up to identity
    auto it = family.find({key_of(l), key_of(r)});
    return it != family.end() && credit >= it->second;
  };

  for (auto& in : insts) {
    EntryReport* er = nullptr;
    for (auto& x : rep.entries)
      if (x.name == in.entry) er = &x;
    if (!er->ok) continue;
    // challenges are posed from the beta-normal representative; the raw
    // template only has beta-moves back into its own class
    std::size_t l = view.intern(beta_rep(in.left));
    std::size_t r = view.intern(beta_rep(in.right));
    std::string where = in.binding.empty() ? "" : " [" + in.binding + "]";
    auto fail = [&](const std::string& msg) {
      er->ok = false;
      er->failure = msg + where;
      rep.ok = false;
    };
    if (!view.node_ok(l, r)) {
      fail("observer funds differ");
      continue;
    }
    std::vector<Step> ls = view.steps(l);
    const WeakSet& wr = weak.weak(r);
    if (wr.truncated) rep.truncated = true;
    for (auto& e : ls) {
      bool ok = false;
      auto f = wr.by_label.find(e.label);
      if (f != wr.by_label.end())
        for (auto k : f->second) {
          const WeakStep& m = wr.moves[k];
          if (admits(e.to, m.to, in.credit + e.weight - m.min_weight)) ok = true;
        }
      if (!ok) {
        fail("left challenge " + e.label + " @" + std::to_string(e.weight) + " to " + view.describe(e.to) +
             " has no answer in the family");
        break;
      }
    }
    if (!er->ok) continue;
    std::vector<Step> rs = view.steps(r);
    const WeakSet& wl = weak.weak(l);
    if (wl.truncated) rep.truncated = true;
    for (auto& e : rs) {
      bool ok = false;
      auto f = wl.by_label.find(e.label);
      if (f != wl.by_label.end())
        for (auto k : f->second) {
          const WeakStep& m = wl.moves[k];
          if (admits(m.to, e.to, in.credit + m.max_weight - e.weight)) ok = true;
        }
      if (!ok) {
        fail("right challenge " + e.label + " @" + std::to_string(e.weight) + " to " + view.describe(e.to) +
             " has no answer in the family");
        break;
      }
    }
  }
  return rep;
}

} // namespace picost
