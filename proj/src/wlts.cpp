#include "picost/wlts.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace picost {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t clamp(std::int64_t v, std::int64_t cap) { return std::max(-cap, std::min(cap, v)); }

} // namespace

const WeakCache::Closure& WeakCache::tau_closure(std::size_t s) {
  auto it = closures_.find(s);
  if (it != closures_.end()) return it->second;

  Closure c;
  std::map<std::size_t, unsigned> depth;
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue;
  depth[s] = 0;
  order.push_back(s);
  queue.push_back(s);
  std::vector<std::tuple<std::size_t, std::int64_t, std::size_t>> edges;
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    const auto& st = view_.steps(x);
    for (auto& e : st) {
      if (!e.tau) continue;
      if (!depth.count(e.to)) {
        if (depth[x] >= lim_.tau_depth || order.size() >= lim_.state_cap) {
          c.truncated = true;
          continue;
        }
        depth[e.to] = depth[x] + 1;
        order.push_back(e.to);
        queue.push_back(e.to);
      }
      edges.emplace_back(x, e.weight, e.to);
    }
  }

  // Bellman-Ford both ways; nodes still improving after |V| rounds sit
  // downstream of a weighted cycle and saturate.
  auto relax = [&](bool minimise) {
    std::map<std::size_t, std::int64_t> d;
    for (auto x : order) d[x] = minimise ? kInf : -kInf;
    d[s] = 0;
    for (std::size_t round = 0; round < order.size(); ++round) {
      bool changed = false;
      for (auto& [a, w, b] : edges) {
        if (d[a] == kInf || d[a] == -kInf) continue;
        std::int64_t nv = d[a] + w;
        if (minimise ? nv < d[b] : nv > d[b]) {
          d[b] = nv;
          changed = true;
        }
      }
      if (!changed) return d;
    }
    std::set<std::size_t> unbounded;
    for (auto& [a, w, b] : edges) {
      if (d[a] == kInf || d[a] == -kInf) continue;
      std::int64_t nv = d[a] + w;
      if (minimise ? nv < d[b] : nv > d[b]) unbounded.insert(b);
    }
    std::deque<std::size_t> q(unbounded.begin(), unbounded.end());
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop_front();
      for (auto& [a, w, b] : edges)
        if (a == x && !unbounded.count(b)) {
          unbounded.insert(b);
          q.push_back(b);
        }
    }
    for (auto x : unbounded) d[x] = minimise ? -lim_.weight_cap : lim_.weight_cap;
    return d;
  };
  auto dmin = relax(true);
  auto dmax = relax(false);
  for (auto x : order)
    c.reach[x] = Reach{clamp(dmin[x], lim_.weight_cap), clamp(dmax[x], lim_.weight_cap)};
  return closures_.emplace(s, std::move(c)).first->second;
}

const WeakSet& WeakCache::weak(std::size_t s) {
  auto it = weak_.find(s);
  if (it != weak_.end()) return it->second;

  WeakSet out;
  const Closure& cs = tau_closure(s);
  out.truncated = cs.truncated;
  std::map<std::pair<std::string, std::size_t>, WeakStep> acc;
  auto merge = [&](const std::string& label, bool tau, std::int64_t mn, std::int64_t mx,
                   std::size_t to) {
    mn = clamp(mn, lim_.weight_cap);
    mx = clamp(mx, lim_.weight_cap);
    auto key = std::make_pair(label, to);
    auto f = acc.find(key);
    if (f == acc.end()) {
      acc.emplace(key, WeakStep{label, tau, mn, mx, to});
    } else {
      f->second.min_weight = std::min(f->second.min_weight, mn);
      f->second.max_weight = std::max(f->second.max_weight, mx);
    }
  };
  for (auto& [z, r] : cs.reach) merge("tau", true, r.min_w, r.max_w, z);
  for (auto& [x, rx] : cs.reach) {
    std::vector<Step> st = view_.steps(x);
    for (auto& e : st) {
      if (e.tau) continue;
      const Closure& cy = tau_closure(e.to);
      if (cy.truncated) out.truncated = true;
      for (auto& [z, rz] : cy.reach)
        merge(e.label, false, rx.min_w + e.weight + rz.min_w, rx.max_w + e.weight + rz.max_w, z);
    }
  }
  for (auto& [_, m] : acc) {
    out.by_label[m.label].push_back(out.moves.size());
    out.moves.push_back(m);
  }
  return weak_.emplace(s, std::move(out)).first->second;
}

std::string verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Proven:
    return "Proven";
  case Verdict::RefutedWithinBounds:
    return "RefutedWithinBounds";
  case Verdict::Inconclusive:
    return "Inconclusive";
  }
  return "?";
}

namespace {

struct Resp {
  std::int64_t delta; // w - v
  std::int64_t dw;
  std::size_t succ;
};
struct Chal {
  bool left;
  std::string label;
  std::int64_t cw;
  bool truncated;
  std::vector<Resp> resp;
};
struct Node {
  std::size_t l, r;
  bool explored = false;
  bool ok = true;
  std::vector<Chal> ch;
  std::vector<std::size_t> preds;
};

class Game {
public:
  Game(WltsView& v, const GameOptions& o) : view(v), opt(o), weak(v, o.weak) {
    cap = opt.credit_cap;
    dead = cap + 1;
    floor = opt.negative_credit ? -cap : 0;
  }

  WltsView& view;
  GameOptions opt;
  WeakCache weak;
  std::int64_t cap, dead, floor;
  std::vector<Node> nodes;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  bool truncated = false;

  std::size_t intern(std::size_t l, std::size_t r, std::deque<std::size_t>& q) {
    auto key = std::make_pair(l, r);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t id = nodes.size();
    Node n;
    n.l = l;
    n.r = r;
    nodes.push_back(std::move(n));
    index[key] = id;
    if (nodes.size() <= opt.pair_cap)
      q.push_back(id);
    else
      truncated = true;
    return id;
  }

  void explore(std::size_t root_l, std::size_t root_r) {
    std::deque<std::size_t> q;
    intern(root_l, root_r, q);
    while (!q.empty()) {
      std::size_t id = q.front();
      q.pop_front();
      std::size_t l = nodes[id].l, r = nodes[id].r;
      nodes[id].explored = true;
      nodes[id].ok = view.node_ok(l, r);
      if (!nodes[id].ok) continue;
      // identical states hold at any credit >= 0 (answer each move by itself)
      if (l == r && !opt.negative_credit) continue;
      std::vector<Chal> chs;
      std::vector<Step> ls = view.steps(l);
      std::vector<Step> rs = view.steps(r);
      const WeakSet& wr = weak.weak(r);
      for (auto& e : ls) {
        Chal c{true, e.label, e.weight, wr.truncated, {}};
        auto f = wr.by_label.find(e.label);
        if (f != wr.by_label.end())
          for (auto k : f->second) {
            const WeakStep& m = wr.moves[k];
            c.resp.push_back(Resp{m.min_weight - e.weight, m.min_weight, intern(e.to, m.to, q)});
          }
        chs.push_back(std::move(c));
      }
      const WeakSet& wl = weak.weak(l);
      for (auto& e : rs) {
        Chal c{false, e.label, e.weight, wl.truncated, {}};
        auto f = wl.by_label.find(e.label);
        if (f != wl.by_label.end())
          for (auto k : f->second) {
            const WeakStep& m = wl.moves[k];
            c.resp.push_back(Resp{e.weight - m.max_weight, m.max_weight, intern(m.to, e.to, q)});
          }
        chs.push_back(std::move(c));
      }
      for (auto& c : chs) {
        if (c.truncated) truncated = true;
        for (auto& rp : c.resp) nodes[rp.succ].preds.push_back(id);
      }
      nodes[id].ch = std::move(chs);
    }
  }

  std::int64_t need(std::int64_t th, std::int64_t delta) const {
    if (opt.negative_credit && th <= -cap) return -cap;
    return std::max(th, floor) + delta;
  }

  std::int64_t best_need(const Chal& c, const std::vector<std::int64_t>& th, bool optimistic,
                         const Resp** arg = nullptr) const {
    std::int64_t best = dead;
    if (c.truncated && optimistic) best = floor;
    for (auto& rp : c.resp) {
      std::int64_t t = th[rp.succ];
      if (t >= dead) continue;
      std::int64_t nd = std::max(need(t, rp.delta), floor);
      if (nd < best) {
        best = nd;
        if (arg) *arg = &rp;
      }
    }
    return best;
  }

  std::int64_t eval(std::size_t id, const std::vector<std::int64_t>& th, bool optimistic) const {
    const Node& n = nodes[id];
    if (!n.explored) return optimistic ? floor : dead;
    if (!n.ok) return dead;
    std::int64_t val = floor;
    for (auto& c : n.ch) {
      val = std::max(val, best_need(c, th, optimistic));
      if (val > cap) return dead;
    }
    return val;
  }

  std::vector<std::int64_t> fixpoint(bool optimistic) const {
    std::vector<std::int64_t> th(nodes.size(), floor);
    std::deque<std::size_t> work;
    std::vector<char> queued(nodes.size(), 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) work.push_back(i);
    while (!work.empty()) {
      std::size_t id = work.front();
      work.pop_front();
      queued[id] = 0;
      std::int64_t nv = eval(id, th, optimistic);
      if (nv > th[id]) {
        th[id] = nv;
        for (auto p : nodes[id].preds)
          if (!queued[p]) {
            queued[p] = 1;
            work.push_back(p);
          }
      }
    }
    return th;
  }

  std::vector<TraceStep> trace(std::int64_t n0, const std::vector<std::int64_t>& th) const {
    std::vector<TraceStep> out;
    std::size_t cur = 0;
    std::int64_t credit = n0;
    std::set<std::pair<std::size_t, std::int64_t>> seen;
    for (int guard = 0; guard < 64; ++guard) {
      if (!seen.insert({cur, credit}).second) break;
      const Node& n = nodes[cur];
      if (!n.explored) {
        if (!out.empty()) out.back().note = "arena bound reached";
        break;
      }
      if (!n.ok) {
        TraceStep ts;
        ts.left = n.l;
        ts.right = n.r;
        ts.credit_before = ts.credit_after = credit;
        ts.note = "node condition fails";
        out.push_back(ts);
        break;
      }
      // prefer an unanswerable challenge, then one that runs out of credit,
      // then one whose answers all lead to lost pairs
      const Chal* bad = nullptr;
      int rank = 3;
      for (auto& c : n.ch) {
        std::int64_t b = best_need(c, th, true);
        if (b <= credit) continue;
        int r = c.resp.empty() ? 0 : (b < dead ? 1 : 2);
        if (r < rank) {
          rank = r;
          bad = &c;
        }
      }
      if (!bad) break;
      const Resp* rp = nullptr;
      best_need(*bad, th, true, &rp);
      if (!rp && !bad->resp.empty()) {
        rp = &bad->resp.front();
        for (auto& x : bad->resp)
          if (x.succ != cur) {
            rp = &x;
            break;
          }
      }
      TraceStep ts;
      ts.left_challenges = bad->left;
      ts.label = bad->label;
      ts.challenger_weight = bad->cw;
      ts.credit_before = credit;
      if (!rp) {
        ts.left = n.l;
        ts.right = n.r;
        ts.credit_after = credit;
        ts.note = "no matching response";
        out.push_back(ts);
        break;
      }
      ts.defender_weight = rp->dw;
      ts.credit_after = credit - rp->delta;
      ts.left = nodes[rp->succ].l;
      ts.right = nodes[rp->succ].r;
      if (ts.credit_after < floor) ts.note = "credit exhausted";
      out.push_back(ts);
      if (ts.credit_after < floor) break;
      cur = rp->succ;
      credit = std::min(ts.credit_after, cap);
    }
    return out;
  }
};

} // namespace

GameResult solve_game(WltsView& v, std::size_t s, std::size_t t, std::int64_t n0,
                      const GameOptions& opt) {
  Game g(v, opt);
  g.explore(s, t);
  GameResult res;
  res.pairs = g.nodes.size();
  res.truncated = g.truncated;
  auto pess = g.fixpoint(false);
  res.root_threshold = pess[0];
  if (pess[0] <= n0) {
    res.verdict = Verdict::Proven;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (pess[i] < g.dead) res.witness.push_back({g.nodes[i].l, g.nodes[i].r, pess[i]});
    return res;
  }
  auto opti = g.fixpoint(true);
  if (opti[0] > n0) {
    res.verdict = Verdict::RefutedWithinBounds;
    res.trace = g.trace(n0, opti);
    res.cause = res.trace.empty() ? "root pair eliminated" : res.trace.back().note;
    if (res.cause.empty()) res.cause = "credit requirement exceeds " + std::to_string(n0);
  } else {
    res.verdict = Verdict::Inconclusive;
    res.cause = "exploration bounds hit before the pair was settled";
  }
  return res;
}

bool check_family(WltsView& v, const std::vector<CreditedPair>& fam, const GameOptions& opt,
                  std::string* why) {
  WeakCache weak(v, opt.weak);
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> req;
  for (auto& p : fam) {
    auto key = std::make_pair(p.left, p.right);
    auto it = req.find(key);
    if (it == req.end() || it->second > p.min_credit) req[key] = p.min_credit;
  }
  std::int64_t floor = opt.negative_credit ? -opt.credit_cap : 0;
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  auto admits = [&](std::size_t l, std::size_t r, std::int64_t credit) {
    if (credit < floor) return false;
    if (l == r && credit >= 0) return true; // up to identity
    auto it = req.find({l, r});
    return it != req.end() && credit >= it->second;
  };
  for (auto& [key, n] : req) {
    auto [l, r] = key;
    if (!v.node_ok(l, r)) return fail("node condition at " + v.describe(l) + " / " + v.describe(r));
    std::vector<Step> ls = v.steps(l);
    for (auto& e : ls) {
      const WeakSet& wr = weak.weak(r);
      bool ok = false;
      for (auto& m : wr.moves)
        if (m.label == e.label && admits(e.to, m.to, n + e.weight - m.min_weight)) ok = true;
      if (!ok) return fail("left challenge " + e.label + " from " + v.describe(l) + " unmatched");
    }
    std::vector<Step> rs = v.steps(r);
    for (auto& e : rs) {
      const WeakSet& wl = weak.weak(l);
      bool ok = false;
      for (auto& m : wl.moves)
        if (m.label == e.label && admits(m.to, e.to, n + m.max_weight - e.weight)) ok = true;
      if (!ok) return fail("right challenge " + e.label + " from " + v.describe(r) + " unmatched");
    }
  }
  return true;
}

} // namespace picost
