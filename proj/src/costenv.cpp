#include "picost/costenv.hpp"

namespace picost {

std::string RecPolicy::str() const {
  if (standard) return "standard";
  return "{u:" + std::to_string(u) + ",p:" + std::to_string(p) + "}";
}

const Resource& CostEnv::resource(const Name& a) const {
  auto it = resources.find(a);
  if (it == resources.end()) throw CostError("unknown resource " + a.str());
  return it->second;
}

const Funds& CostEnv::funds(const Owner& o) const {
  auto it = owners.find(o);
  if (it == owners.end()) throw CostError("unknown owner " + o);
  return it->second;
}

NameSet CostEnv::domain() const {
  NameSet out;
  for (auto& [n, _] : resources) out.insert(n);
  return out;
}

void CostEnv::declare(const Name& a, ResType t, RecPolicy pol) {
  resources[a] = Resource{t, pol, false};
}

std::optional<CostEnv> CostEnv::charge(const Owner& user, const Name& a,
                                       const Owner& provider) const {
  const Resource& r = resource(a);
  const Funds& fu = funds(user);
  const Funds& fp = funds(provider);
  if (!fu.covers(r.type.use) || !fp.covers(r.type.provide)) return std::nullopt;
  CostEnv out = *this;
  out.owners[user] = fu.minus(r.type.use);
  Funds& p = out.owners[provider];
  if (r.type.use >= r.type.provide) {
    p = p.plus(r.type.use - r.type.provide);
  } else {
    std::uint64_t loss = r.type.provide - r.type.use;
    // (a) then (b): only fails when u = p is short, which (i) rules out
    if (!p.covers(loss)) return std::nullopt;
    p = p.minus(loss);
  }
  out.record += r.policy.apply(r.type.use, r.type.provide);
  return out;
}

CostEnv CostEnv::registered(const Name& a, ResType t) const {
  if (has(a)) throw CostError("resource " + a.str() + " already registered");
  CostEnv out = *this;
  out.resources[a] = Resource{t, RecPolicy::make_standard(), true};
  return out;
}

std::optional<CostEnv> CostEnv::transfer(const Owner& u, std::uint64_t k, const Owner& p) const {
  const Funds& fu = funds(u);
  funds(p);
  if (!fu.covers(k)) return std::nullopt;
  if (u == p) return *this;
  CostEnv out = *this;
  out.owners[u] = fu.minus(k);
  out.owners[p] = out.owners[p].plus(k);
  return out;
}

CostEnv CostEnv::with_external(const Owner& e) const {
  if (owners.count(e)) throw CostError("owner " + e + " already present");
  CostEnv out = *this;
  out.owners[e] = Funds::inf();
  return out;
}

CostEnv CostEnv::without(const Name& a) const {
  CostEnv out = *this;
  out.resources.erase(a);
  return out;
}

bool CostEnv::is_simple() const {
  for (auto& [_, r] : resources)
    if (r.type.provide != 0) return false;
  return true;
}

CostEnv CostEnv::collected(const NameSet& live) const {
  CostEnv out = *this;
  for (auto it = out.resources.begin(); it != out.resources.end();) {
    if (it->second.dynamic && !live.count(it->first))
      it = out.resources.erase(it);
    else
      ++it;
  }
  return out;
}

std::string CostEnv::key(bool include_record) const {
  std::string s = "{";
  for (auto& [o, f] : owners) s += o + "=" + f.str() + ";";
  s += "|";
  for (auto& [n, r] : resources) {
    s += n.str() + ":" + r.type.str();
    if (!r.policy.standard) s += r.policy.str();
    if (r.dynamic) s += "*";
    s += ";";
  }
  if (include_record) s += "|rec=" + std::to_string(record);
  return s + "}";
}

bool Configuration::valid() const {
  for (auto& n : free_names(sys))
    if (!env.has(n)) return false;
  return true;
}

std::string Configuration::key(bool include_record) const {
  return env.key(include_record) + " |> " + alpha_key(sys);
}

} // namespace picost
