#pragma once

#include "picost/syntax.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace picost {

struct CostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Funds {
  bool infinite = false;
  std::uint64_t amount = 0;

  static Funds inf() { return Funds{true, 0}; }
  static Funds of(std::uint64_t k) { return Funds{false, k}; }

  bool covers(std::uint64_t k) const { return infinite || amount >= k; }
  // Caller guarantees covers(k).
  Funds minus(std::uint64_t k) const { return infinite ? *this : of(amount - k); }
  Funds plus(std::uint64_t k) const { return infinite ? *this : of(amount + k); }
  std::string str() const { return infinite ? "inf" : std::to_string(amount); }

  auto operator<=>(const Funds&) const = default;
  bool operator==(const Funds&) const = default;
};

// rec_a(ku, kp) = u*ku + p*kp; standard is (1,-1).
struct RecPolicy {
  bool standard = true;
  std::int64_t u = 1;
  std::int64_t p = -1;

  static RecPolicy make_standard() { return RecPolicy{}; }
  static RecPolicy custom(std::int64_t u, std::int64_t p) { return RecPolicy{false, u, p}; }
  std::int64_t apply(std::uint64_t ku, std::uint64_t kp) const {
    return u * static_cast<std::int64_t>(ku) + p * static_cast<std::int64_t>(kp);
  }
  std::string str() const;

  bool operator==(const RecPolicy& o) const { return u == o.u && p == o.p; }
};

struct Resource {
  ResType type;
  RecPolicy policy;
  bool dynamic = false; // added by registration during execution
  bool operator==(const Resource&) const = default;
};

inline const Owner kExternal = "ext";

class CostEnv {
public:
  std::map<Owner, Funds> owners;
  std::map<Name, Resource> resources;
  std::int64_t record = 0;

  bool has(const Name& a) const { return resources.count(a) > 0; }
  const Resource& resource(const Name& a) const;
  const Funds& funds(const Owner& o) const;
  NameSet domain() const;

  void declare(const Name& a, ResType t, RecPolicy pol = {});
  void set_funds(const Owner& o, Funds f) { owners[o] = f; }

  std::optional<CostEnv> charge(const Owner& user, const Name& a, const Owner& provider) const;
  CostEnv registered(const Name& a, ResType t) const;
  std::optional<CostEnv> transfer(const Owner& u, std::uint64_t k, const Owner& p) const;
  CostEnv with_external(const Owner& e = kExternal) const;
  CostEnv without(const Name& a) const;
  bool is_simple() const;

  // Drop dynamically registered names not in `live`.
  CostEnv collected(const NameSet& live) const;

  // Deterministic text for hashing game states.
  std::string key(bool include_record = true) const;

  bool operator==(const CostEnv&) const = default;
};

struct Configuration {
  CostEnv env;
  System sys;

  bool valid() const;
  std::string key(bool include_record = true) const;
};

} // namespace picost
