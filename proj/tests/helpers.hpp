#pragma once

#include "picost/syntax.hpp"

namespace th {

using namespace picost;

inline Value N(const std::string& n) { return Value::of_name(Name(n)); }
inline Value V(const std::string& x) { return Value::var(x); }
inline Thread in(Value ch, std::vector<std::string> ps, Thread k = Thread::stop()) {
  return Thread::input(std::move(ch), std::move(ps), std::move(k));
}
inline Thread out(Value ch, std::vector<Value> vs = {}, Thread k = Thread::stop()) {
  return Thread::output(std::move(ch), std::move(vs), std::move(k));
}
inline System own(const std::string& o, Thread t) { return System::owned(o, std::move(t)); }
inline System par(System a, System b) { return System::par(std::move(a), std::move(b)); }

} // namespace th
