#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "xc/expr.hpp"
#include "xc/tree.hpp"
#include "xc/value.hpp"

namespace xc {

// Per-round sensor snapshot. Relational sensors are defined exactly on the
// tree-environment domain supplied by the simulator.
struct SensorState {
  std::map<std::string, Local> scalars;
  std::map<std::string, NValue> relational;

  double current_time() const;

  friend bool operator==(const SensorState&, const SensorState&) = default;
};

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(std::string msg, Span span = {})
      : std::runtime_error(std::move(msg)), span_(span) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

struct EvalOptions {
  // When set, Tagged/KeyMap nodes carry a position fingerprint and the
  // constructs that consume neighbour tags assert the fingerprints match
  // their own position. Catches alignment corruption in tests.
  bool check_alignment = false;
};

// Variable scope: an immutable chain of name -> nvalue bindings.
struct Scope {
  std::string name;
  NValue value;
  ScopePtr parent;

  static ScopePtr bind(ScopePtr parent, std::string name, NValue v);
  static const NValue* lookup(const ScopePtr& s, const std::string& name);
};

// The scope pre-binding every builtin name. Parent of all program scopes.
const ScopePtr& global_scope();

struct EvalResult {
  NValue value;
  TreePtr tree;
};

// Big-step evaluation of one device round: expression `e` on device `d`
// against the value-tree environment and sensor snapshot. Pure: equal inputs
// give equal results. Throws EvalError on runtime type errors and unbound
// variables.
EvalResult evaluate(DeviceId d, const TreeEnv& env, const SensorState& sensors,
                    const ExprPtr& e, const EvalOptions& opts = {});

}  // namespace xc
