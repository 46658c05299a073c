#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace xc {

// Device identifiers are non-negative and totally ordered.
using DeviceId = std::int64_t;

class Local;
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Scope;
using ScopePtr = std::shared_ptr<const Scope>;

// Builtin functions. The string name doubles as the alignment name of the
// builtin, so it must be stable.
enum class Builtin : int {
  Exchange,
  Nfold,
  Spawn,
  Self,
  UpdateSelf,
  UpdateDefault,
  Uid,
  Mux,
  Nmap,
  Sense,
  Nsense,
  SetFold,
  MapFold,
  MakePair,
  Fst,
  Snd,
  EmptySet,
  SetAdd,
  SetHas,
  SetUnion,
  SetSize,
  EmptyMap,
  MapPut,
  MapGet,
  MapHas,
  MapSize,
  MapKeys,
  Inf,
  Floor,
  Abs,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  And,
  Or,
  Not,
  Min,
  Max,
};

const char* builtin_name(Builtin b);
// Returns true and sets `out` if `name` is a builtin.
bool builtin_by_name(const std::string& name, Builtin& out);

// A function literal closed over its defining scope. Closures compare (and
// align) by their annotation tau only.
struct Closure {
  int tau = -1;
  std::string self_name;
  std::vector<std::string> params;
  ExprPtr body;
  ScopePtr captured;
};

enum class Kind : int {
  Unit,
  Bool,
  Int,
  Real,
  Text,
  Device,
  Pair,
  Set,
  Map,
  Closure,
  Builtin,
};

const char* kind_name(Kind k);

// An immutable local value. Cheap to copy; structured payloads are shared.
class Local {
 public:
  using SetRep = std::vector<Local>;                         // sorted, unique
  using MapRep = std::vector<std::pair<Local, Local>>;       // sorted by key

  Local() : rep_(std::monostate{}) {}  // Unit

  static Local unit() { return Local(); }
  static Local boolean(bool b) { return Local(Rep(b)); }
  static Local integer(std::int64_t i) { return Local(Rep(i)); }
  static Local real(double x) { return Local(Rep(x)); }
  static Local text(std::string s);
  static Local device(DeviceId d) { return Local(Rep(Dev{d})); }
  static Local pair(Local a, Local b);
  static Local set(SetRep elems);           // takes ownership, sorts+dedups
  static Local map(MapRep entries);         // takes ownership, sorts by key
  static Local closure(std::shared_ptr<const Closure> c) { return Local(Rep(std::move(c))); }
  static Local builtin(Builtin b) { return Local(Rep(b)); }

  Kind kind() const;

  bool is_unit() const { return kind() == Kind::Unit; }
  bool as_bool() const { return std::get<bool>(rep_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(rep_); }
  double as_real() const { return std::get<double>(rep_); }
  const std::string& as_text() const { return *std::get<std::shared_ptr<const std::string>>(rep_); }
  DeviceId as_device() const { return std::get<Dev>(rep_).id; }
  const std::pair<Local, Local>& as_pair() const { return *std::get<std::shared_ptr<const std::pair<Local, Local>>>(rep_); }
  const SetRep& as_set() const { return *std::get<std::shared_ptr<const SetRep>>(rep_); }
  const MapRep& as_map() const { return *std::get<std::shared_ptr<const MapRep>>(rep_); }
  const Closure& as_closure() const { return *std::get<std::shared_ptr<const Closure>>(rep_); }
  Builtin as_builtin() const { return std::get<Builtin>(rep_); }

  bool is_function() const { return kind() == Kind::Closure || kind() == Kind::Builtin; }

  // Canonical total order over all locals: by kind rank, then payload.
  // Closures compare by tau. Used for set/map keys and deterministic output.
  static int compare(const Local& a, const Local& b);

  friend bool operator==(const Local& a, const Local& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Local& a, const Local& b) { return compare(a, b) != 0; }
  friend bool operator<(const Local& a, const Local& b) { return compare(a, b) < 0; }

  // Compact single-token-friendly rendering, e.g. (1,2) {3,4} "hi" #5 <fun:2>.
  std::string show() const;

 private:
  struct Dev {
    DeviceId id;
    friend bool operator==(const Dev&, const Dev&) = default;
  };
  using Rep = std::variant<std::monostate, bool, std::int64_t, double,
                           std::shared_ptr<const std::string>, Dev,
                           std::shared_ptr<const std::pair<Local, Local>>,
                           std::shared_ptr<const SetRep>,
                           std::shared_ptr<const MapRep>,
                           std::shared_ptr<const Closure>, Builtin>;
  explicit Local(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// A neighbouring value: a default local plus per-device overrides, kept
// sorted by device id. Overrides are preserved exactly as constructed, even
// when they coincide with the default (dropping them would be observable
// through updateDefault).
class NValue {
 public:
  using Overrides = std::vector<std::pair<DeviceId, Local>>;

  NValue() = default;
  explicit NValue(Local def) : def_(std::move(def)) {}
  NValue(Local def, Overrides over);

  static NValue lift(Local l) { return NValue(std::move(l)); }

  const Local& defaulted() const { return def_; }
  const Overrides& overrides() const;
  bool has_overrides() const { return over_ && !over_->empty(); }

  // lookup(d): the override for d if present, else the default.
  const Local& get(DeviceId d) const;
  bool has_override(DeviceId d) const;

  // Functional updates.
  NValue with_override(DeviceId d, Local v) const;
  NValue with_default(Local def) const;

  // Structural equality (default, then override lists).
  friend bool operator==(const NValue& a, const NValue& b);
  friend bool operator!=(const NValue& a, const NValue& b) { return !(a == b); }

  // Equal as functions of DeviceId: same default and same lookups over the
  // union of override domains.
  static bool lookup_equal(const NValue& a, const NValue& b);

  // Rendering like 0[2:7,5:1].
  std::string show() const;

 private:
  Local def_;
  std::shared_ptr<const Overrides> over_;  // null == empty
};

}  // namespace xc
