#include "xc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <limits>
#include <set>

namespace xc {

double SensorState::current_time() const {
  auto it = scalars.find("current_time");
  return it != scalars.end() && it->second.kind() == Kind::Real ? it->second.as_real() : 0.0;
}

ScopePtr Scope::bind(ScopePtr parent, std::string name, NValue v) {
  auto s = std::make_shared<Scope>();
  s->name = std::move(name);
  s->value = std::move(v);
  s->parent = std::move(parent);
  return s;
}

const NValue* Scope::lookup(const ScopePtr& s, const std::string& name) {
  for (const Scope* cur = s.get(); cur; cur = cur->parent.get())
    if (cur->name == name) return &cur->value;
  return nullptr;
}

const ScopePtr& global_scope() {
  static const ScopePtr kGlobal = [] {
    ScopePtr s;
    for (int i = 0; i <= static_cast<int>(Builtin::Max); ++i) {
      Builtin b = static_cast<Builtin>(i);
      s = Scope::bind(s, builtin_name(b), NValue::lift(Local::builtin(b)));
    }
    return s;
  }();
  return kGlobal;
}

namespace {

constexpr std::uint64_t kRootPos = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  std::uint64_t z = h + 0x9E3779B97F4A7C15ull + x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t name_code(const Local& f) {
  FunName n = fun_name(f);
  return n.is_builtin ? (0x8000000000000000ull | static_cast<std::uint64_t>(n.code))
                      : static_cast<std::uint64_t>(n.tau);
}

struct Ctx {
  DeviceId device;
  const SensorState* sensors;
  EvalOptions opts;
};

bool numeric(const Local& l) { return l.kind() == Kind::Int || l.kind() == Kind::Real; }
double to_real(const Local& l) { return l.kind() == Kind::Int ? static_cast<double>(l.as_int()) : l.as_real(); }

[[noreturn]] void fail(std::string msg, Span span = {}) { throw EvalError(std::move(msg), span); }

// Ordering used by <, <=, >, >=, min, max. Numerics compare across Int/Real.
int order_cmp(Builtin op, const Local& a, const Local& b) {
  if (numeric(a) && numeric(b)) {
    if (a.kind() == Kind::Int && b.kind() == Kind::Int) {
      auto x = a.as_int(), y = b.as_int();
      return x < y ? -1 : (y < x ? 1 : 0);
    }
    double x = to_real(a), y = to_real(b);
    return x < y ? -1 : (y < x ? 1 : 0);
  }
  if (a.kind() == b.kind() && (a.kind() == Kind::Text || a.kind() == Kind::Device))
    return Local::compare(a, b);
  fail(fmt::format("'{}' cannot order {} and {}", builtin_name(op), kind_name(a.kind()),
                   kind_name(b.kind())));
}

bool value_eq(const Local& a, const Local& b) {
  if (numeric(a) && numeric(b)) {
    if (a.kind() == Kind::Int && b.kind() == Kind::Int) return a.as_int() == b.as_int();
    return to_real(a) == to_real(b);
  }
  if (a.kind() != b.kind()) return false;
  return a == b;
}

std::int64_t checked_floor(double x) {
  if (!(x >= -9.0e18 && x <= 9.0e18)) fail(fmt::format("floor out of range: {}", x));
  return static_cast<std::int64_t>(std::floor(x));
}

// Pure local builtins, applied at one point of the lifted computation.
Local apply_pure(Builtin b, const std::vector<const Local*>& a) {
  auto num2 = [&](auto fi, auto fr) -> Local {
    const Local &x = *a[0], &y = *a[1];
    if (!numeric(x) || !numeric(y))
      fail(fmt::format("'{}' expects numbers, got {} and {}", builtin_name(b),
                       kind_name(x.kind()), kind_name(y.kind())));
    if (x.kind() == Kind::Int && y.kind() == Kind::Int) return fi(x.as_int(), y.as_int());
    return fr(to_real(x), to_real(y));
  };
  auto want = [&](const Local& l, Kind k) {
    if (l.kind() != k)
      fail(fmt::format("'{}' expects {}, got {}", builtin_name(b), kind_name(k),
                       kind_name(l.kind())));
  };
  switch (b) {
    case Builtin::Mux:
      want(*a[0], Kind::Bool);
      return a[0]->as_bool() ? *a[1] : *a[2];
    case Builtin::MakePair:
      return Local::pair(*a[0], *a[1]);
    case Builtin::Fst:
      want(*a[0], Kind::Pair);
      return a[0]->as_pair().first;
    case Builtin::Snd:
      want(*a[0], Kind::Pair);
      return a[0]->as_pair().second;
    case Builtin::EmptySet:
      return Local::set({});
    case Builtin::SetAdd: {
      want(*a[0], Kind::Set);
      auto s = a[0]->as_set();
      s.push_back(*a[1]);
      return Local::set(std::move(s));
    }
    case Builtin::SetHas: {
      want(*a[0], Kind::Set);
      const auto& s = a[0]->as_set();
      return Local::boolean(std::binary_search(s.begin(), s.end(), *a[1]));
    }
    case Builtin::SetUnion: {
      want(*a[0], Kind::Set);
      want(*a[1], Kind::Set);
      Local::SetRep out = a[0]->as_set();
      const auto& ys = a[1]->as_set();
      out.insert(out.end(), ys.begin(), ys.end());
      return Local::set(std::move(out));
    }
    case Builtin::SetSize:
      want(*a[0], Kind::Set);
      return Local::integer(static_cast<std::int64_t>(a[0]->as_set().size()));
    case Builtin::EmptyMap:
      return Local::map({});
    case Builtin::MapPut: {
      want(*a[0], Kind::Map);
      auto m = a[0]->as_map();
      m.emplace_back(*a[1], *a[2]);
      return Local::map(std::move(m));
    }
    case Builtin::MapGet: {
      want(*a[0], Kind::Map);
      const auto& m = a[0]->as_map();
      auto it = std::lower_bound(m.begin(), m.end(), *a[1],
                                 [](const auto& e, const Local& k) { return e.first < k; });
      if (it == m.end() || it->first != *a[1])
        fail(fmt::format("mapGet: missing key {}", a[1]->show()));
      return it->second;
    }
    case Builtin::MapHas: {
      want(*a[0], Kind::Map);
      const auto& m = a[0]->as_map();
      auto it = std::lower_bound(m.begin(), m.end(), *a[1],
                                 [](const auto& e, const Local& k) { return e.first < k; });
      return Local::boolean(it != m.end() && it->first == *a[1]);
    }
    case Builtin::MapSize:
      want(*a[0], Kind::Map);
      return Local::integer(static_cast<std::int64_t>(a[0]->as_map().size()));
    case Builtin::MapKeys: {
      want(*a[0], Kind::Map);
      Local::SetRep ks;
      ks.reserve(a[0]->as_map().size());
      for (const auto& e : a[0]->as_map()) ks.push_back(e.first);
      return Local::set(std::move(ks));
    }
    case Builtin::Inf:
      return Local::real(std::numeric_limits<double>::infinity());
    case Builtin::Floor:
      if (a[0]->kind() == Kind::Int) return *a[0];
      want(*a[0], Kind::Real);
      return Local::integer(checked_floor(a[0]->as_real()));
    case Builtin::Abs:
      if (a[0]->kind() == Kind::Int) return Local::integer(std::abs(a[0]->as_int()));
      want(*a[0], Kind::Real);
      return Local::real(std::fabs(a[0]->as_real()));
    case Builtin::Neg:
      if (a[0]->kind() == Kind::Int) return Local::integer(-a[0]->as_int());
      want(*a[0], Kind::Real);
      return Local::real(-a[0]->as_real());
    case Builtin::Add:
      return num2([](auto x, auto y) { return Local::integer(x + y); },
                  [](double x, double y) { return Local::real(x + y); });
    case Builtin::Sub:
      return num2([](auto x, auto y) { return Local::integer(x - y); },
                  [](double x, double y) { return Local::real(x - y); });
    case Builtin::Mul:
      return num2([](auto x, auto y) { return Local::integer(x * y); },
                  [](double x, double y) { return Local::real(x * y); });
    case Builtin::Div:
      return num2(
          [](std::int64_t x, std::int64_t y) {
            if (y == 0) fail("integer division by zero");
            return Local::integer(x / y);
          },
          [](double x, double y) { return Local::real(x / y); });
    case Builtin::Mod:
      want(*a[0], Kind::Int);
      want(*a[1], Kind::Int);
      if (a[1]->as_int() == 0) fail("modulo by zero");
      return Local::integer(a[0]->as_int() % a[1]->as_int());
    case Builtin::Lt:
      return Local::boolean(order_cmp(b, *a[0], *a[1]) < 0);
    case Builtin::Le:
      return Local::boolean(order_cmp(b, *a[0], *a[1]) <= 0);
    case Builtin::Gt:
      return Local::boolean(order_cmp(b, *a[0], *a[1]) > 0);
    case Builtin::Ge:
      return Local::boolean(order_cmp(b, *a[0], *a[1]) >= 0);
    case Builtin::Eq:
      return Local::boolean(value_eq(*a[0], *a[1]));
    case Builtin::Ne:
      return Local::boolean(!value_eq(*a[0], *a[1]));
    case Builtin::And:
      want(*a[0], Kind::Bool);
      want(*a[1], Kind::Bool);
      return Local::boolean(a[0]->as_bool() && a[1]->as_bool());
    case Builtin::Or:
      want(*a[0], Kind::Bool);
      want(*a[1], Kind::Bool);
      return Local::boolean(a[0]->as_bool() || a[1]->as_bool());
    case Builtin::Not:
      want(*a[0], Kind::Bool);
      return Local::boolean(!a[0]->as_bool());
    case Builtin::Min:
      return order_cmp(b, *a[0], *a[1]) <= 0 ? *a[0] : *a[1];
    case Builtin::Max:
      return order_cmp(b, *a[0], *a[1]) >= 0 ? *a[0] : *a[1];
    default:
      fail(fmt::format("'{}' is not a pure builtin", builtin_name(b)));
  }
}

// Arity table: -1 means variadic (checked in the handler).
int builtin_arity(Builtin b) {
  switch (b) {
    case Builtin::Uid:
    case Builtin::EmptySet:
    case Builtin::EmptyMap:
    case Builtin::Inf:
      return 0;
    case Builtin::Self:
    case Builtin::Sense:
    case Builtin::Nsense:
    case Builtin::Fst:
    case Builtin::Snd:
    case Builtin::SetSize:
    case Builtin::MapSize:
    case Builtin::MapKeys:
    case Builtin::Floor:
    case Builtin::Abs:
    case Builtin::Neg:
    case Builtin::Not:
      return 1;
    case Builtin::Exchange:
    case Builtin::Spawn:
    case Builtin::UpdateSelf:
    case Builtin::UpdateDefault:
    case Builtin::MakePair:
    case Builtin::SetAdd:
    case Builtin::SetHas:
    case Builtin::SetUnion:
    case Builtin::MapGet:
    case Builtin::MapHas:
    case Builtin::Add:
    case Builtin::Sub:
    case Builtin::Mul:
    case Builtin::Div:
    case Builtin::Mod:
    case Builtin::Lt:
    case Builtin::Le:
    case Builtin::Gt:
    case Builtin::Ge:
    case Builtin::Eq:
    case Builtin::Ne:
    case Builtin::And:
    case Builtin::Or:
    case Builtin::Min:
    case Builtin::Max:
      return 2;
    case Builtin::Nfold:
    case Builtin::Mux:
    case Builtin::MapPut:
    case Builtin::SetFold:
    case Builtin::MapFold:
      return 3;
    case Builtin::Nmap:
      return -1;
  }
  return -1;
}

class Evaluator {
 public:
  Evaluator(Ctx ctx) : ctx_(ctx) {}

  EvalResult eval(const ScopePtr& scope, const TreeEnv& env, const ExprPtr& e, std::uint64_t pos) {
    switch (e->node) {
      case ExprKind::Lit:
        return {NValue::lift(e->lit), ValueTree::empty()};
      case ExprKind::NLit:
        return {e->nval, ValueTree::empty()};
      case ExprKind::Var: {
        const NValue* v = Scope::lookup(scope, e->name);
        if (!v) fail(fmt::format("unbound variable '{}'", e->name), e->span);
        return {*v, ValueTree::empty()};
      }
      case ExprKind::Fun: {
        if (e->tau < 0) fail("function expression without annotation", e->span);
        auto c = std::make_shared<Closure>();
        c->tau = e->tau;
        c->self_name = e->name;
        c->params = e->params;
        c->body = e->body;
        c->captured = scope;
        return {NValue::lift(Local::closure(std::move(c))), ValueTree::empty()};
      }
      case ExprKind::Val: {
        EvalResult r1 = eval_sub(scope, env, e->bound, pos, 1);
        ScopePtr inner = Scope::bind(scope, e->name, r1.value);
        EvalResult r2 = eval_sub(inner, env, e->body, pos, 2);
        return {r2.value, ValueTree::plain({r1.tree, r2.tree})};
      }
      case ExprKind::App: {
        size_t n = e->args.size();
        std::vector<TreePtr> kids;
        kids.reserve(n + 2);
        EvalResult rf = eval_sub(scope, env, e->fn, pos, 1);
        kids.push_back(rf.tree);
        std::vector<NValue> argv;
        argv.reserve(n);
        for (size_t i = 0; i < n; ++i) {
          EvalResult ra = eval_sub(scope, env, e->args[i], pos, i + 2);
          kids.push_back(ra.tree);
          argv.push_back(std::move(ra.value));
        }
        const Local& f = rf.value.get(ctx_.device);
        if (!f.is_function())
          fail(fmt::format("applying a non-function ({})", kind_name(f.kind())), e->span);
        TreeEnv aux_env = env.project_fun(f).project_child(n + 2);
        std::uint64_t aux_pos = mix(mix(pos, n + 2), name_code(f));
        EvalResult aux = apply(f, argv, aux_env, aux_pos, e->span);
        kids.push_back(aux.tree);
        return {aux.value, ValueTree::tagged(NValue::lift(f), std::move(kids), pos)};
      }
    }
    fail("corrupt expression node");
  }

  // Application of an already-evaluated function to evaluated arguments:
  // rule A-FUN plus every builtin's auxiliary rule.
  EvalResult apply(const Local& f, const std::vector<NValue>& args, const TreeEnv& env,
                   std::uint64_t pos, Span span) {
    if (f.kind() == Kind::Closure) {
      const Closure& c = f.as_closure();
      if (args.size() != c.params.size())
        fail(fmt::format("function takes {} arguments, got {}", c.params.size(), args.size()),
             span);
      ScopePtr scope = Scope::bind(c.captured ? c.captured : global_scope(), c.self_name,
                                   NValue::lift(f));
      for (size_t i = 0; i < args.size(); ++i)
        scope = Scope::bind(scope, c.params[i], args[i]);
      return eval(scope, env, c.body, pos);
    }

    Builtin b = f.as_builtin();
    int want = builtin_arity(b);
    if (want >= 0 && static_cast<int>(args.size()) != want)
      fail(fmt::format("'{}' expects {} arguments, got {}", builtin_name(b), want, args.size()),
           span);

    switch (b) {
      case Builtin::Exchange:
        return eval_exchange(args, env, pos, span);
      case Builtin::Nfold:
        return eval_nfold(args, env, pos, span);
      case Builtin::Spawn:
        return eval_spawn(args, env, pos, span);
      case Builtin::Self:
        return {NValue::lift(args[0].get(ctx_.device)), ValueTree::empty()};
      case Builtin::UpdateSelf:
        return {args[0].with_override(ctx_.device, args[1].get(ctx_.device)), ValueTree::empty()};
      case Builtin::UpdateDefault:
        return {args[0].with_default(args[1].get(ctx_.device)), ValueTree::empty()};
      case Builtin::Uid:
        return {NValue::lift(Local::device(ctx_.device)), ValueTree::empty()};
      case Builtin::Sense: {
        const Local& name = args[0].get(ctx_.device);
        if (name.kind() != Kind::Text) fail("sense expects a sensor name", span);
        auto it = ctx_.sensors->scalars.find(name.as_text());
        if (it == ctx_.sensors->scalars.end())
          fail(fmt::format("unknown sensor '{}'", name.as_text()), span);
        return {NValue::lift(it->second), ValueTree::empty()};
      }
      case Builtin::Nsense: {
        const Local& name = args[0].get(ctx_.device);
        if (name.kind() != Kind::Text) fail("nsense expects a sensor name", span);
        auto it = ctx_.sensors->relational.find(name.as_text());
        if (it == ctx_.sensors->relational.end())
          fail(fmt::format("unknown relational sensor '{}'", name.as_text()), span);
        return {it->second, ValueTree::empty()};
      }
      case Builtin::Nmap:
        return eval_nmap(args, pos, span);
      case Builtin::SetFold: {
        const Local& coll = args[1].get(ctx_.device);
        if (coll.kind() != Kind::Set) fail("setFold expects a set", span);
        Local acc = args[2].get(ctx_.device);
        for (const Local& elem : coll.as_set()) acc = call_local(args[0], {acc, elem}, pos);
        return {NValue::lift(std::move(acc)), ValueTree::empty()};
      }
      case Builtin::MapFold: {
        const Local& coll = args[1].get(ctx_.device);
        if (coll.kind() != Kind::Map) fail("mapFold expects a map", span);
        Local acc = args[2].get(ctx_.device);
        for (const auto& [k, v] : coll.as_map()) acc = call_local(args[0], {acc, k, v}, pos);
        return {NValue::lift(std::move(acc)), ValueTree::empty()};
      }
      default:
        return lift_pointwise(b, args, span);
    }
  }

 private:
  // Subexpression evaluation with the i-th child projection. Leaf nodes never
  // consume the environment, so the projection is skipped for them.
  EvalResult eval_sub(const ScopePtr& scope, const TreeEnv& env, const ExprPtr& child,
                      std::uint64_t pos, size_t i) {
    if (child->node == ExprKind::App || child->node == ExprKind::Val) {
      return eval(scope, env.project_child(i), child, mix(pos, i));
    }
    static const TreeEnv kEmpty;
    return eval(scope, kEmpty, child, mix(pos, i));
  }

  // Evaluates a synthesized call f(args...) in a given environment and
  // returns the full E-APP result (value and application tree).
  EvalResult call_in_env(const NValue& f, std::vector<ExprPtr> arg_exprs, const TreeEnv& env,
                         std::uint64_t pos) {
    ExprPtr call = Expr::app(Expr::nlit(f), std::move(arg_exprs));
    return eval(global_scope(), env, call, pos);
  }

  // Point application for nfold / nmap / setFold / mapFold: empty environment,
  // result collapsed at the self point.
  Local call_local(const NValue& f, std::vector<Local> args, std::uint64_t pos) {
    std::vector<ExprPtr> es;
    es.reserve(args.size());
    for (auto& a : args) es.push_back(Expr::lit_(std::move(a)));
    static const TreeEnv kEmpty;
    EvalResult r = call_in_env(f, std::move(es), kEmpty, mix(pos, 2));
    return r.value.get(ctx_.device);
  }

  void check_fp(const TreePtr& t, std::uint64_t pos, const char* what) {
    if (ctx_.opts.check_alignment && t->fingerprint != pos)
      fail(fmt::format("alignment violation: {} tree from a different position", what));
  }

  EvalResult eval_exchange(const std::vector<NValue>& args, const TreeEnv& env, std::uint64_t pos,
                           Span span) {
    // Only trees rooted by a previous exchange at this position participate.
    TreeEnv::Items aligned;
    aligned.reserve(env.size());
    for (const auto& [d, t] : env.items()) {
      if (t->kind != TreeKind::Tagged) continue;
      check_fp(t, pos, "exchange");
      aligned.emplace_back(d, t);
    }
    NValue n = args[0];
    for (const auto& [d, t] : aligned) n = n.with_override(d, t->tag.get(ctx_.device));

    TreeEnv inner(std::move(aligned));
    EvalResult call = call_in_env(args[1], {Expr::nlit(n)}, inner.project_child(1), mix(pos, 1));

    auto split = [&](const Local& l, DeviceId at, bool second) -> const Local& {
      if (l.kind() != Kind::Pair)
        fail(fmt::format("exchange function must return a pair, got {} at {}",
                         kind_name(l.kind()), at < 0 ? "default" : fmt::format("device {}", at)),
             span);
      return second ? l.as_pair().second : l.as_pair().first;
    };
    NValue::Overrides ret_over, send_over;
    for (const auto& [d, v] : call.value.overrides()) {
      ret_over.emplace_back(d, split(v, d, false));
      send_over.emplace_back(d, split(v, d, true));
    }
    NValue ret(split(call.value.defaulted(), -1, false), std::move(ret_over));
    NValue send(split(call.value.defaulted(), -1, true), std::move(send_over));
    return {std::move(ret), ValueTree::tagged(std::move(send), {call.tree}, pos)};
  }

  EvalResult eval_nfold(const std::vector<NValue>& args, const TreeEnv& env, std::uint64_t pos,
                        Span span) {
    (void)span;
    Local acc = args[2].get(ctx_.device);
    for (const auto& [d, t] : env.items()) {
      (void)t;
      if (d == ctx_.device) continue;
      acc = call_local(args[0], {std::move(acc), args[1].get(d)}, pos);
    }
    return {NValue::lift(std::move(acc)), ValueTree::empty()};
  }

  EvalResult eval_spawn(const std::vector<NValue>& args, const TreeEnv& env, std::uint64_t pos,
                        Span span) {
    const Local& own = args[1].get(ctx_.device);
    if (own.kind() != Kind::Set) fail("spawn expects a set of process keys", span);
    std::set<Local> active(own.as_set().begin(), own.as_set().end());
    for (const auto& [d, t] : env.items()) {
      (void)d;
      if (t->kind != TreeKind::KeyMap) continue;
      for (const auto& [k, sub] : t->entries) {
        if (sub->kind != TreeKind::Tagged) continue;
        const Local& b = sub->tag.get(ctx_.device);
        if (b.kind() != Kind::Bool)
          fail(fmt::format("spawn status must be bool, got {}", kind_name(b.kind())), span);
        if (b.as_bool()) active.insert(k);
      }
    }

    Local::MapRep result;
    std::vector<std::pair<Local, TreePtr>> entries;
    result.reserve(active.size());
    entries.reserve(active.size());
    for (const Local& k : active) {
      TreeEnv env_k = env.project_key(k);
      if (ctx_.opts.check_alignment)
        for (const auto& [d, sub] : env_k.items()) {
          (void)d;
          check_fp(sub, pos, "spawn entry");
        }
      EvalResult call =
          call_in_env(args[0], {Expr::lit_(k)}, env_k.project_child(1), mix(pos, 1));

      auto split = [&](const Local& l, DeviceId at, bool second) -> const Local& {
        if (l.kind() != Kind::Pair)
          fail(fmt::format("spawn process must return a pair, got {} at {}",
                           kind_name(l.kind()),
                           at < 0 ? "default" : fmt::format("device {}", at)),
               span);
        const Local& part = second ? l.as_pair().second : l.as_pair().first;
        if (second && part.kind() != Kind::Bool)
          fail(fmt::format("spawn status must be bool, got {}", kind_name(part.kind())), span);
        return part;
      };
      NValue::Overrides status_over;
      for (const auto& [d, v] : call.value.overrides())
        status_over.emplace_back(d, split(v, d, true));
      NValue status(split(call.value.defaulted(), -1, true), std::move(status_over));
      result.emplace_back(k, split(call.value.get(ctx_.device), ctx_.device, false));
      entries.emplace_back(k, ValueTree::tagged(std::move(status), {call.tree}, pos));
    }
    return {NValue::lift(Local::map(std::move(result))),
            ValueTree::keymap(std::move(entries), pos)};
  }

  EvalResult eval_nmap(const std::vector<NValue>& args, std::uint64_t pos, Span span) {
    if (args.size() < 2) fail("nmap expects a function and at least one nvalue", span);
    std::vector<DeviceId> domain;
    for (size_t i = 1; i < args.size(); ++i)
      for (const auto& [d, v] : args[i].overrides()) {
        (void)v;
        domain.push_back(d);
      }
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

    auto at = [&](auto proj) {
      std::vector<Local> point;
      point.reserve(args.size() - 1);
      for (size_t i = 1; i < args.size(); ++i) point.push_back(proj(args[i]));
      return call_local(args[0], std::move(point), pos);
    };
    Local def = at([](const NValue& w) { return w.defaulted(); });
    NValue::Overrides over;
    over.reserve(domain.size());
    for (DeviceId d : domain)
      over.emplace_back(d, at([&](const NValue& w) { return w.get(d); }));
    return {NValue(std::move(def), std::move(over)), ValueTree::empty()};
  }

  EvalResult lift_pointwise(Builtin b, const std::vector<NValue>& args, Span span) {
    std::vector<DeviceId> domain;
    for (const auto& w : args)
      for (const auto& [d, v] : w.overrides()) {
        (void)v;
        domain.push_back(d);
      }
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

    std::vector<const Local*> point(args.size());
    auto run = [&](const char* where) {
      try {
        return apply_pure(b, point);
      } catch (const EvalError& e) {
        fail(fmt::format("{} ({})", e.what(), where), span);
      }
    };
    for (size_t i = 0; i < args.size(); ++i) point[i] = &args[i].defaulted();
    Local def = run("at default");
    NValue::Overrides over;
    over.reserve(domain.size());
    for (DeviceId d : domain) {
      for (size_t i = 0; i < args.size(); ++i) point[i] = &args[i].get(d);
      over.emplace_back(d, run(fmt::format("at device {}", d).c_str()));
    }
    return {NValue(std::move(def), std::move(over)), ValueTree::empty()};
  }

  Ctx ctx_;
};

}  // namespace

EvalResult evaluate(DeviceId d, const TreeEnv& env, const SensorState& sensors, const ExprPtr& e,
                    const EvalOptions& opts) {
  Evaluator ev(Ctx{d, &sensors, opts});
  return ev.eval(global_scope(), env, e, kRootPos);
}

}  // namespace xc
