#include "xc/value.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace xc {

namespace {

struct BuiltinEntry {
  Builtin code;
  const char* name;
};

constexpr BuiltinEntry kBuiltins[] = {
    {Builtin::Exchange, "exchange"},
    {Builtin::Nfold, "nfold"},
    {Builtin::Spawn, "spawn"},
    {Builtin::Self, "self"},
    {Builtin::UpdateSelf, "updateSelf"},
    {Builtin::UpdateDefault, "updateDefault"},
    {Builtin::Uid, "uid"},
    {Builtin::Mux, "mux"},
    {Builtin::Nmap, "nmap"},
    {Builtin::Sense, "sense"},
    {Builtin::Nsense, "nsense"},
    {Builtin::SetFold, "setFold"},
    {Builtin::MapFold, "mapFold"},
    {Builtin::MakePair, "pair"},
    {Builtin::Fst, "fst"},
    {Builtin::Snd, "snd"},
    {Builtin::EmptySet, "emptySet"},
    {Builtin::SetAdd, "setAdd"},
    {Builtin::SetHas, "setHas"},
    {Builtin::SetUnion, "setUnion"},
    {Builtin::SetSize, "setSize"},
    {Builtin::EmptyMap, "emptyMap"},
    {Builtin::MapPut, "mapPut"},
    {Builtin::MapGet, "mapGet"},
    {Builtin::MapHas, "mapHas"},
    {Builtin::MapSize, "mapSize"},
    {Builtin::MapKeys, "mapKeys"},
    {Builtin::Inf, "inf"},
    {Builtin::Floor, "floor"},
    {Builtin::Abs, "abs"},
    {Builtin::Neg, "neg"},
    {Builtin::Add, "+"},
    {Builtin::Sub, "-"},
    {Builtin::Mul, "*"},
    {Builtin::Div, "/"},
    {Builtin::Mod, "%"},
    {Builtin::Lt, "<"},
    {Builtin::Le, "<="},
    {Builtin::Gt, ">"},
    {Builtin::Ge, ">="},
    {Builtin::Eq, "=="},
    {Builtin::Ne, "!="},
    {Builtin::And, "and"},
    {Builtin::Or, "or"},
    {Builtin::Not, "not"},
    {Builtin::Min, "min"},
    {Builtin::Max, "max"},
};

}  // namespace

const char* builtin_name(Builtin b) {
  for (const auto& e : kBuiltins)
    if (e.code == b) return e.name;
  return "?";
}

bool builtin_by_name(const std::string& name, Builtin& out) {
  for (const auto& e : kBuiltins) {
    if (name == e.name) {
      out = e.code;
      return true;
    }
  }
  return false;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Unit: return "unit";
    case Kind::Bool: return "bool";
    case Kind::Int: return "int";
    case Kind::Real: return "real";
    case Kind::Text: return "text";
    case Kind::Device: return "device";
    case Kind::Pair: return "pair";
    case Kind::Set: return "set";
    case Kind::Map: return "map";
    case Kind::Closure: return "fun";
    case Kind::Builtin: return "builtin";
  }
  return "?";
}

Local Local::text(std::string s) {
  return Local(Rep(std::make_shared<const std::string>(std::move(s))));
}

Local Local::pair(Local a, Local b) {
  return Local(Rep(std::make_shared<const std::pair<Local, Local>>(std::move(a), std::move(b))));
}

Local Local::set(SetRep elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return Local(Rep(std::make_shared<const SetRep>(std::move(elems))));
}

Local Local::map(MapRep entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  // Later entries win on duplicate keys.
  MapRep out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second = std::move(e.second);
    else
      out.push_back(std::move(e));
  }
  return Local(Rep(std::make_shared<const MapRep>(std::move(out))));
}

Kind Local::kind() const {
  switch (rep_.index()) {
    case 0: return Kind::Unit;
    case 1: return Kind::Bool;
    case 2: return Kind::Int;
    case 3: return Kind::Real;
    case 4: return Kind::Text;
    case 5: return Kind::Device;
    case 6: return Kind::Pair;
    case 7: return Kind::Set;
    case 8: return Kind::Map;
    case 9: return Kind::Closure;
    default: return Kind::Builtin;
  }
}

namespace {
template <typename T>
int cmp3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}
}  // namespace

int Local::compare(const Local& a, const Local& b) {
  Kind ka = a.kind(), kb = b.kind();
  if (ka != kb) return cmp3(static_cast<int>(ka), static_cast<int>(kb));
  switch (ka) {
    case Kind::Unit:
      return 0;
    case Kind::Bool:
      return cmp3(a.as_bool(), b.as_bool());
    case Kind::Int:
      return cmp3(a.as_int(), b.as_int());
    case Kind::Real: {
      double x = a.as_real(), y = b.as_real();
      if (std::isnan(x) || std::isnan(y)) {
        // NaNs sort after everything and equal each other, keeping the order
        // total for container use.
        if (std::isnan(x) && std::isnan(y)) return 0;
        return std::isnan(x) ? 1 : -1;
      }
      return cmp3(x, y);
    }
    case Kind::Text:
      return cmp3(a.as_text(), b.as_text());
    case Kind::Device:
      return cmp3(a.as_device(), b.as_device());
    case Kind::Pair: {
      int c = compare(a.as_pair().first, b.as_pair().first);
      if (c != 0) return c;
      return compare(a.as_pair().second, b.as_pair().second);
    }
    case Kind::Set: {
      const auto& xs = a.as_set();
      const auto& ys = b.as_set();
      size_t n = std::min(xs.size(), ys.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(xs[i], ys[i]);
        if (c != 0) return c;
      }
      return cmp3(xs.size(), ys.size());
    }
    case Kind::Map: {
      const auto& xs = a.as_map();
      const auto& ys = b.as_map();
      size_t n = std::min(xs.size(), ys.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(xs[i].first, ys[i].first);
        if (c != 0) return c;
        c = compare(xs[i].second, ys[i].second);
        if (c != 0) return c;
      }
      return cmp3(xs.size(), ys.size());
    }
    case Kind::Closure:
      return cmp3(a.as_closure().tau, b.as_closure().tau);
    case Kind::Builtin:
      return cmp3(static_cast<int>(a.as_builtin()), static_cast<int>(b.as_builtin()));
  }
  return 0;
}

std::string Local::show() const {
  switch (kind()) {
    case Kind::Unit:
      return "unit";
    case Kind::Bool:
      return as_bool() ? "true" : "false";
    case Kind::Int:
      return fmt::format("{}", as_int());
    case Kind::Real:
      return fmt::format("{}", as_real());
    case Kind::Text: {
      std::string out = "\"";
      for (char c : as_text()) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += '"';
      return out;
    }
    case Kind::Device:
      return fmt::format("#{}", as_device());
    case Kind::Pair:
      return "(" + as_pair().first.show() + "," + as_pair().second.show() + ")";
    case Kind::Set: {
      std::string out = "{";
      bool first = true;
      for (const auto& e : as_set()) {
        if (!first) out += ',';
        first = false;
        out += e.show();
      }
      return out + "}";
    }
    case Kind::Map: {
      std::string out = "{";
      bool first = true;
      for (const auto& e : as_map()) {
        if (!first) out += ',';
        first = false;
        out += e.first.show() + ":" + e.second.show();
      }
      return out + "}";
    }
    case Kind::Closure:
      return fmt::format("<fun:{}>", as_closure().tau);
    case Kind::Builtin:
      return fmt::format("<b:{}>", builtin_name(as_builtin()));
  }
  return "?";
}

NValue::NValue(Local def, Overrides over) : def_(std::move(def)) {
  if (!over.empty()) {
    std::stable_sort(over.begin(), over.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Overrides out;
    out.reserve(over.size());
    for (auto& e : over) {
      if (!out.empty() && out.back().first == e.first)
        out.back().second = std::move(e.second);  // later write wins
      else
        out.push_back(std::move(e));
    }
    over_ = std::make_shared<const Overrides>(std::move(out));
  }
}

const NValue::Overrides& NValue::overrides() const {
  static const Overrides kEmpty;
  return over_ ? *over_ : kEmpty;
}

const Local& NValue::get(DeviceId d) const {
  if (over_) {
    auto it = std::lower_bound(over_->begin(), over_->end(), d,
                               [](const auto& e, DeviceId x) { return e.first < x; });
    if (it != over_->end() && it->first == d) return it->second;
  }
  return def_;
}

bool NValue::has_override(DeviceId d) const {
  if (!over_) return false;
  auto it = std::lower_bound(over_->begin(), over_->end(), d,
                             [](const auto& e, DeviceId x) { return e.first < x; });
  return it != over_->end() && it->first == d;
}

NValue NValue::with_override(DeviceId d, Local v) const {
  Overrides out = overrides();
  auto it = std::lower_bound(out.begin(), out.end(), d,
                             [](const auto& e, DeviceId x) { return e.first < x; });
  if (it != out.end() && it->first == d)
    it->second = std::move(v);
  else
    out.insert(it, {d, std::move(v)});
  NValue r(def_);
  r.over_ = std::make_shared<const Overrides>(std::move(out));
  return r;
}

NValue NValue::with_default(Local def) const {
  NValue r(std::move(def));
  r.over_ = over_;
  return r;
}

bool operator==(const NValue& a, const NValue& b) {
  if (a.def_ != b.def_) return false;
  return a.overrides() == b.overrides();
}

bool NValue::lookup_equal(const NValue& a, const NValue& b) {
  if (a.def_ != b.def_) return false;
  for (const auto& [d, v] : a.overrides())
    if (v != b.get(d)) return false;
  for (const auto& [d, v] : b.overrides())
    if (v != a.get(d)) return false;
  return true;
}

std::string NValue::show() const {
  std::string out = def_.show();
  out += '[';
  bool first = true;
  for (const auto& [d, v] : overrides()) {
    if (!first) out += ',';
    first = false;
    out += fmt::format("{}:{}", d, v.show());
  }
  out += ']';
  return out;
}

}  // namespace xc
