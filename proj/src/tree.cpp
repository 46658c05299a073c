#include "xc/tree.hpp"

#include <algorithm>

namespace xc {

FunName fun_name(const Local& f) {
  FunName n;
  if (f.kind() == Kind::Builtin) {
    n.is_builtin = true;
    n.code = f.as_builtin();
  } else {
    n.tau = f.as_closure().tau;
  }
  return n;
}

const TreePtr& ValueTree::empty() {
  static const TreePtr kEmpty = std::make_shared<const ValueTree>();
  return kEmpty;
}

TreePtr ValueTree::plain(std::vector<TreePtr> kids) {
  if (kids.empty()) return empty();
  auto t = std::make_shared<ValueTree>();
  t->kind = TreeKind::Plain;
  t->children = std::move(kids);
  return t;
}

TreePtr ValueTree::tagged(NValue tag, std::vector<TreePtr> kids, std::uint64_t fp) {
  auto t = std::make_shared<ValueTree>();
  t->kind = TreeKind::Tagged;
  t->tag = std::move(tag);
  t->children = std::move(kids);
  t->fingerprint = fp;
  return t;
}

TreePtr ValueTree::keymap(std::vector<std::pair<Local, TreePtr>> entries, std::uint64_t fp) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  auto t = std::make_shared<ValueTree>();
  t->kind = TreeKind::KeyMap;
  t->entries = std::move(entries);
  t->fingerprint = fp;
  return t;
}

TreePtr ValueTree::child(size_t i) const {
  if (kind == TreeKind::KeyMap) return nullptr;
  if (i < 1 || i > children.size()) return nullptr;
  return children[i - 1];
}

TreePtr ValueTree::entry(const Local& k) const {
  if (kind != TreeKind::KeyMap) return nullptr;
  auto it = std::lower_bound(entries.begin(), entries.end(), k,
                             [](const auto& e, const Local& x) { return e.first < x; });
  if (it != entries.end() && it->first == k) return it->second;
  return nullptr;
}

std::string ValueTree::show() const {
  std::string out;
  switch (kind) {
    case TreeKind::Plain:
      out = "<";
      break;
    case TreeKind::Tagged:
      out = tag.show() + "<";
      break;
    case TreeKind::KeyMap: {
      out = "{";
      bool first = true;
      for (const auto& [k, t] : entries) {
        if (!first) out += ',';
        first = false;
        out += k.show() + "=>" + t->show();
      }
      return out + "}";
    }
  }
  bool first = true;
  for (const auto& c : children) {
    if (!first) out += ',';
    first = false;
    out += c->show();
  }
  return out + ">";
}

TreeEnv::TreeEnv(Items items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

TreeEnv TreeEnv::project_child(size_t i) const {
  Items out;
  out.reserve(items_.size());
  for (const auto& [d, t] : items_) {
    if (auto c = t->child(i)) out.emplace_back(d, std::move(c));
  }
  TreeEnv env;
  env.items_ = std::move(out);
  return env;
}

TreeEnv TreeEnv::project_fun(const Local& f) const {
  FunName want = fun_name(f);
  Items out;
  out.reserve(items_.size());
  for (const auto& [d, t] : items_) {
    if (t->kind != TreeKind::Tagged) continue;
    const Local& g = t->tag.get(d);
    if (!g.is_function()) continue;
    if (fun_name(g) == want) out.emplace_back(d, t);
  }
  TreeEnv env;
  env.items_ = std::move(out);
  return env;
}

TreeEnv TreeEnv::project_key(const Local& k) const {
  Items out;
  out.reserve(items_.size());
  for (const auto& [d, t] : items_) {
    if (auto e = t->entry(k)) out.emplace_back(d, std::move(e));
  }
  TreeEnv env;
  env.items_ = std::move(out);
  return env;
}

}  // namespace xc
