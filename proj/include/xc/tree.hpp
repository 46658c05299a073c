#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "xc/value.hpp"

namespace xc {

struct ValueTree;
using TreePtr = std::shared_ptr<const ValueTree>;

// Alignment name of a function value: the builtin symbol or the closure tau.
struct FunName {
  bool is_builtin = false;
  Builtin code = Builtin::Uid;
  int tau = -1;
  friend bool operator==(const FunName&, const FunName&) = default;
};
FunName fun_name(const Local& f);

enum class TreeKind : int { Plain, Tagged, KeyMap };

// The per-round export tree: stack frames (Plain), exchange/application
// nodes carrying an nvalue (Tagged), and per-process-key subtrees (KeyMap).
struct ValueTree {
  TreeKind kind = TreeKind::Plain;
  NValue tag;                                        // Tagged
  std::vector<TreePtr> children;                     // Plain, Tagged
  std::vector<std::pair<Local, TreePtr>> entries;    // KeyMap, sorted by key
  std::uint64_t fingerprint = 0;                     // alignment debug aid

  static const TreePtr& empty();
  static TreePtr plain(std::vector<TreePtr> kids);
  static TreePtr tagged(NValue tag, std::vector<TreePtr> kids, std::uint64_t fp = 0);
  static TreePtr keymap(std::vector<std::pair<Local, TreePtr>> entries, std::uint64_t fp = 0);

  // Child i (1-based) or null when absent / not a child-bearing node.
  TreePtr child(size_t i) const;
  // KeyMap entry for key k, or null.
  TreePtr entry(const Local& k) const;

  std::string show() const;  // debug rendering
};

// The value-tree environment: one tree per contributing device (neighbours
// plus possibly the device itself at its previous round), sorted by id.
class TreeEnv {
 public:
  using Items = std::vector<std::pair<DeviceId, TreePtr>>;

  TreeEnv() = default;
  explicit TreeEnv(Items items);

  const Items& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }

  // pi_i pointwise; devices whose tree lacks child i are dropped.
  TreeEnv project_child(size_t i) const;
  // Theta|f: keeps devices whose root is Tagged with a function of the same
  // name evaluated at that device.
  TreeEnv project_fun(const Local& f) const;
  // Per-key projection for spawn: keeps devices whose root is a KeyMap with
  // an entry for k.
  TreeEnv project_key(const Local& k) const;

 private:
  Items items_;
};

}  // namespace xc
