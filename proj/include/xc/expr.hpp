#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xc/value.hpp"

namespace xc {

struct Span {
  int line = 0;  // 1-based; 0 == unknown
  int col = 0;
};

enum class ExprKind : int {
  Var,   // name
  Fun,   // fun name(params) { body }, annotated with tau
  App,   // fn(args...)
  Val,   // val name = bound; body
  Lit,   // local literal
  NLit,  // nvalue literal (never part of a checked program)
};

// Immutable expression node. Programs are shared across all simulated
// devices, so nodes are reference counted and never mutated after build.
struct Expr {
  ExprKind node = ExprKind::Lit;
  Span span;

  std::string name;             // Var, Fun (self name), Val
  std::vector<std::string> params;  // Fun
  int tau = -1;                 // Fun annotation; -1 == not annotated
  ExprPtr fn;                   // App
  std::vector<ExprPtr> args;    // App
  ExprPtr bound;                // Val
  ExprPtr body;                 // Fun, Val
  Local lit;                    // Lit
  NValue nval;                  // NLit

  static ExprPtr var(std::string n, Span s = {});
  static ExprPtr fun(std::string self, std::vector<std::string> ps, ExprPtr b, Span s = {});
  static ExprPtr app(ExprPtr f, std::vector<ExprPtr> as, Span s = {});
  static ExprPtr val(std::string n, ExprPtr bnd, ExprPtr b, Span s = {});
  static ExprPtr lit_(Local l, Span s = {});
  static ExprPtr nlit(NValue w, Span s = {});
};

// Assigns a fresh tau to every Fun node in deterministic pre-order, starting
// from 0. Idempotent: existing annotations are overwritten. Returns a new
// tree sharing unchanged subtrees where possible.
ExprPtr annotate(const ExprPtr& e);

// Structural equality; tau annotations and spans are ignored when
// `ignore_tau` is set.
bool expr_equal(const ExprPtr& a, const ExprPtr& b, bool ignore_tau = true);

// True if any NLit node occurs in the tree.
bool contains_nvalue_literal(const ExprPtr& e);

}  // namespace xc
