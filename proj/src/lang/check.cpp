#include <fmt/format.h>

#include "xc/lang.hpp"

namespace xc::lang {

namespace {

void fv(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e->node) {
    case ExprKind::Var:
      if (!bound.contains(e->name)) out.insert(e->name);
      return;
    case ExprKind::Lit:
    case ExprKind::NLit:
      return;
    case ExprKind::Fun: {
      std::set<std::string> inner = bound;
      inner.insert(e->name);
      for (const auto& p : e->params) inner.insert(p);
      fv(e->body, inner, out);
      return;
    }
    case ExprKind::App:
      fv(e->fn, bound, out);
      for (const auto& a : e->args) fv(a, bound, out);
      return;
    case ExprKind::Val: {
      fv(e->bound, bound, out);
      std::set<std::string> inner = bound;
      inner.insert(e->name);
      fv(e->body, inner, out);
      return;
    }
  }
}

bool is_builtin_name(const std::string& n) {
  Builtin b;
  return builtin_by_name(n, b);
}

void walk_checks(const ExprPtr& e, std::vector<Diagnostic>& diags) {
  switch (e->node) {
    case ExprKind::Var:
    case ExprKind::Lit:
      return;
    case ExprKind::NLit:
      diags.push_back({Severity::Error, e->span, "nvalue literal in program"});
      return;
    case ExprKind::Fun: {
      for (const auto& p : e->params)
        if (is_builtin_name(p))
          diags.push_back(
              {Severity::Warning, e->span, fmt::format("parameter '{}' shadows a builtin", p)});
      if (is_builtin_name(e->name))
        diags.push_back(
            {Severity::Warning, e->span,
             fmt::format("function name '{}' shadows a builtin", e->name)});
      walk_checks(e->body, diags);
      return;
    }
    case ExprKind::App:
      walk_checks(e->fn, diags);
      for (const auto& a : e->args) walk_checks(a, diags);
      return;
    case ExprKind::Val:
      if (is_builtin_name(e->name))
        diags.push_back({Severity::Warning, e->span,
                         fmt::format("binding '{}' shadows a builtin", e->name)});
      walk_checks(e->bound, diags);
      walk_checks(e->body, diags);
      return;
  }
}

// Spans of free occurrences, for better messages than a bare name set.
void free_spans(const ExprPtr& e, std::set<std::string>& bound,
                std::vector<std::pair<std::string, Span>>& out) {
  switch (e->node) {
    case ExprKind::Var:
      if (!bound.contains(e->name) && !is_builtin_name(e->name))
        out.emplace_back(e->name, e->span);
      return;
    case ExprKind::Lit:
    case ExprKind::NLit:
      return;
    case ExprKind::Fun: {
      std::set<std::string> inner = bound;
      inner.insert(e->name);
      for (const auto& p : e->params) inner.insert(p);
      free_spans(e->body, inner, out);
      return;
    }
    case ExprKind::App:
      free_spans(e->fn, bound, out);
      for (const auto& a : e->args) free_spans(a, bound, out);
      return;
    case ExprKind::Val: {
      free_spans(e->bound, bound, out);
      std::set<std::string> inner = bound;
      inner.insert(e->name);
      free_spans(e->body, inner, out);
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  if (e) fv(e, bound, out);
  return out;
}

std::vector<Diagnostic> check_program(const ExprPtr& e) {
  std::vector<Diagnostic> diags;
  if (!e) return diags;
  std::set<std::string> bound;
  std::vector<std::pair<std::string, Span>> frees;
  free_spans(e, bound, frees);
  for (const auto& [name, span] : frees)
    diags.push_back({Severity::Error, span, fmt::format("unbound variable '{}'", name)});
  walk_checks(e, diags);
  return diags;
}

}  // namespace xc::lang
