#include <cmath>
#include <fmt/format.h>

#include "xc/lang.hpp"

namespace xc::lang {

namespace {

bool infix_symbol(const std::string& s) {
  return s == "+" || s == "-" || s == "*" || s == "/" || s == "%" || s == "<" || s == "<=" ||
         s == ">" || s == ">=" || s == "==" || s == "!=" || s == "and" || s == "or";
}

// Real literals keep a decimal point so they re-lex as reals.
std::string real_text(double x) {
  std::string s = fmt::format("{}", x);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string literal_text(const Local& l) {
  switch (l.kind()) {
    case Kind::Real:
      return real_text(l.as_real());
    case Kind::Builtin:
      return builtin_name(l.as_builtin());
    default:
      return l.show();  // unit/true/false/ints/strings match the source syntax
  }
}

void emit(const ExprPtr& e, std::string& out) {
  switch (e->node) {
    case ExprKind::Var:
      out += e->name;
      return;
    case ExprKind::Lit:
      out += literal_text(e->lit);
      return;
    case ExprKind::NLit: {
      out += literal_text(e->nval.defaulted());
      out += '[';
      bool first = true;
      for (const auto& [d, v] : e->nval.overrides()) {
        if (!first) out += ", ";
        first = false;
        out += fmt::format("{} -> {}", d, literal_text(v));
      }
      out += ']';
      return;
    }
    case ExprKind::Fun: {
      out += "fun ";
      out += e->name;
      out += '(';
      for (size_t i = 0; i < e->params.size(); ++i) {
        if (i) out += ", ";
        out += e->params[i];
      }
      out += ") { ";
      emit(e->body, out);
      out += " }";
      return;
    }
    case ExprKind::Val: {
      out += "val ";
      out += e->name;
      out += " = ";
      emit(e->bound, out);
      out += "; ";
      emit(e->body, out);
      return;
    }
    case ExprKind::App: {
      if (e->fn->node == ExprKind::Var && e->args.size() == 2 && infix_symbol(e->fn->name)) {
        auto operand = [&](const ExprPtr& a) {
          // val only parses at statement positions, so it needs parentheses
          bool paren = a->node == ExprKind::Val;
          if (paren) out += '(';
          emit(a, out);
          if (paren) out += ')';
        };
        out += '(';
        operand(e->args[0]);
        out += ' ';
        out += e->fn->name;
        out += ' ';
        operand(e->args[1]);
        out += ')';
        return;
      }
      bool paren_fn = e->fn->node == ExprKind::Fun || e->fn->node == ExprKind::Val;
      if (paren_fn) out += '(';
      emit(e->fn, out);
      if (paren_fn) out += ')';
      out += '(';
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        emit(e->args[i], out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string print(const ExprPtr& e) {
  std::string out;
  if (e) emit(e, out);
  return out;
}

}  // namespace xc::lang
