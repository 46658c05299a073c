#pragma once

#include <set>
#include <string>
#include <vector>

#include "xc/expr.hpp"

namespace xc::lang {

enum class TokKind : int { Ident, Int, Real, Text, Keyword, Punct };

struct Token {
  TokKind kind = TokKind::Punct;
  std::string lexeme;
  Span span;
};

enum class Severity : int { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string message;

  // file:line:col: message
  std::string format(const std::string& file = "<input>") const;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

// Keywords: fun val def if else. `->` and U+21A6 both lex to punct "->".
LexResult tokenize(const std::string& text);

struct ParseResult {
  ExprPtr expr;  // null when diagnostics contain an error
  std::vector<Diagnostic> diagnostics;
};

// Parses the concrete syntax and desugars lambdas, def, if/else and infix
// operators into the core forms. The result is not annotated.
ParseResult parse(const std::vector<Token>& tokens);
ParseResult parse_text(const std::string& text);

// Free variables of an expression. Builtin names count as free here; it is
// check_program that treats them as pre-bound.
std::set<std::string> free_vars(const ExprPtr& e);

// Static program checks: unbound variables (builtins are pre-bound), nvalue
// literals anywhere, and shadowing of builtin names (a warning).
std::vector<Diagnostic> check_program(const ExprPtr& e);

// Canonical core-form printer; parse(print(parse(p))) == parse(p).
std::string print(const ExprPtr& e);

}  // namespace xc::lang
