#include <cctype>
#include <fmt/format.h>

#include "xc/lang.hpp"

namespace xc::lang {

std::string Diagnostic::format(const std::string& file) const {
  return fmt::format("{}:{}:{}: {}{}", file, span.line, span.col,
                     severity == Severity::Warning ? "warning: " : "", message);
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const char* kKeywords[] = {"fun", "val", "def", "if", "else"};

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords)
    if (s == k) return true;
  return false;
}

}  // namespace

LexResult tokenize(const std::string& text) {
  LexResult out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](TokKind k, std::string lex, Span sp) {
    out.tokens.push_back(Token{k, std::move(lex), sp});
  };
  auto advance = [&](size_t n) {
    for (size_t j = 0; j < n && i < text.size(); ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    Span sp{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_cont(text[j])) ++j;
      std::string lex = text.substr(i, j - i);
      advance(j - i);
      TokKind k = is_keyword(lex) ? TokKind::Keyword : TokKind::Ident;
      push(k, std::move(lex), sp);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      bool real = false;
      if (j + 1 < text.size() && text[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        real = true;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          real = true;
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      std::string lex = text.substr(i, j - i);
      advance(j - i);
      push(real ? TokKind::Real : TokKind::Int, std::move(lex), sp);
      continue;
    }
    if (c == '"') {
      std::string value;
      size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        char d = text[j];
        if (d == '"') {
          closed = true;
          ++j;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && j + 1 < text.size()) {
          char e = text[j + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: value += e;
          }
          j += 2;
          continue;
        }
        value += d;
        ++j;
      }
      if (!closed) {
        out.diagnostics.push_back({Severity::Error, sp, "unterminated string literal"});
        advance(j - i);
        continue;
      }
      advance(j - i);
      push(TokKind::Text, std::move(value), sp);
      continue;
    }
    // U+21A6 (RIGHTWARDS ARROW FROM BAR) is accepted as ->
    if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x86 &&
        static_cast<unsigned char>(text[i + 2]) == 0xA6) {
      advance(3);
      push(TokKind::Punct, "->", sp);
      continue;
    }
    auto two = [&](const char* p) {
      return i + 1 < text.size() && text[i] == p[0] && text[i + 1] == p[1];
    };
    for (const char* p : {"=>", "->", "<=", ">=", "==", "!="}) {
      if (two(p)) {
        advance(2);
        push(TokKind::Punct, p, sp);
        goto next;
      }
    }
    if (std::string("(){},;=[]+-*/%<>").find(c) != std::string::npos) {
      advance(1);
      push(TokKind::Punct, std::string(1, c), sp);
      continue;
    }
    out.diagnostics.push_back(
        {Severity::Error, sp, fmt::format("invalid character '{}'", c)});
    advance(1);
  next:;
  }
  return out;
}

}  // namespace xc::lang
