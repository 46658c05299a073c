#include <charconv>
#include <fmt/format.h>
#include <optional>

#include "xc/lang.hpp"

namespace xc::lang {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  ParseResult run() {
    ParseResult out;
    if (toks_.empty()) {
      error({}, "empty program");
      out.diagnostics = diags_;
      return out;
    }
    ExprPtr e = expr();
    if (ok_ && pos_ < toks_.size()) error(cur().span, "expected end of input");
    out.diagnostics = diags_;
    if (ok_) out.expr = std::move(e);
    return out;
  }

 private:
  const std::vector<Token>& toks_;
  size_t pos_ = 0;
  bool ok_ = true;
  int fresh_ = 0;
  std::vector<Diagnostic> diags_;

  static const Token& eof_token() {
    static const Token t{TokKind::Punct, "<eof>", {}};
    return t;
  }
  const Token& cur() const { return pos_ < toks_.size() ? toks_[pos_] : eof_token(); }
  const Token& peek(size_t n = 1) const {
    return pos_ + n < toks_.size() ? toks_[pos_ + n] : eof_token();
  }

  void error(Span s, const std::string& msg) {
    if (ok_) diags_.push_back({Severity::Error, s, msg});
    ok_ = false;
  }

  bool at_punct(const char* p) const {
    return cur().kind == TokKind::Punct && cur().lexeme == p;
  }
  bool at_keyword(const char* k) const {
    return cur().kind == TokKind::Keyword && cur().lexeme == k;
  }
  bool at_ident(const char* name) const {
    return cur().kind == TokKind::Ident && cur().lexeme == name;
  }

  Token take() {
    Token t = cur();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }

  void expect_punct(const char* p) {
    if (!ok_) return;
    if (!at_punct(p)) {
      error(cur().span, fmt::format("expected '{}', found '{}'", p, cur().lexeme));
      return;
    }
    ++pos_;
  }

  std::string expect_ident() {
    if (!ok_) return {};
    if (cur().kind != TokKind::Ident) {
      error(cur().span, fmt::format("expected identifier, found '{}'", cur().lexeme));
      return {};
    }
    return take().lexeme;
  }

  std::string fresh_name() { return fmt::format("_l{}", fresh_++); }

  std::vector<std::string> params() {
    std::vector<std::string> ps;
    expect_punct("(");
    if (ok_ && !at_punct(")")) {
      ps.push_back(expect_ident());
      while (ok_ && at_punct(",")) {
        ++pos_;
        ps.push_back(expect_ident());
      }
    }
    expect_punct(")");
    return ps;
  }

  ExprPtr expr() {
    if (!ok_) return nullptr;
    Span sp = cur().span;
    if (at_keyword("val")) {
      ++pos_;
      std::string name = expect_ident();
      expect_punct("=");
      ExprPtr bound = expr();
      expect_punct(";");
      ExprPtr body = expr();
      if (!ok_) return nullptr;
      return Expr::val(std::move(name), std::move(bound), std::move(body), sp);
    }
    if (at_keyword("def")) {
      // def x(ps) { e } rest  ==>  val x = fun x(ps) { e }; rest
      ++pos_;
      std::string name = expect_ident();
      std::vector<std::string> ps = params();
      expect_punct("{");
      ExprPtr body = expr();
      expect_punct("}");
      ExprPtr rest = expr();
      if (!ok_) return nullptr;
      ExprPtr f = Expr::fun(name, std::move(ps), std::move(body), sp);
      return Expr::val(std::move(name), std::move(f), std::move(rest), sp);
    }
    return or_expr();
  }

  ExprPtr binop(Span sp, const std::string& op, ExprPtr a, ExprPtr b) {
    std::vector<ExprPtr> args;
    args.push_back(std::move(a));
    args.push_back(std::move(b));
    return Expr::app(Expr::var(op, sp), std::move(args), sp);
  }

  ExprPtr or_expr() {
    ExprPtr a = and_expr();
    while (ok_ && at_ident("or")) {
      Span sp = take().span;
      a = binop(sp, "or", std::move(a), and_expr());
    }
    return a;
  }

  ExprPtr and_expr() {
    ExprPtr a = cmp_expr();
    while (ok_ && at_ident("and")) {
      Span sp = take().span;
      a = binop(sp, "and", std::move(a), cmp_expr());
    }
    return a;
  }

  ExprPtr cmp_expr() {
    ExprPtr a = add_expr();
    if (!ok_) return a;
    if (cur().kind == TokKind::Punct) {
      const std::string& p = cur().lexeme;
      if (p == "<" || p == "<=" || p == ">" || p == ">=" || p == "==" || p == "!=") {
        Span sp = take().span;
        return binop(sp, p, std::move(a), add_expr());
      }
    }
    return a;
  }

  ExprPtr add_expr() {
    ExprPtr a = mul_expr();
    while (ok_ && cur().kind == TokKind::Punct &&
           (cur().lexeme == "+" || cur().lexeme == "-")) {
      Token op = take();
      a = binop(op.span, op.lexeme, std::move(a), mul_expr());
    }
    return a;
  }

  ExprPtr mul_expr() {
    ExprPtr a = unary_expr();
    while (ok_ && cur().kind == TokKind::Punct &&
           (cur().lexeme == "*" || cur().lexeme == "/" || cur().lexeme == "%")) {
      Token op = take();
      a = binop(op.span, op.lexeme, std::move(a), unary_expr());
    }
    return a;
  }

  ExprPtr unary_expr() {
    if (at_ident("not")) {
      Span sp = take().span;
      return Expr::app(Expr::var("not", sp), {unary_expr()}, sp);
    }
    if (at_punct("-")) {
      Span sp = take().span;
      return Expr::app(Expr::var("neg", sp), {unary_expr()}, sp);
    }
    return postfix_expr();
  }

  ExprPtr postfix_expr() {
    ExprPtr a = primary();
    while (ok_ && at_punct("(")) {
      Span sp = take().span;
      std::vector<ExprPtr> args;
      if (!at_punct(")")) {
        args.push_back(expr());
        while (ok_ && at_punct(",")) {
          ++pos_;
          args.push_back(expr());
        }
      }
      expect_punct(")");
      if (!ok_) return nullptr;
      a = Expr::app(std::move(a), std::move(args), sp);
    }
    return a;
  }

  // True when the parenthesis at the current position opens a lambda
  // parameter list, i.e. the matching ')' is directly followed by '=>'.
  bool lambda_ahead() const {
    int depth = 0;
    for (size_t j = pos_; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.kind != TokKind::Punct) continue;
      if (t.lexeme == "(") ++depth;
      if (t.lexeme == ")") {
        --depth;
        if (depth == 0)
          return j + 1 < toks_.size() && toks_[j + 1].kind == TokKind::Punct &&
                 toks_[j + 1].lexeme == "=>";
      }
    }
    return false;
  }

  std::optional<Local> literal_value() {
    const Token& t = cur();
    switch (t.kind) {
      case TokKind::Int: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc{} || p != t.lexeme.data() + t.lexeme.size()) {
          error(t.span, "integer literal out of range");
          return std::nullopt;
        }
        ++pos_;
        return Local::integer(v);
      }
      case TokKind::Real: {
        ++pos_;
        return Local::real(std::stod(t.lexeme));
      }
      case TokKind::Text:
        ++pos_;
        return Local::text(t.lexeme);
      case TokKind::Ident:
        if (t.lexeme == "true") {
          ++pos_;
          return Local::boolean(true);
        }
        if (t.lexeme == "false") {
          ++pos_;
          return Local::boolean(false);
        }
        if (t.lexeme == "unit") {
          ++pos_;
          return Local::unit();
        }
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  ExprPtr primary() {
    if (!ok_) return nullptr;
    Span sp = cur().span;

    if (auto lit = literal_value()) {
      // Optional nvalue literal suffix: lit [ d -> lit, ... ]
      if (at_punct("[")) {
        ++pos_;
        NValue::Overrides over;
        if (!at_punct("]")) {
          while (ok_) {
            if (cur().kind != TokKind::Int) {
              error(cur().span, "expected device id in nvalue literal");
              break;
            }
            DeviceId d = std::stoll(take().lexeme);
            expect_punct("->");
            auto v = literal_value();
            if (!v) {
              error(cur().span, "expected literal value in nvalue literal");
              break;
            }
            over.emplace_back(d, std::move(*v));
            if (at_punct(",")) {
              ++pos_;
              continue;
            }
            break;
          }
        }
        expect_punct("]");
        if (!ok_) return nullptr;
        return Expr::nlit(NValue(std::move(*lit), std::move(over)), sp);
      }
      return Expr::lit_(std::move(*lit), sp);
    }

    if (cur().kind == TokKind::Ident) return Expr::var(take().lexeme, sp);

    if (at_keyword("fun")) {
      ++pos_;
      std::string name = expect_ident();
      std::vector<std::string> ps = params();
      expect_punct("{");
      ExprPtr body = expr();
      expect_punct("}");
      if (!ok_) return nullptr;
      return Expr::fun(std::move(name), std::move(ps), std::move(body), sp);
    }

    if (at_keyword("if")) {
      // if (c) { a } else { b }  ==>  mux(c, () => a, () => b)()
      ++pos_;
      expect_punct("(");
      ExprPtr c = expr();
      expect_punct(")");
      expect_punct("{");
      ExprPtr then_e = expr();
      expect_punct("}");
      if (ok_ && !at_keyword("else")) error(cur().span, "expected 'else'");
      if (ok_) ++pos_;
      expect_punct("{");
      ExprPtr else_e = expr();
      expect_punct("}");
      if (!ok_) return nullptr;
      ExprPtr thunk_t = Expr::fun(fresh_name(), {}, std::move(then_e), sp);
      ExprPtr thunk_e = Expr::fun(fresh_name(), {}, std::move(else_e), sp);
      std::vector<ExprPtr> margs;
      margs.push_back(std::move(c));
      margs.push_back(std::move(thunk_t));
      margs.push_back(std::move(thunk_e));
      ExprPtr sel = Expr::app(Expr::var("mux", sp), std::move(margs), sp);
      return Expr::app(std::move(sel), {}, sp);
    }

    if (at_punct("(")) {
      if (lambda_ahead()) {
        std::vector<std::string> ps = params();
        expect_punct("=>");
        ExprPtr body = expr();
        if (!ok_) return nullptr;
        return Expr::fun(fresh_name(), std::move(ps), std::move(body), sp);
      }
      ++pos_;
      ExprPtr e = expr();
      expect_punct(")");
      return e;
    }

    error(sp, fmt::format("expected expression, found '{}'", cur().lexeme));
    return nullptr;
  }
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ParseResult parse_text(const std::string& text) {
  LexResult lexed = tokenize(text);
  if (!lexed.diagnostics.empty()) {
    ParseResult out;
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  return parse(lexed.tokens);
}

}  // namespace xc::lang
