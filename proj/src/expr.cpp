#include "xc/expr.hpp"

namespace xc {

ExprPtr Expr::var(std::string n, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::Var;
  e->name = std::move(n);
  e->span = s;
  return e;
}

ExprPtr Expr::fun(std::string self, std::vector<std::string> ps, ExprPtr b, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::Fun;
  e->name = std::move(self);
  e->params = std::move(ps);
  e->body = std::move(b);
  e->span = s;
  return e;
}

ExprPtr Expr::app(ExprPtr f, std::vector<ExprPtr> as, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::App;
  e->fn = std::move(f);
  e->args = std::move(as);
  e->span = s;
  return e;
}

ExprPtr Expr::val(std::string n, ExprPtr bnd, ExprPtr b, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::Val;
  e->name = std::move(n);
  e->bound = std::move(bnd);
  e->body = std::move(b);
  e->span = s;
  return e;
}

ExprPtr Expr::lit_(Local l, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::Lit;
  e->lit = std::move(l);
  e->span = s;
  return e;
}

ExprPtr Expr::nlit(NValue w, Span s) {
  auto e = std::make_shared<Expr>();
  e->node = ExprKind::NLit;
  e->nval = std::move(w);
  e->span = s;
  return e;
}

namespace {

ExprPtr annotate_rec(const ExprPtr& e, int& next) {
  switch (e->node) {
    case ExprKind::Var:
    case ExprKind::Lit:
    case ExprKind::NLit:
      return e;
    case ExprKind::Fun: {
      auto out = std::make_shared<Expr>(*e);
      out->tau = next++;
      out->body = annotate_rec(e->body, next);
      return out;
    }
    case ExprKind::App: {
      auto out = std::make_shared<Expr>(*e);
      out->fn = annotate_rec(e->fn, next);
      for (auto& a : out->args) a = annotate_rec(a, next);
      return out;
    }
    case ExprKind::Val: {
      auto out = std::make_shared<Expr>(*e);
      out->bound = annotate_rec(e->bound, next);
      out->body = annotate_rec(e->body, next);
      return out;
    }
  }
  return e;
}

}  // namespace

ExprPtr annotate(const ExprPtr& e) {
  int next = 0;
  return annotate_rec(e, next);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b, bool ignore_tau) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node != b->node) return false;
  switch (a->node) {
    case ExprKind::Var:
      return a->name == b->name;
    case ExprKind::Fun:
      if (!ignore_tau && a->tau != b->tau) return false;
      return a->name == b->name && a->params == b->params &&
             expr_equal(a->body, b->body, ignore_tau);
    case ExprKind::App: {
      if (!expr_equal(a->fn, b->fn, ignore_tau)) return false;
      if (a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!expr_equal(a->args[i], b->args[i], ignore_tau)) return false;
      return true;
    }
    case ExprKind::Val:
      return a->name == b->name && expr_equal(a->bound, b->bound, ignore_tau) &&
             expr_equal(a->body, b->body, ignore_tau);
    case ExprKind::Lit:
      return a->lit == b->lit;
    case ExprKind::NLit:
      return a->nval == b->nval;
  }
  return false;
}

bool contains_nvalue_literal(const ExprPtr& e) {
  if (!e) return false;
  switch (e->node) {
    case ExprKind::NLit:
      return true;
    case ExprKind::Var:
    case ExprKind::Lit:
      return false;
    case ExprKind::Fun:
      return contains_nvalue_literal(e->body);
    case ExprKind::App: {
      if (contains_nvalue_literal(e->fn)) return true;
      for (const auto& a : e->args)
        if (contains_nvalue_literal(a)) return true;
      return false;
    }
    case ExprKind::Val:
      return contains_nvalue_literal(e->bound) || contains_nvalue_literal(e->body);
  }
  return false;
}

}  // namespace xc
