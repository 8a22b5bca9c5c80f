#include "dhc/formula.hpp"

#include <algorithm>

namespace dhc {

namespace {

Formula make(FormulaKind kind) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  return n;
}

Formula make_ref(FormulaKind kind, std::string ref) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->ref = std::move(ref);
  return n;
}

Formula make_unary(FormulaKind kind, Formula f, std::string ref = {}) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->ref = std::move(ref);
  n->lhs = std::move(f);
  return n;
}

Formula make_binary(FormulaKind kind, Formula l, Formula r) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

}  // namespace

Formula f_true() { return make(FormulaKind::True); }
Formula f_false() { return make(FormulaKind::False); }
Formula f_free() { return make(FormulaKind::Free); }
Formula f_cs() { return make(FormulaKind::Cs); }
Formula f_re(std::string car) { return make_ref(FormulaKind::Re, std::move(car)); }
Formula f_sg(std::string car) { return make_ref(FormulaKind::Sg, std::move(car)); }
Formula f_pc(std::string car) { return make_ref(FormulaKind::Pc, std::move(car)); }
Formula f_pa(std::string car) { return make_ref(FormulaKind::Pa, std::move(car)); }
Formula f_ob(std::string kind) { return make_ref(FormulaKind::Ob, std::move(kind)); }

Formula f_len_ge(Rat constant) {
  if (constant < Rat(0)) {
    throw std::invalid_argument("length bound must be nonnegative");
  }
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::LengthGE;
  n->len.constant = std::move(constant);
  return n;
}

Formula f_len_ge_size(std::string car) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::LengthGE;
  n->len.is_size = true;
  n->len.car_ref = std::move(car);
  return n;
}

Formula f_not(Formula f) { return make_unary(FormulaKind::Not, std::move(f)); }
Formula f_and(Formula l, Formula r) {
  return make_binary(FormulaKind::And, std::move(l), std::move(r));
}
Formula f_or(Formula l, Formula r) {
  return make_binary(FormulaKind::Or, std::move(l), std::move(r));
}
Formula f_chop(Formula l, Formula r) {
  return make_binary(FormulaKind::Chop, std::move(l), std::move(r));
}
Formula f_somewhere(Formula f) {
  return make_unary(FormulaKind::Somewhere, std::move(f));
}
Formula f_exists(std::string var, Formula body) {
  return make_unary(FormulaKind::Exists, std::move(body), std::move(var));
}
Formula f_forall(std::string var, Formula body) {
  return make_unary(FormulaKind::Forall, std::move(body), std::move(var));
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) {
    return true;
  }
  if (!a || !b || a->kind != b->kind || a->ref != b->ref || !(a->len == b->len)) {
    return false;
  }
  if ((a->lhs == nullptr) != (b->lhs == nullptr) ||
      (a->rhs == nullptr) != (b->rhs == nullptr)) {
    return false;
  }
  if (a->lhs && !structurally_equal(a->lhs, b->lhs)) {
    return false;
  }
  if (a->rhs && !structurally_equal(a->rhs, b->rhs)) {
    return false;
  }
  return true;
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  if (!f) {
    return;
  }
  switch (f->kind) {
    case FormulaKind::Re:
    case FormulaKind::Sg:
    case FormulaKind::Pc:
    case FormulaKind::Pa:
      if (std::find(bound.begin(), bound.end(), f->ref) == bound.end()) {
        out.insert(f->ref);
      }
      return;
    case FormulaKind::LengthGE:
      if (f->len.is_size &&
          std::find(bound.begin(), bound.end(), f->len.car_ref) == bound.end()) {
        out.insert(f->len.car_ref);
      }
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f->ref);
      collect_free(f->lhs, bound, out);
      bound.pop_back();
      return;
    default:
      collect_free(f->lhs, bound, out);
      collect_free(f->rhs, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

int chop_depth(const Formula& f) {
  if (!f) {
    return 0;
  }
  switch (f->kind) {
    case FormulaKind::Chop:
      return 1 + std::max(chop_depth(f->lhs), chop_depth(f->rhs));
    case FormulaKind::Somewhere:
      return 2 + chop_depth(f->lhs);
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return chop_depth(f->lhs);
    case FormulaKind::And:
    case FormulaKind::Or:
      return std::max(chop_depth(f->lhs), chop_depth(f->rhs));
    default:
      return 0;
  }
}

namespace {

// Binding tightness; higher binds tighter. Quantifiers swallow everything to
// their right, so they sit below chop.
enum Prec {
  kQuant = 0,
  kChop = 1,
  kOr = 2,
  kAnd = 3,
  kNot = 4,
  kAtom = 5,
};

void print(const Formula& f, int min_prec, std::string& out) {
  auto paren = [&](int prec, auto&& body) {
    if (prec < min_prec) {
      out += "(";
      body();
      out += ")";
    } else {
      body();
    }
  };
  switch (f->kind) {
    case FormulaKind::True:
      out += "true";
      return;
    case FormulaKind::False:
      out += "false";
      return;
    case FormulaKind::Free:
      out += "free";
      return;
    case FormulaKind::Cs:
      out += "cs";
      return;
    case FormulaKind::Re:
      out += "re(" + f->ref + ")";
      return;
    case FormulaKind::Sg:
      out += "sg(" + f->ref + ")";
      return;
    case FormulaKind::Pc:
      out += "pc(" + f->ref + ")";
      return;
    case FormulaKind::Pa:
      out += "pa(" + f->ref + ")";
      return;
    case FormulaKind::Ob:
      out += "ob(" + f->ref + ")";
      return;
    case FormulaKind::LengthGE:
      paren(kAtom, [&] {
        out += "l >= ";
        out += f->len.is_size ? "size(" + f->len.car_ref + ")"
                              : to_string(f->len.constant);
      });
      return;
    case FormulaKind::Somewhere:
      out += "<< ";
      print(f->lhs, kQuant, out);
      out += " >>";
      return;
    case FormulaKind::Not:
      paren(kNot, [&] {
        out += "not ";
        print(f->lhs, kNot, out);
      });
      return;
    case FormulaKind::And:
      paren(kAnd, [&] {
        print(f->lhs, kAnd, out);
        out += " and ";
        print(f->rhs, kAnd + 1, out);
      });
      return;
    case FormulaKind::Or:
      paren(kOr, [&] {
        print(f->lhs, kOr, out);
        out += " or ";
        print(f->rhs, kOr + 1, out);
      });
      return;
    case FormulaKind::Chop:
      paren(kChop, [&] {
        print(f->lhs, kChop + 1, out);
        out += " chop ";
        print(f->rhs, kChop, out);
      });
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      paren(kQuant, [&] {
        out += f->kind == FormulaKind::Exists ? "exists " : "forall ";
        out += f->ref;
        out += " : ";
        print(f->lhs, kQuant, out);
      });
      return;
  }
}

}  // namespace

std::string formula_to_string(const Formula& f) {
  std::string out;
  print(f, kQuant, out);
  return out;
}

}  // namespace dhc
