#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dhc/rational.hpp"

namespace dhc {

enum class FormulaKind {
  True,
  False,
  Free,       // no occupancy or pedestrian in the view interior
  Cs,         // view contained in the crossing segment
  Re,         // view contained in a car's reservation
  Sg,         // free and at least as long as the car's size
  Pc,         // potential collision between a car and the ego
  Pa,         // started-crossing pedestrian ahead on the car's claim
  Ob,         // sign of a kind within perception distance ahead of the ego
  LengthGE,   // view length >= constant or >= size(car)
  Not,
  And,
  Or,
  Chop,       // split the view into two adjacent parts
  Somewhere,  // some subinterval of the view satisfies the body
  Exists,     // over car ids of the snapshot
  Forall,
};

// Length bound of an `l >= ...` atom: a nonnegative rational constant or the
// size of a referenced car, resolved against the snapshot at evaluation time.
struct LengthExpr {
  bool is_size = false;
  Rat constant = Rat(0);
  std::string car_ref;

  bool operator==(const LengthExpr&) const = default;
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Immutable AST node. `ref` holds the car reference for Re/Sg/Pc/Pa, the
// sign kind for Ob, and the bound variable for Exists/Forall. A car
// reference is resolved through the valuation first and otherwise names a
// snapshot car directly.
struct FormulaNode {
  FormulaKind kind;
  std::string ref;
  LengthExpr len;
  Formula lhs;  // Not/Somewhere/Exists/Forall use lhs only
  Formula rhs;
};

Formula f_true();
Formula f_false();
Formula f_free();
Formula f_cs();
Formula f_re(std::string car);
Formula f_sg(std::string car);
Formula f_pc(std::string car);
Formula f_pa(std::string car);
Formula f_ob(std::string kind);
Formula f_len_ge(Rat constant);
Formula f_len_ge_size(std::string car);
Formula f_not(Formula f);
Formula f_and(Formula l, Formula r);
Formula f_or(Formula l, Formula r);
Formula f_chop(Formula l, Formula r);
Formula f_somewhere(Formula f);
Formula f_exists(std::string var, Formula body);
Formula f_forall(std::string var, Formula body);

bool structurally_equal(const Formula& a, const Formula& b);

// Car references not bound by an enclosing quantifier.
std::set<std::string> free_variables(const Formula& f);

// Maximum nesting of view splits; Somewhere counts as its two-chop
// desugaring.
int chop_depth(const Formula& f);

// Concrete syntax, parenthesized only where precedence requires it.
// parse_formula(formula_to_string(f)) rebuilds f exactly.
std::string formula_to_string(const Formula& f);

}  // namespace dhc
