#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>

#include "curvlab/jets.hpp"

namespace curvlab {

// Named parameter bindings (m, a, alpha, c) for a parsed expression family.
using ParamMap = std::map<std::string, double, std::less<>>;

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class FuncOp { Sin, Cos, Exp, Log, Sqrt };

struct SourcePos {
  int line = 1;
  int col = 1;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree over coordinates x1..x3, literals, the named
// parameters m/a/alpha/c, arithmetic and sin/cos/exp/log/sqrt calls.
// Trees are freely shareable across threads; evaluation is reentrant.
class Expr {
 public:
  enum class Kind { Number, Coord, Param, Neg, Binary, Call };

  Kind kind;
  SourcePos pos;
  double number = 0.0;
  int coord = -1;          // 0-based axis for Kind::Coord
  std::string param;       // Kind::Param
  BinOp bop = BinOp::Add;  // Kind::Binary
  FuncOp func = FuncOp::Sin;
  ExprPtr lhs, rhs;        // Binary: both; Neg/Call: lhs only

  static ExprPtr number_lit(double v);
  static ExprPtr coordinate(int axis);
  static ExprPtr parameter(std::string name);
  static ExprPtr neg(ExprPtr e);
  static ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);
  static ExprPtr call(FuncOp f, ExprPtr a);
};

ExprPtr parse(const std::string& source);  // throws ParseError
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

// Plain-real evaluation at a point (used for grid sampling).
double eval(const Expr& e, std::span<const double> x, const ParamMap& params);

// Taylor-jet evaluation: derivatives of the expression at the point, exact
// through order 4.
Jet eval_jet(const Expr& e, std::span<const double> x, int dim,
             const ParamMap& params);

// True when the expression is structurally the constant zero (all leaves
// fold to 0 through the arithmetic).
bool is_zero_expr(const Expr& e);

// Convenience builders used when composing metric families.
namespace ex {
ExprPtr c(double v);
ExprPtr x(int axis);
ExprPtr p(const std::string& name);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, double e);
ExprPtr sq(ExprPtr a);
}  // namespace ex

}  // namespace curvlab
