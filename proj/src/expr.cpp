#include "curvlab/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "curvlab/errors.hpp"

namespace curvlab {

ExprPtr Expr::number_lit(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->number = v;
  return e;
}

ExprPtr Expr::coordinate(int axis) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Coord;
  e->coord = axis;
  return e;
}

ExprPtr Expr::parameter(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Param;
  e->param = std::move(name);
  return e;
}

ExprPtr Expr::neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->lhs = std::move(a);
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bop = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr Expr::call(FuncOp f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->func = f;
  e->lhs = std::move(a);
  return e;
}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class TokKind { Number, Ident, Op, LParen, RParen, Comma, End };

struct Token {
  TokKind kind;
  double number = 0.0;
  std::string text;
  char op = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() &&
           (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' ||
            src_[i_] == '\r')) {
      bump(src_[i_]);
      ++i_;
    }
    tok_.pos = pos_;
    if (i_ >= src_.size()) {
      tok_.kind = TokKind::End;
      return;
    }
    char ch = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* start = src_.c_str() + i_;
      char* end = nullptr;
      double v = std::strtod(start, &end);
      if (end == start)
        throw ParseError("malformed number", pos_.line, pos_.col);
      for (const char* p = start; p != end; ++p) bump(*p);
      i_ += static_cast<std::size_t>(end - start);
      tok_.kind = TokKind::Number;
      tok_.number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string name;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
              src_[i_] == '_')) {
        name.push_back(src_[i_]);
        bump(src_[i_]);
        ++i_;
      }
      tok_.kind = TokKind::Ident;
      tok_.text = std::move(name);
      return;
    }
    bump(ch);
    ++i_;
    switch (ch) {
      case '(': tok_.kind = TokKind::LParen; return;
      case ')': tok_.kind = TokKind::RParen; return;
      case ',': tok_.kind = TokKind::Comma; return;
      case '+': case '-': case '*': case '/': case '^':
        tok_.kind = TokKind::Op;
        tok_.op = ch;
        return;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'",
                         pos_.line, pos_.col);
    }
  }

  void bump(char ch) {
    if (ch == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
  }

  const std::string& src_;
  std::size_t i_ = 0;
  SourcePos pos_;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Parser.  Precedence: ^  >  unary -  >  * /  >  + -.
// ^ is right-associative, the others left-associative.
// ---------------------------------------------------------------------------

int coord_of_name(const std::string& n) {
  if (n == "x1" || n == "x" || n == "r" || n == "t") return 0;
  if (n == "x2" || n == "y" || n == "theta1" || n == "phi" || n == "theta")
    return 1;
  if (n == "x3" || n == "z" || n == "theta2" || n == "psi") return 2;
  return -1;
}

bool is_param_name(const std::string& n) {
  return n == "m" || n == "a" || n == "alpha" || n == "c";
}

bool func_of_name(const std::string& n, FuncOp* out) {
  if (n == "sin") { *out = FuncOp::Sin; return true; }
  if (n == "cos") { *out = FuncOp::Cos; return true; }
  if (n == "exp") { *out = FuncOp::Exp; return true; }
  if (n == "log") { *out = FuncOp::Log; return true; }
  if (n == "sqrt") { *out = FuncOp::Sqrt; return true; }
  return false;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != TokKind::End)
      throw ParseError("unexpected trailing input", t.pos.line, t.pos.col);
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    while (lex_.peek().kind == TokKind::Op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      Token t = lex_.take();
      ExprPtr r = parse_product();
      e = with_pos(Expr::binary(t.op == '+' ? BinOp::Add : BinOp::Sub,
                                std::move(e), std::move(r)),
                   t.pos);
    }
    return e;
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    while (lex_.peek().kind == TokKind::Op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      Token t = lex_.take();
      ExprPtr r = parse_unary();
      e = with_pos(Expr::binary(t.op == '*' ? BinOp::Mul : BinOp::Div,
                                std::move(e), std::move(r)),
                   t.pos);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (lex_.peek().kind == TokKind::Op && lex_.peek().op == '-') {
      Token t = lex_.take();
      return with_pos(Expr::neg(parse_unary()), t.pos);
    }
    if (lex_.peek().kind == TokKind::Op && lex_.peek().op == '+') {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (lex_.peek().kind == TokKind::Op && lex_.peek().op == '^') {
      Token t = lex_.take();
      // Right-associative; the exponent admits a leading unary minus.
      ExprPtr e = parse_unary();
      return with_pos(Expr::binary(BinOp::Pow, std::move(base), std::move(e)),
                      t.pos);
    }
    return base;
  }

  ExprPtr parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case TokKind::Number:
        return with_pos(Expr::number_lit(t.number), t.pos);
      case TokKind::LParen: {
        ExprPtr e = parse_sum();
        expect_rparen();
        return e;
      }
      case TokKind::Ident: {
        FuncOp f;
        if (func_of_name(t.text, &f)) {
          const Token& open = lex_.peek();
          if (open.kind != TokKind::LParen)
            throw ParseError("expected '(' after function '" + t.text + "'",
                             open.pos.line, open.pos.col);
          lex_.take();
          ExprPtr arg = parse_sum();
          if (lex_.peek().kind == TokKind::Comma)
            throw ParseError(t.text + " takes exactly one argument",
                             lex_.peek().pos.line, lex_.peek().pos.col);
          expect_rparen();
          return with_pos(Expr::call(f, std::move(arg)), t.pos);
        }
        if (t.text == "pi")
          return with_pos(Expr::number_lit(3.14159265358979323846), t.pos);
        int axis = coord_of_name(t.text);
        if (axis >= 0) return with_pos(Expr::coordinate(axis), t.pos);
        if (is_param_name(t.text))
          return with_pos(Expr::parameter(t.text), t.pos);
        throw ParseError("unknown identifier '" + t.text + "'", t.pos.line,
                         t.pos.col);
      }
      default:
        throw ParseError("expected a value", t.pos.line, t.pos.col);
    }
  }

  void expect_rparen() {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::RParen)
      throw ParseError("expected ')'", t.pos.line, t.pos.col);
    lex_.take();
  }

  static ExprPtr with_pos(ExprPtr e, SourcePos pos) {
    const_cast<Expr*>(e.get())->pos = pos;
    return e;
  }

  Lexer lex_;
};

// ---------------------------------------------------------------------------
// Printer (minimal parentheses, reparses to the same tree shape).
// ---------------------------------------------------------------------------

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      switch (e.bop) {
        case BinOp::Add: case BinOp::Sub: return 1;
        case BinOp::Mul: case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
      return 0;
    case Expr::Kind::Neg: return 3;
    default: return 5;
  }
}

void print_rec(const Expr& e, std::ostringstream& out, int parent_prec,
               bool rhs_of_left_assoc) {
  int prec = precedence(e);
  bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_left_assoc);
  if (parens) out << '(';
  switch (e.kind) {
    case Expr::Kind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.number);
      out << buf;
      break;
    }
    case Expr::Kind::Coord:
      out << (e.coord == 0 ? "x1" : e.coord == 1 ? "x2" : "x3");
      break;
    case Expr::Kind::Param:
      out << e.param;
      break;
    case Expr::Kind::Neg:
      out << '-';
      print_rec(*e.lhs, out, prec, true);
      break;
    case Expr::Kind::Call: {
      const char* name = nullptr;
      switch (e.func) {
        case FuncOp::Sin: name = "sin"; break;
        case FuncOp::Cos: name = "cos"; break;
        case FuncOp::Exp: name = "exp"; break;
        case FuncOp::Log: name = "log"; break;
        case FuncOp::Sqrt: name = "sqrt"; break;
      }
      out << name << '(';
      print_rec(*e.lhs, out, 0, false);
      out << ')';
      break;
    }
    case Expr::Kind::Binary: {
      char op = 0;
      switch (e.bop) {
        case BinOp::Add: op = '+'; break;
        case BinOp::Sub: op = '-'; break;
        case BinOp::Mul: op = '*'; break;
        case BinOp::Div: op = '/'; break;
        case BinOp::Pow: op = '^'; break;
      }
      if (e.bop == BinOp::Pow) {
        // right-associative: parenthesize a left child of equal precedence
        print_rec(*e.lhs, out, prec + 1, false);
        out << op;
        print_rec(*e.rhs, out, prec, false);
      } else {
        print_rec(*e.lhs, out, prec, false);
        out << op;
        print_rec(*e.rhs, out, prec, true);
      }
      break;
    }
  }
  if (parens) out << ')';
}

[[noreturn]] void eval_error(const Expr& e, const std::string& what) {
  throw DomainError(what + " (expression at line " + std::to_string(e.pos.line) +
                    ", column " + std::to_string(e.pos.col) + ")");
}

double param_value(const Expr& e, const ParamMap& params) {
  auto it = params.find(e.param);
  if (it == params.end()) eval_error(e, "unbound parameter '" + e.param + "'");
  return it->second;
}

}  // namespace

ExprPtr parse(const std::string& source) { return Parser(source).run(); }

std::string print(const Expr& e) {
  std::ostringstream out;
  print_rec(e, out, 0, false);
  return out.str();
}

double eval(const Expr& e, std::span<const double> x, const ParamMap& params) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.number;
    case Expr::Kind::Coord:
      if (e.coord >= static_cast<int>(x.size()))
        eval_error(e, "coordinate index beyond chart dimension");
      return x[e.coord];
    case Expr::Kind::Param: return param_value(e, params);
    case Expr::Kind::Neg: return -eval(*e.lhs, x, params);
    case Expr::Kind::Call: {
      double a = eval(*e.lhs, x, params);
      switch (e.func) {
        case FuncOp::Sin: return std::sin(a);
        case FuncOp::Cos: return std::cos(a);
        case FuncOp::Exp: return std::exp(a);
        case FuncOp::Log:
          if (a <= 0.0) eval_error(e, "log of non-positive value");
          return std::log(a);
        case FuncOp::Sqrt:
          if (a < 0.0) eval_error(e, "sqrt of negative value");
          return std::sqrt(a);
      }
      return 0.0;
    }
    case Expr::Kind::Binary: {
      double a = eval(*e.lhs, x, params);
      double b = eval(*e.rhs, x, params);
      switch (e.bop) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
          if (b == 0.0) eval_error(e, "division by zero");
          return a / b;
        case BinOp::Pow: {
          double ip;
          if (std::modf(b, &ip) == 0.0) return std::pow(a, b);
          if (a <= 0.0) eval_error(e, "non-integer power of non-positive base");
          return std::pow(a, b);
        }
      }
      return 0.0;
    }
  }
  return 0.0;
}

namespace {

bool jet_is_constant(const Jet& j) {
  for (int id = 1; id < Jet::kCoeffs; ++id)
    if (j.coeff(id) != 0.0) return false;
  return true;
}

Jet eval_jet_rec(const Expr& e, std::span<const double> x, int dim,
                 const ParamMap& params) {
  switch (e.kind) {
    case Expr::Kind::Number: return Jet::constant(e.number, dim);
    case Expr::Kind::Coord:
      if (e.coord >= dim)
        eval_error(e, "coordinate index beyond chart dimension");
      return Jet::seed(e.coord, x[e.coord], dim);
    case Expr::Kind::Param: return Jet::constant(param_value(e, params), dim);
    case Expr::Kind::Neg: return -eval_jet_rec(*e.lhs, x, dim, params);
    case Expr::Kind::Call: {
      Jet a = eval_jet_rec(*e.lhs, x, dim, params);
      try {
        switch (e.func) {
          case FuncOp::Sin: return sin(a);
          case FuncOp::Cos: return cos(a);
          case FuncOp::Exp: return exp(a);
          case FuncOp::Log: return log(a);
          case FuncOp::Sqrt: return sqrt(a);
        }
      } catch (const DomainError& err) {
        eval_error(e, err.what());
      }
      return Jet(dim);
    }
    case Expr::Kind::Binary: {
      Jet a = eval_jet_rec(*e.lhs, x, dim, params);
      if (e.bop == BinOp::Pow) {
        Jet b = eval_jet_rec(*e.rhs, x, dim, params);
        try {
          if (jet_is_constant(b)) return pow(a, b.value());
          // variable exponent: a^b = exp(b * log a)
          return exp(b * log(a));
        } catch (const DomainError& err) {
          eval_error(e, err.what());
        }
      }
      Jet b = eval_jet_rec(*e.rhs, x, dim, params);
      try {
        switch (e.bop) {
          case BinOp::Add: return a + b;
          case BinOp::Sub: return a - b;
          case BinOp::Mul: return a * b;
          case BinOp::Div: return a / b;
          case BinOp::Pow: break;
        }
      } catch (const DomainError& err) {
        eval_error(e, err.what());
      }
      return Jet(dim);
    }
  }
  return Jet(dim);
}

}  // namespace

Jet eval_jet(const Expr& e, std::span<const double> x, int dim,
             const ParamMap& params) {
  return eval_jet_rec(e, x, dim, params);
}

bool is_zero_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.number == 0.0;
    case Expr::Kind::Neg: return is_zero_expr(*e.lhs);
    case Expr::Kind::Binary:
      switch (e.bop) {
        case BinOp::Add: case BinOp::Sub:
          return is_zero_expr(*e.lhs) && is_zero_expr(*e.rhs);
        case BinOp::Mul:
          return is_zero_expr(*e.lhs) || is_zero_expr(*e.rhs);
        case BinOp::Div: return is_zero_expr(*e.lhs);
        case BinOp::Pow: return false;
      }
      return false;
    default: return false;
  }
}

namespace ex {
ExprPtr c(double v) { return Expr::number_lit(v); }
ExprPtr x(int axis) { return Expr::coordinate(axis); }
ExprPtr p(const std::string& name) { return Expr::parameter(name); }
ExprPtr add(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Add, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Sub, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Mul, std::move(a), std::move(b)); }
ExprPtr div(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Div, std::move(a), std::move(b)); }
ExprPtr pow(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Pow, std::move(a), std::move(b)); }
ExprPtr pow(ExprPtr a, double e) { return pow(std::move(a), c(e)); }
ExprPtr sq(ExprPtr a) { return mul(a, a); }
}  // namespace ex

}  // namespace curvlab
