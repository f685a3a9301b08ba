#include "adpt/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "adpt/errors.hpp"

namespace adpt {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string column_suffix(int pos) {
  return pos >= 0 ? " (column " + std::to_string(pos + 1) + ")" : "";
}

ExprPtr make_node(Expr node) { return std::make_shared<const Expr>(std::move(node)); }

bool is_number(const ExprPtr& e, double v) {
  return e->kind == Expr::Kind::Number && e->value == v;
}

}  // namespace

namespace ex {

ExprPtr num(double v, int pos) {
  Expr e;
  e.kind = Expr::Kind::Number;
  e.value = v;
  e.pos = pos;
  return make_node(std::move(e));
}
ExprPtr num(double v) { return num(v, -1); }

ExprPtr state(int index, int pos) {
  if (index < 0) throw InputError("state index must be non-negative");
  Expr e;
  e.kind = Expr::Kind::State;
  e.index = index;
  e.pos = pos;
  return make_node(std::move(e));
}
ExprPtr state(int index) { return state(index, -1); }

ExprPtr time(int pos) {
  Expr e;
  e.kind = Expr::Kind::Time;
  e.pos = pos;
  return make_node(std::move(e));
}
ExprPtr time() { return time(-1); }

static ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b, int pos) {
  Expr e;
  e.kind = Expr::Kind::Binary;
  e.op = op;
  e.a = std::move(a);
  e.b = std::move(b);
  e.pos = pos;
  return make_node(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b, int pos) {
  if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
    return num(a->value + b->value, pos);
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  return binary(BinaryOp::Add, std::move(a), std::move(b), pos);
}
ExprPtr add(ExprPtr a, ExprPtr b) { return add(std::move(a), std::move(b), -1); }

ExprPtr neg(ExprPtr a, int pos) {
  if (a->kind == Expr::Kind::Number) return num(-a->value, pos);
  if (a->kind == Expr::Kind::Unary && a->fn == UnaryFn::Neg) return a->a;
  Expr e;
  e.kind = Expr::Kind::Unary;
  e.fn = UnaryFn::Neg;
  e.a = std::move(a);
  e.pos = pos;
  return make_node(std::move(e));
}
ExprPtr neg(ExprPtr a) { return neg(std::move(a), -1); }

ExprPtr sub(ExprPtr a, ExprPtr b, int pos) {
  if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
    return num(a->value - b->value, pos);
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return neg(std::move(b), pos);
  return binary(BinaryOp::Sub, std::move(a), std::move(b), pos);
}
ExprPtr sub(ExprPtr a, ExprPtr b) { return sub(std::move(a), std::move(b), -1); }

ExprPtr mul(ExprPtr a, ExprPtr b, int pos) {
  if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
    return num(a->value * b->value, pos);
  if (is_number(a, 0.0) || is_number(b, 0.0)) return num(0.0, pos);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  return binary(BinaryOp::Mul, std::move(a), std::move(b), pos);
}
ExprPtr mul(ExprPtr a, ExprPtr b) { return mul(std::move(a), std::move(b), -1); }

ExprPtr div(ExprPtr a, ExprPtr b, int pos) {
  if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number &&
      b->value != 0.0)
    return num(a->value / b->value, pos);
  if (is_number(a, 0.0) && !is_number(b, 0.0)) return num(0.0, pos);
  if (is_number(b, 1.0)) return a;
  return binary(BinaryOp::Div, std::move(a), std::move(b), pos);
}
ExprPtr div(ExprPtr a, ExprPtr b) { return div(std::move(a), std::move(b), -1); }

ExprPtr pow(ExprPtr a, ExprPtr b, int pos) {
  if (is_number(b, 1.0)) return a;
  if (is_number(b, 0.0)) return num(1.0, pos);
  if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
    const double v = std::pow(a->value, b->value);
    if (std::isfinite(v)) return num(v, pos);
  }
  return binary(BinaryOp::Pow, std::move(a), std::move(b), pos);
}
ExprPtr pow(ExprPtr a, ExprPtr b) { return pow(std::move(a), std::move(b), -1); }

ExprPtr apply(UnaryFn fn, ExprPtr a, int pos) {
  if (fn == UnaryFn::Neg) return neg(std::move(a), pos);
  if (a->kind == Expr::Kind::Number) {
    double v = 0.0;
    switch (fn) {
      case UnaryFn::Sin: v = std::sin(a->value); break;
      case UnaryFn::Cos: v = std::cos(a->value); break;
      case UnaryFn::Tan: v = std::tan(a->value); break;
      case UnaryFn::Exp: v = std::exp(a->value); break;
      case UnaryFn::Log: v = std::log(a->value); break;
      case UnaryFn::Sqrt: v = std::sqrt(a->value); break;
      case UnaryFn::Abs: v = std::fabs(a->value); break;
      case UnaryFn::Neg: break;
    }
    if (std::isfinite(v)) return num(v, pos);
  }
  Expr e;
  e.kind = Expr::Kind::Unary;
  e.fn = fn;
  e.a = std::move(a);
  e.pos = pos;
  return make_node(std::move(e));
}
ExprPtr apply(UnaryFn fn, ExprPtr a) { return apply(fn, std::move(a), -1); }

}  // namespace ex

// ---------------------------------------------------------------------------
// Lexing / parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Type {
    Number, Ident, Plus, Minus, Star, Slash, Caret,
    LParen, RParen, Comma, Semicolon, End
  };
  Type type = Type::End;
  double number = 0.0;
  std::string text;
  int pos = 0;
};

const char* token_desc(const Token& tok) {
  switch (tok.type) {
    case Token::Type::Number: return "number";
    case Token::Type::Ident: return "identifier";
    case Token::Type::Plus: return "'+'";
    case Token::Type::Minus: return "'-'";
    case Token::Type::Star: return "'*'";
    case Token::Type::Slash: return "'/'";
    case Token::Type::Caret: return "'^'";
    case Token::Type::LParen: return "'('";
    case Token::Type::RParen: return "')'";
    case Token::Type::Comma: return "','";
    case Token::Type::Semicolon: return "';'";
    case Token::Type::End: return "end of expression";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto push = [&](Token::Type type, int pos) {
    Token tok;
    tok.type = type;
    tok.pos = pos;
    out.push_back(std::move(tok));
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const int pos = static_cast<int>(i);
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '.' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          ++k;
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(src.data() + i, src.data() + j, value);
      if (res.ec != std::errc() || res.ptr != src.data() + j)
        throw ParseError("invalid number literal" + column_suffix(pos));
      Token tok;
      tok.type = Token::Type::Number;
      tok.number = value;
      tok.pos = pos;
      out.push_back(std::move(tok));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_'))
        ++j;
      Token tok;
      tok.type = Token::Type::Ident;
      tok.text = src.substr(i, j - i);
      tok.pos = pos;
      out.push_back(std::move(tok));
      i = j;
      continue;
    }
    switch (ch) {
      case '+': push(Token::Type::Plus, pos); break;
      case '-': push(Token::Type::Minus, pos); break;
      case '*': push(Token::Type::Star, pos); break;
      case '/': push(Token::Type::Slash, pos); break;
      case '^': push(Token::Type::Caret, pos); break;
      case '(': push(Token::Type::LParen, pos); break;
      case ')': push(Token::Type::RParen, pos); break;
      case ',': push(Token::Type::Comma, pos); break;
      case ';': push(Token::Type::Semicolon, pos); break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'" +
                         column_suffix(pos));
    }
    ++i;
  }
  Token end;
  end.type = Token::Type::End;
  end.pos = static_cast<int>(src.size());
  out.push_back(std::move(end));
  return out;
}

UnaryFn function_by_name(const std::string& name, bool* found) {
  *found = true;
  if (name == "sin") return UnaryFn::Sin;
  if (name == "cos") return UnaryFn::Cos;
  if (name == "tan") return UnaryFn::Tan;
  if (name == "exp") return UnaryFn::Exp;
  if (name == "log") return UnaryFn::Log;
  if (name == "sqrt") return UnaryFn::Sqrt;
  if (name == "abs") return UnaryFn::Abs;
  *found = false;
  return UnaryFn::Neg;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  ExprPtr parse() {
    ExprPtr e = expression();
    if (peek().type != Token::Type::End)
      throw ParseError(std::string("unexpected ") + token_desc(peek()) +
                       column_suffix(peek().pos));
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }

  ExprPtr expression() {
    ExprPtr e = term();
    while (peek().type == Token::Type::Plus || peek().type == Token::Type::Minus) {
      const Token& op = advance();
      ExprPtr rhs = term();
      e = op.type == Token::Type::Plus ? ex::add(std::move(e), std::move(rhs), op.pos)
                                       : ex::sub(std::move(e), std::move(rhs), op.pos);
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (peek().type == Token::Type::Star || peek().type == Token::Type::Slash) {
      const Token& op = advance();
      ExprPtr rhs = factor();
      e = op.type == Token::Type::Star ? ex::mul(std::move(e), std::move(rhs), op.pos)
                                       : ex::div(std::move(e), std::move(rhs), op.pos);
    }
    return e;
  }

  ExprPtr factor() {
    if (peek().type == Token::Type::Minus) {
      const Token& op = advance();
      return ex::neg(factor(), op.pos);
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (peek().type == Token::Type::Caret) {
      const Token& op = advance();
      ExprPtr exponent = factor();  // right associative; allows x^-2
      return ex::pow(std::move(base), std::move(exponent), op.pos);
    }
    return base;
  }

  ExprPtr primary() {
    const Token& tok = advance();
    switch (tok.type) {
      case Token::Type::Number:
        return ex::num(tok.number, tok.pos);
      case Token::Type::LParen: {
        ExprPtr e = expression();
        if (peek().type != Token::Type::RParen)
          throw ParseError("expected ')'" + column_suffix(peek().pos));
        advance();
        return e;
      }
      case Token::Type::Ident:
        return identifier(tok);
      default:
        throw ParseError(std::string("unexpected ") + token_desc(tok) +
                         column_suffix(tok.pos));
    }
  }

  ExprPtr identifier(const Token& tok) {
    const std::string& name = tok.text;
    if (name == "pi") return ex::num(kPi, tok.pos);
    if (name == "t") return ex::time(tok.pos);
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
      if (idx < 1)
        throw ParseError("state variables are numbered from x1" +
                         column_suffix(tok.pos));
      return ex::state(static_cast<int>(idx - 1), tok.pos);
    }
    bool is_fn = false;
    const UnaryFn fn = function_by_name(name, &is_fn);
    if (is_fn) {
      if (peek().type != Token::Type::LParen)
        throw ParseError("function '" + name + "' requires a parenthesized argument" +
                         column_suffix(peek().pos));
      advance();
      ExprPtr arg = expression();
      if (peek().type == Token::Type::Comma)
        throw ParseError("function '" + name + "' takes exactly one argument" +
                         column_suffix(peek().pos));
      if (peek().type != Token::Type::RParen)
        throw ParseError("expected ')'" + column_suffix(peek().pos));
      advance();
      return ex::apply(fn, std::move(arg), tok.pos);
    }
    throw ParseError("unknown identifier '" + name + "'" + column_suffix(tok.pos));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

ExprPtr parse_expression(const std::string& src) { return Parser(src).parse(); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double eval_expr(const Expr& e, const double* x, int n, double t) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.value;
    case Expr::Kind::State:
      if (e.index >= n)
        throw InputError("expression references x" + std::to_string(e.index + 1) +
                         " but the state dimension is " + std::to_string(n) +
                         column_suffix(e.pos));
      return x[e.index];
    case Expr::Kind::Time:
      return t;
    case Expr::Kind::Unary: {
      const double v = eval_expr(*e.a, x, n, t);
      switch (e.fn) {
        case UnaryFn::Neg: return -v;
        case UnaryFn::Sin: return std::sin(v);
        case UnaryFn::Cos: return std::cos(v);
        case UnaryFn::Tan: return std::tan(v);
        case UnaryFn::Exp: return std::exp(v);
        case UnaryFn::Log:
          if (v <= 0.0)
            throw EvalError("log of a non-positive value" + column_suffix(e.pos));
          return std::log(v);
        case UnaryFn::Sqrt:
          if (v < 0.0)
            throw EvalError("sqrt of a negative value" + column_suffix(e.pos));
          return std::sqrt(v);
        case UnaryFn::Abs: return std::fabs(v);
      }
      return 0.0;
    }
    case Expr::Kind::Binary: {
      const double va = eval_expr(*e.a, x, n, t);
      const double vb = eval_expr(*e.b, x, n, t);
      switch (e.op) {
        case BinaryOp::Add: return va + vb;
        case BinaryOp::Sub: return va - vb;
        case BinaryOp::Mul: return va * vb;
        case BinaryOp::Div:
          if (vb == 0.0) throw EvalError("division by zero" + column_suffix(e.pos));
          return va / vb;
        case BinaryOp::Pow:
          if (va == 0.0 && vb < 0.0)
            throw EvalError("zero raised to a negative power" + column_suffix(e.pos));
          if (va < 0.0 && vb != std::floor(vb))
            throw EvalError("fractional power of a negative value" +
                            column_suffix(e.pos));
          return std::pow(va, vb);
      }
      return 0.0;
    }
  }
  return 0.0;
}

double eval_expr(const ExprPtr& e, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double t) {
  return eval_expr(*e, x.data(), static_cast<int>(x.size()), t);
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

ExprPtr differentiate(const ExprPtr& e, int var) {
  using namespace ex;
  switch (e->kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Time:
      return num(0.0);
    case Expr::Kind::State:
      return num(e->index == var ? 1.0 : 0.0);
    case Expr::Kind::Unary: {
      ExprPtr da = differentiate(e->a, var);
      switch (e->fn) {
        case UnaryFn::Neg: return neg(std::move(da));
        case UnaryFn::Sin: return mul(apply(UnaryFn::Cos, e->a), std::move(da));
        case UnaryFn::Cos:
          return neg(mul(apply(UnaryFn::Sin, e->a), std::move(da)));
        case UnaryFn::Tan:
          return div(std::move(da), pow(apply(UnaryFn::Cos, e->a), num(2.0)));
        case UnaryFn::Exp: return mul(apply(UnaryFn::Exp, e->a), std::move(da));
        case UnaryFn::Log: return div(std::move(da), e->a);
        case UnaryFn::Sqrt:
          return div(std::move(da), mul(num(2.0), apply(UnaryFn::Sqrt, e->a)));
        case UnaryFn::Abs:
          throw InputError("cannot differentiate abs(); it is not smooth at 0" +
                           column_suffix(e->pos));
      }
      return num(0.0);
    }
    case Expr::Kind::Binary: {
      switch (e->op) {
        case BinaryOp::Add:
          return add(differentiate(e->a, var), differentiate(e->b, var));
        case BinaryOp::Sub:
          return sub(differentiate(e->a, var), differentiate(e->b, var));
        case BinaryOp::Mul:
          return add(mul(differentiate(e->a, var), e->b),
                     mul(e->a, differentiate(e->b, var)));
        case BinaryOp::Div:
          return div(sub(mul(differentiate(e->a, var), e->b),
                         mul(e->a, differentiate(e->b, var))),
                     pow(e->b, num(2.0)));
        case BinaryOp::Pow:
          if (e->b->kind == Expr::Kind::Number) {
            const double c = e->b->value;
            return mul(mul(num(c), pow(e->a, num(c - 1.0))),
                       differentiate(e->a, var));
          }
          // general case via a^b = exp(b log a)
          return mul(pow(e->a, e->b),
                     add(mul(differentiate(e->b, var), apply(UnaryFn::Log, e->a)),
                         div(mul(e->b, differentiate(e->a, var)), e->a)));
      }
      return num(0.0);
    }
  }
  return num(0.0);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Larger binds tighter; used to decide parenthesization.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return std::signbit(e.value) ? 3 : 5;  // negative literals print as -v
    case Expr::Kind::State:
    case Expr::Kind::Time:
      return 5;
    case Expr::Kind::Unary:
      return e.fn == UnaryFn::Neg ? 3 : 5;  // fn(...) is self-delimiting
    case Expr::Kind::Binary:
      switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
  }
  return 5;
}

const char* fn_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Neg: return "-";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Tan: return "tan";
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sqrt: return "sqrt";
    case UnaryFn::Abs: return "abs";
  }
  return "?";
}

void render(const Expr& e, std::string& out);

void render_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  render(child, out);
  if (parens) out += ')';
}

void render(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.value);
      out += buf;
      return;
    }
    case Expr::Kind::State:
      out += 'x';
      out += std::to_string(e.index + 1);
      return;
    case Expr::Kind::Time:
      out += 't';
      return;
    case Expr::Kind::Unary:
      if (e.fn == UnaryFn::Neg) {
        out += '-';
        render_child(*e.a, precedence(*e.a) < 3, out);
      } else {
        out += fn_name(e.fn);
        out += '(';
        render(*e.a, out);
        out += ')';
      }
      return;
    case Expr::Kind::Binary: {
      const int prec = precedence(e);
      const char* op = nullptr;
      bool left_parens = precedence(*e.a) < prec;
      bool right_parens = false;
      switch (e.op) {
        case BinaryOp::Add:
          op = " + ";
          right_parens = precedence(*e.b) == 1;
          break;
        case BinaryOp::Sub:
          op = " - ";
          right_parens = precedence(*e.b) <= 1;
          break;
        case BinaryOp::Mul:
          op = "*";
          right_parens = precedence(*e.b) <= 2;
          break;
        case BinaryOp::Div:
          op = "/";
          right_parens = precedence(*e.b) <= 2;
          break;
        case BinaryOp::Pow:
          op = "^";
          left_parens = precedence(*e.a) < 5;   // base must be atomic
          right_parens = precedence(*e.b) < 3;  // exponent may be signed/nested pow
          break;
      }
      render_child(*e.a, left_parens, out);
      out += op;
      render_child(*e.b, right_parens, out);
      return;
    }
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  render(*e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

int max_state_index(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::State:
      return e.index;
    case Expr::Kind::Unary:
      return max_state_index(*e.a);
    case Expr::Kind::Binary:
      return std::max(max_state_index(*e.a), max_state_index(*e.b));
    default:
      return -1;
  }
}

bool depends_on_time(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Time:
      return true;
    case Expr::Kind::Unary:
      return depends_on_time(*e.a);
    case Expr::Kind::Binary:
      return depends_on_time(*e.a) || depends_on_time(*e.b);
    default:
      return false;
  }
}

void check_dimension(const Expr& e, int n, const std::string& what) {
  const int idx = max_state_index(e);
  if (idx >= n)
    throw InputError(what + " references x" + std::to_string(idx + 1) +
                     " but the state dimension is " + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Vectors and matrices of expressions
// ---------------------------------------------------------------------------

Eigen::VectorXd VectorExpr::eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 double t) const {
  Eigen::VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out[static_cast<Eigen::Index>(i)] =
        eval_expr(*rows[i], x.data(), static_cast<int>(x.size()), t);
  return out;
}

Eigen::MatrixXd MatrixExpr::eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 double t) const {
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out(r, c) = eval_expr(*at(r, c), x.data(), static_cast<int>(x.size()), t);
  return out;
}

namespace {

std::vector<std::string> split_on(const std::string& src, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : src) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

VectorExpr parse_vector_expression(const std::string& src) {
  VectorExpr vec;
  const auto parts = split_on(src, ';');
  for (std::size_t r = 0; r < parts.size(); ++r) {
    if (is_blank(parts[r]))
      throw ParseError("row " + std::to_string(r + 1) + " is empty");
    try {
      vec.rows.push_back(parse_expression(parts[r]));
    } catch (const ParseError& err) {
      throw ParseError("row " + std::to_string(r + 1) + ": " + err.what());
    }
  }
  return vec;
}

MatrixExpr parse_matrix_expression(const std::string& src) {
  MatrixExpr mat;
  const auto row_parts = split_on(src, ';');
  mat.rows = static_cast<int>(row_parts.size());
  for (std::size_t r = 0; r < row_parts.size(); ++r) {
    const auto col_parts = split_on(row_parts[r], ',');
    if (r == 0) mat.cols = static_cast<int>(col_parts.size());
    if (static_cast<int>(col_parts.size()) != mat.cols)
      throw ParseError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(col_parts.size()) + " entries, expected " +
                       std::to_string(mat.cols));
    for (std::size_t c = 0; c < col_parts.size(); ++c) {
      if (is_blank(col_parts[c]))
        throw ParseError("row " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1) + " is empty");
      try {
        mat.entries.push_back(parse_expression(col_parts[c]));
      } catch (const ParseError& err) {
        throw ParseError("row " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1) + ": " + err.what());
      }
    }
  }
  return mat;
}

Eigen::MatrixXd parse_numeric_matrix(const std::string& src) {
  const MatrixExpr mat = parse_matrix_expression(src);
  Eigen::MatrixXd out(mat.rows, mat.cols);
  for (int r = 0; r < mat.rows; ++r) {
    for (int c = 0; c < mat.cols; ++c) {
      const Expr& e = *mat.at(r, c);
      if (max_state_index(e) >= 0 || depends_on_time(e))
        throw ParseError("matrix entry at row " + std::to_string(r + 1) +
                         ", column " + std::to_string(c + 1) +
                         " must be a numeric constant");
      out(r, c) = eval_expr(e, nullptr, 0, 0.0);
    }
  }
  return out;
}

}  // namespace adpt
