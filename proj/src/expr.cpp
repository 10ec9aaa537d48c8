#include "elcomp/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "elcomp/error.hpp"
#include "elcomp/mesh.hpp"

namespace elcomp {

namespace {

struct FuncInfo {
  Func func;
  std::string_view name;
  int arity;
};

constexpr std::array<FuncInfo, 9> kFuncs{{
    {Func::sin, "sin", 1},
    {Func::cos, "cos", 1},
    {Func::exp, "exp", 1},
    {Func::log, "log", 1},
    {Func::sqrt, "sqrt", 1},
    {Func::abs, "abs", 1},
    {Func::min, "min", 2},
    {Func::max, "max", 2},
    {Func::tanh, "tanh", 1},
}};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

double checked(double v, std::string_view what, double arg) {
  if (!std::isfinite(v)) {
    throw EvalDomainError(std::string(what) + " produced a non-finite value (argument " +
                          format_double(arg) + ")");
  }
  return v;
}

double eval_node(const ExprNode& n, std::span<const double> values) {
  switch (n.kind) {
    case ExprNode::Kind::literal:
      return n.value;
    case ExprNode::Kind::variable:
      if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= values.size()) {
        throw Error(ErrorCode::dim_mismatch, "no value bound for variable slot " +
                                                 std::to_string(n.slot));
      }
      return values[static_cast<std::size_t>(n.slot)];
    case ExprNode::Kind::unary:
      return -eval_node(*n.args[0], values);
    case ExprNode::Kind::binary: {
      const double a = eval_node(*n.args[0], values);
      const double b = eval_node(*n.args[1], values);
      switch (n.binary_op) {
        case BinaryOp::add: return checked(a + b, "+", a);
        case BinaryOp::sub: return checked(a - b, "-", a);
        case BinaryOp::mul: return checked(a * b, "*", a);
        case BinaryOp::div:
          if (b == 0.0) throw EvalDomainError("division by zero");
          return checked(a / b, "/", b);
        case BinaryOp::pow:
          if (a < 0.0 && std::trunc(b) != b) {
            throw EvalDomainError("negative base " + format_double(a) +
                                  " raised to non-integer exponent " + format_double(b));
          }
          return checked(std::pow(a, b), "^", a);
      }
      break;
    }
    case ExprNode::Kind::call: {
      const double a = eval_node(*n.args[0], values);
      switch (n.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::exp: return checked(std::exp(a), "exp", a);
        case Func::log:
          if (a <= 0.0) throw EvalDomainError("log of non-positive argument " + format_double(a));
          return std::log(a);
        case Func::sqrt:
          if (a < 0.0) throw EvalDomainError("sqrt of negative argument " + format_double(a));
          return std::sqrt(a);
        case Func::abs: return std::abs(a);
        case Func::tanh: return std::tanh(a);
        case Func::min: return std::min(a, eval_node(*n.args[1], values));
        case Func::max: return std::max(a, eval_node(*n.args[1], values));
      }
      break;
    }
  }
  throw Error(ErrorCode::validation, "corrupt expression node");
}

int max_slot_of(const ExprNode& n) {
  int m = n.kind == ExprNode::Kind::variable ? n.slot : -1;
  for (const auto& c : n.args) m = std::max(m, max_slot_of(*c));
  return m;
}

bool uses_slot(const ExprNode& n, int slot) {
  if (n.kind == ExprNode::Kind::variable && n.slot == slot) return true;
  return std::any_of(n.args.begin(), n.args.end(),
                     [slot](const auto& c) { return uses_slot(*c, slot); });
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprNode::Kind::literal:
      if (a.value != b.value) return false;
      break;
    case ExprNode::Kind::variable:
      if (a.slot != b.slot) return false;
      break;
    case ExprNode::Kind::unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprNode::Kind::binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprNode::Kind::call:
      if (a.func != b.func) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal_nodes(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

void print_node(const ExprNode& n, const VariableSet& vars, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::literal:
      out += format_double(n.value);
      return;
    case ExprNode::Kind::variable:
      out += vars.name(n.slot);
      return;
    case ExprNode::Kind::unary:
      out += "(-";
      print_node(*n.args[0], vars, out);
      out += ')';
      return;
    case ExprNode::Kind::binary: {
      static constexpr std::array<char, 5> ops{'+', '-', '*', '/', '^'};
      out += '(';
      print_node(*n.args[0], vars, out);
      out += ' ';
      out += ops[static_cast<std::size_t>(n.binary_op)];
      out += ' ';
      print_node(*n.args[1], vars, out);
      out += ')';
      return;
    }
    case ExprNode::Kind::call:
      out += to_string(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.args[i], vars, out);
      }
      out += ')';
      return;
  }
}

// ---------------------------------------------------------------------------
// Recursive descent parser.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so -x^2 is -(x^2) and x^-1 is x^(-1).

enum class Tok { number, name, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

class Parser {
 public:
  Parser(std::string_view src, const VariableSet& vars) : src_(src), vars_(vars) { advance(); }

  Expr parse() {
    Expr e = expr();
    if (tok_.kind != Tok::end) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::ostringstream msg;
    msg << "unexpected ";
    if (tok_.kind == Tok::end) {
      msg << "end of input";
    } else {
      msg << '\'' << tok_.text << '\'';
    }
    msg << " at offset " << tok_.offset << "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << expected[i];
    }
    throw ParseError(tok_.offset, std::move(expected), msg.str());
  }

  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\r' || src_[pos_] == '\n')) {
      ++pos_;
    }
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::end;
      return;
    }
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      tok_.kind = k;
      tok_.text = src_.substr(pos_, 1);
      ++pos_;
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case ',': return single(Tok::comma);
      default: break;
    }
    auto is_digit = [](char ch) { return ch >= '0' && ch <= '9'; };
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      std::size_t end = pos_;
      while (end < src_.size() && is_digit(src_[end])) ++end;
      if (end < src_.size() && src_[end] == '.') {
        ++end;
        while (end < src_.size() && is_digit(src_[end])) ++end;
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
        if (exp < src_.size() && is_digit(src_[exp])) {
          end = exp;
          while (end < src_.size() && is_digit(src_[end])) ++end;
        }
      }
      tok_.kind = Tok::number;
      tok_.text = src_.substr(pos_, end - pos_);
      auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, tok_.number);
      if (ec != std::errc() || ptr != src_.data() + end || !std::isfinite(tok_.number)) {
        throw ParseError(pos_, {"finite number"},
                         "numeric literal '" + std::string(tok_.text) + "' at offset " +
                             std::to_string(pos_) + " is out of range");
      }
      pos_ = end;
      return;
    }
    auto is_alpha = [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
    };
    if (is_alpha(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && (is_alpha(src_[end]) || is_digit(src_[end]))) ++end;
      tok_.kind = Tok::name;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    tok_.kind = Tok::end;
    tok_.text = src_.substr(pos_, 1);
    throw ParseError(pos_, {"number", "name", "operator", "'('", "')'", "','"},
                     "invalid character '" + std::string(tok_.text) + "' at offset " +
                         std::to_string(pos_));
  }

  Expr expr() {
    Expr lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = Expr::binary(op, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = Expr::binary(op, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return Expr::unary(UnaryOp::neg, unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (tok_.kind == Tok::caret) {
      advance();
      return Expr::binary(BinaryOp::pow, base, unary());
    }
    return base;
  }

  Expr primary() {
    switch (tok_.kind) {
      case Tok::number: {
        const double v = tok_.number;
        advance();
        return Expr::constant(v);
      }
      case Tok::lparen: {
        advance();
        Expr inner = expr();
        if (tok_.kind != Tok::rparen) fail({"')'"});
        advance();
        return inner;
      }
      case Tok::name: {
        const Token name = tok_;
        advance();
        if (const FuncInfo* f = find_func(name.text)) {
          if (tok_.kind != Tok::lparen) fail({"'('"});
          advance();
          std::vector<Expr> args;
          args.push_back(expr());
          while (tok_.kind == Tok::comma) {
            advance();
            args.push_back(expr());
          }
          if (tok_.kind != Tok::rparen) {
            fail(static_cast<int>(args.size()) < f->arity ? std::vector<std::string>{"','"}
                                                          : std::vector<std::string>{"')'"});
          }
          if (static_cast<int>(args.size()) != f->arity) {
            throw ParseError(name.offset, {std::to_string(f->arity) + " argument(s)"},
                             std::string(f->name) + " at offset " +
                                 std::to_string(name.offset) + " takes " +
                                 std::to_string(f->arity) + " argument(s), got " +
                                 std::to_string(args.size()));
          }
          advance();
          return Expr::call(f->func, std::move(args));
        }
        if (name.text == "pi") return Expr::constant(std::numbers::pi);
        const int slot = vars_.find(name.text);
        if (slot < 0) {
          std::vector<std::string> expected;
          for (std::size_t i = 0; i < vars_.size(); ++i) expected.push_back(vars_.name(static_cast<int>(i)));
          for (const auto& f : kFuncs) expected.emplace_back(f.name);
          expected.emplace_back("pi");
          throw ParseError(name.offset, std::move(expected),
                           "unknown name '" + std::string(name.text) + "' at offset " +
                               std::to_string(name.offset));
        }
        return Expr::variable(slot);
      }
      default:
        fail({"number", "name", "'('", "'-'"});
    }
  }

  std::string_view src_;
  const VariableSet& vars_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace

std::string_view to_string(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

int arity(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.arity;
  }
  return 0;
}

const VariableSet& VariableSet::spatial() {
  static const VariableSet vars({"x", "y"});
  return vars;
}

int VariableSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::literal;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int slot) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::variable;
  n->slot = slot;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::unary;
  n->unary_op = op;
  n->args.push_back(std::move(operand.root_));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::binary;
  n->binary_op = op;
  n->args.push_back(std::move(lhs.root_));
  n->args.push_back(std::move(rhs.root_));
  return Expr(std::move(n));
}

Expr Expr::call(Func f, std::vector<Expr> args) {
  if (static_cast<int>(args.size()) != arity(f)) {
    throw Error(ErrorCode::validation, std::string(elcomp::to_string(f)) + ": wrong argument count");
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::call;
  n->func = f;
  for (auto& a : args) n->args.push_back(std::move(a.root_));
  return Expr(std::move(n));
}

double Expr::eval(std::span<const double> values) const { return eval_node(*root_, values); }

bool Expr::uses(int slot) const { return uses_slot(*root_, slot); }

int Expr::max_slot() const { return max_slot_of(*root_); }

std::string Expr::to_string(const VariableSet& vars) const {
  std::string out;
  print_node(*root_, vars, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(*a.root_, *b.root_); }

Expr parse_expr(std::string_view src, const VariableSet& vars) {
  Parser parser(src, vars);
  return parser.parse();
}

double eval_expr(const Expr& e, std::span<const double> point) {
  if (e.max_slot() >= static_cast<int>(point.size())) {
    throw Error(ErrorCode::dim_mismatch, "expression uses more coordinates than the point has");
  }
  return e.eval(point);
}

void validate_spatial(const Expr& e, int dim) {
  if (e.max_slot() >= dim) {
    throw Error(ErrorCode::validation, "expression '" + e.to_string() + "' uses variable '" +
                                           VariableSet::spatial().name(e.max_slot()) +
                                           "' in a " + std::to_string(dim) + "D problem");
  }
}

SampledField sample_field(const Expr& e, const Grid& grid) {
  validate_spatial(e, grid.dim());
  SampledField field;
  field.grid_id = grid.id();
  field.values.resize(grid.node_count());
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto p = grid.point(node);
    try {
      field.values[node] = e.eval(std::span<const double>(p.data(), static_cast<std::size_t>(grid.dim())));
    } catch (const EvalDomainError& err) {
      std::ostringstream msg;
      msg << err.what() << " at node " << node << " (x=" << p[0];
      if (grid.dim() == 2) msg << ", y=" << p[1];
      msg << ")";
      throw EvalDomainError(msg.str());
    }
  }
  return field;
}

}  // namespace elcomp
