#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elcomp {

class Grid;

enum class UnaryOp { neg };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Func { sin, cos, exp, log, sqrt, abs, min, max, tanh };

std::string_view to_string(Func f);
int arity(Func f);

/// Ordered list of variable names an expression may refer to. A variable node
/// stores its slot in this list; evaluation takes one value per slot.
class VariableSet {
 public:
  VariableSet() = default;
  explicit VariableSet(std::vector<std::string> names) : names_(std::move(names)) {}

  /// {x, y}: the coordinates of a coefficient field.
  static const VariableSet& spatial();

  int find(std::string_view name) const;
  const std::string& name(int slot) const { return names_.at(static_cast<std::size_t>(slot)); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

struct ExprNode {
  enum class Kind { literal, variable, unary, binary, call };

  Kind kind = Kind::literal;
  double value = 0.0;
  int slot = -1;
  UnaryOp unary_op = UnaryOp::neg;
  BinaryOp binary_op = BinaryOp::add;
  Func func = Func::sin;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

/// Immutable arithmetic expression tree. Copies share the tree.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value);
  static Expr variable(int slot);
  static Expr unary(UnaryOp op, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Func f, std::vector<Expr> args);

  const ExprNode& node() const { return *root_; }

  /// Evaluates with values[slot] bound to each variable. Throws EvalDomainError
  /// for arguments outside a function's domain or non-finite intermediates.
  double eval(std::span<const double> values) const;

  /// True if any variable node refers to `slot`.
  bool uses(int slot) const;
  int max_slot() const;

  /// Literal constant (no variables)?
  bool is_constant() const { return max_slot() < 0; }

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string(const VariableSet& vars = VariableSet::spatial()) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  std::shared_ptr<const ExprNode> root_;
};

/// Parses `src` against the given variable set. `pi` is accepted as a named
/// literal. Throws ParseError carrying the byte offset and the expected tokens.
Expr parse_expr(std::string_view src, const VariableSet& vars = VariableSet::spatial());

/// Evaluates a spatial expression at `point` (x, or x and y).
double eval_expr(const Expr& e, std::span<const double> point);

/// Rejects variables the grid dimension does not provide (y in 1D).
void validate_spatial(const Expr& e, int dim);

struct SampledField {
  std::string grid_id;
  std::vector<double> values;
};

/// Samples `e` at every grid node in canonical order (x fastest).
SampledField sample_field(const Expr& e, const Grid& grid);

}  // namespace elcomp
