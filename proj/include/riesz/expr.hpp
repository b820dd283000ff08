#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/interval_sets.hpp"

// A small expression language in one variable x for user-supplied continuous
// functions:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' uint)?
//   atom   := number | 'x' | func '(' expr (',' expr)? ')' | '(' expr ')' | '-' atom
//   func   := sin | cos | exp | abs | sqrt | min | max
namespace riesz::expr {

enum class BinaryOp { add, sub, mul, div };
enum class Function { sin, cos, exp, abs, sqrt, min, max };

std::string_view name(Function fn);
int arity(Function fn);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value = 0.0;
};
struct Variable {};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op = BinaryOp::add;
  NodePtr lhs;
  NodePtr rhs;
};
struct Power {
  NodePtr base;
  unsigned exponent = 0;
};
struct Call {
  Function fn = Function::sin;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Number, Variable, Negate, Binary, Power, Call> kind;
};

NodePtr number(double value);
NodePtr variable();
NodePtr negate(NodePtr operand);
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr power(NodePtr base, unsigned exponent);
NodePtr call(Function fn, std::vector<NodePtr> args);

bool structurally_equal(const Node& a, const Node& b);

class ParseError : public DomainError {
 public:
  ParseError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

// Division by zero, a negative sqrt argument or any non-finite intermediate.
class EvalError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline constexpr unsigned kMaxExponent = 1024;

/// Throws ParseError carrying the offset of the first offending character.
NodePtr parse(std::string_view source);

/// Fully parenthesized form; parse(print(n)) is structurally equal to n.
std::string print(const Node& node);

/// A parsed expression compiled to a postfix program. Immutable; copies share
/// the program.
class Expression {
 public:
  static Expression parse(std::string_view source);
  explicit Expression(NodePtr root);

  double operator()(double x) const;

  const NodePtr& ast() const { return root_; }
  const std::string& source() const { return source_; }

  struct Instruction;

 private:
  NodePtr root_;
  std::string source_;
  std::shared_ptr<const std::vector<Instruction>> program_;
  std::size_t stack_depth_ = 0;
};

/// Random continuous probe on the hull: a polynomial of degree <= 6 in the
/// hull-normalized variable, optionally plus bounded sin/cos/abs terms.
/// Never uses division or sqrt, so it evaluates finitely everywhere.
NodePtr random_probe(std::mt19937_64& rng, ClosedInterval hull);

/// Random tree over the full grammar (division included), for parser and
/// evaluator tests. Literals are nonnegative; signs come from Negate nodes.
NodePtr random_ast(std::mt19937_64& rng, int max_depth);

}  // namespace riesz::expr
