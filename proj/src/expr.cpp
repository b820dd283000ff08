#include "riesz/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace riesz::expr {

std::string_view name(Function fn) {
  switch (fn) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::abs: return "abs";
    case Function::sqrt: return "sqrt";
    case Function::min: return "min";
    case Function::max: return "max";
  }
  return "?";
}

int arity(Function fn) { return (fn == Function::min || fn == Function::max) ? 2 : 1; }

NodePtr number(double value) { return std::make_shared<const Node>(Node{Number{value}}); }
NodePtr variable() { return std::make_shared<const Node>(Node{Variable{}}); }
NodePtr negate(NodePtr operand) { return std::make_shared<const Node>(Node{Negate{std::move(operand)}}); }
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}
NodePtr power(NodePtr base, unsigned exponent) {
  return std::make_shared<const Node>(Node{Power{std::move(base), exponent}});
}
NodePtr call(Function fn, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{Call{fn, std::move(args)}});
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind.index() != b.kind.index()) return false;
  struct Eq {
    const Node& other;
    bool operator()(const Number& n) const {
      const double v = std::get<Number>(other.kind).value;
      return n.value == v || (std::isnan(n.value) && std::isnan(v));
    }
    bool operator()(const Variable&) const { return true; }
    bool operator()(const Negate& n) const {
      return structurally_equal(*n.operand, *std::get<Negate>(other.kind).operand);
    }
    bool operator()(const Binary& n) const {
      const auto& o = std::get<Binary>(other.kind);
      return n.op == o.op && structurally_equal(*n.lhs, *o.lhs) && structurally_equal(*n.rhs, *o.rhs);
    }
    bool operator()(const Power& n) const {
      const auto& o = std::get<Power>(other.kind);
      return n.exponent == o.exponent && structurally_equal(*n.base, *o.base);
    }
    bool operator()(const Call& n) const {
      const auto& o = std::get<Call>(other.kind);
      if (n.fn != o.fn || n.args.size() != o.args.size()) return false;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (!structurally_equal(*n.args[i], *o.args[i])) return false;
      }
      return true;
    }
  };
  return std::visit(Eq{b}, a.kind);
}

ParseError::ParseError(std::size_t position, std::string expected)
    : DomainError("parse error at offset " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end, invalid };

struct Token {
  Tok kind = Tok::end;
  std::size_t pos = 0;
  std::string_view text;
  double value = 0.0;
  bool integral = false;  // digits only, no '.' or exponent
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' || src_[i_] == '\r')) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= src_.size()) return t;
    const char c = src_[i_];
    if (is_digit(c) || (c == '.' && i_ + 1 < src_.size() && is_digit(src_[i_ + 1]))) return lex_number();
    if (is_alpha(c)) {
      std::size_t j = i_;
      while (j < src_.size() && (is_alpha(src_[j]) || is_digit(src_[j]))) ++j;
      t.kind = Tok::ident;
      t.text = src_.substr(i_, j - i_);
      i_ = j;
      return t;
    }
    ++i_;
    t.text = src_.substr(t.pos, 1);
    switch (c) {
      case '+': t.kind = Tok::plus; break;
      case '-': t.kind = Tok::minus; break;
      case '*': t.kind = Tok::star; break;
      case '/': t.kind = Tok::slash; break;
      case '^': t.kind = Tok::caret; break;
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case ',': t.kind = Tok::comma; break;
      default: t.kind = Tok::invalid; break;
    }
    return t;
  }

 private:
  Token lex_number() {
    Token t;
    t.kind = Tok::number;
    t.pos = i_;
    std::size_t j = i_;
    bool integral = true;
    while (j < src_.size() && is_digit(src_[j])) ++j;
    if (j < src_.size() && src_[j] == '.') {
      integral = false;
      ++j;
      while (j < src_.size() && is_digit(src_[j])) ++j;
    }
    if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && is_digit(src_[k])) {
        integral = false;
        while (k < src_.size() && is_digit(src_[k])) ++k;
        j = k;
      }
    }
    t.text = src_.substr(i_, j - i_);
    t.integral = integral;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
    if (res.ec != std::errc{} || !std::isfinite(t.value)) t.kind = Tok::invalid;
    i_ = j;
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

constexpr const char* kAtomExpected = "number, 'x', function call, '(' or '-'";

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (cur_.kind != Tok::end) fail("operator or end of input");
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }
  [[noreturn]] void fail(const std::string& expected) const { throw ParseError(cur_.pos, expected); }
  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(what);
    advance();
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const BinaryOp op = cur_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = binary(op, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const BinaryOp op = cur_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    if (cur_.kind != Tok::caret) return base;
    advance();
    if (cur_.kind != Tok::number || !cur_.integral || cur_.value > kMaxExponent) {
      fail("nonnegative integer exponent (at most " + std::to_string(kMaxExponent) + ")");
    }
    const auto exponent = static_cast<unsigned>(cur_.value);
    advance();
    return power(base, exponent);
  }

  NodePtr parse_atom() {
    switch (cur_.kind) {
      case Tok::number: {
        const double v = cur_.value;
        advance();
        return number(v);
      }
      case Tok::minus:
        advance();
        return negate(parse_atom());
      case Tok::lparen: {
        advance();
        NodePtr inner = parse_expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident:
        return parse_identifier();
      default:
        fail(kAtomExpected);
    }
  }

  NodePtr parse_identifier() {
    const std::string_view id = cur_.text;
    if (id == "x") {
      advance();
      return variable();
    }
    static constexpr std::array kFunctions = {Function::sin, Function::cos, Function::exp, Function::abs,
                                              Function::sqrt, Function::min, Function::max};
    for (Function fn : kFunctions) {
      if (name(fn) != id) continue;
      advance();
      expect(Tok::lparen, "'('");
      std::vector<NodePtr> args;
      args.push_back(parse_expr());
      if (arity(fn) == 2) {
        expect(Tok::comma, "','");
        args.push_back(parse_expr());
      }
      expect(Tok::rparen, "')'");
      return call(fn, std::move(args));
    }
    fail("'x' or a function name (sin, cos, exp, abs, sqrt, min, max)");
  }

  Lexer lexer_;
  Token cur_;
};

// ---------------------------------------------------------------------------
// Printer

void print_to(std::string& out, const Node& node);

void print_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void print_to(std::string& out, const Node& node) {
  struct Printer {
    std::string& out;
    void operator()(const Number& n) const { print_number(out, n.value); }
    void operator()(const Variable&) const { out += 'x'; }
    void operator()(const Negate& n) const {
      out += '-';
      print_to(out, *n.operand);
    }
    void operator()(const Binary& n) const {
      static constexpr std::array kOps = {" + ", " - ", " * ", " / "};
      out += '(';
      print_to(out, *n.lhs);
      out += kOps[static_cast<std::size_t>(n.op)];
      print_to(out, *n.rhs);
      out += ')';
    }
    void operator()(const Power& n) const {
      out += '(';
      print_to(out, *n.base);
      out += '^';
      out += std::to_string(n.exponent);
      out += ')';
    }
    void operator()(const Call& n) const {
      out += name(n.fn);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i > 0) out += ", ";
        print_to(out, *n.args[i]);
      }
      out += ')';
    }
  };
  std::visit(Printer{out}, node.kind);
}

}  // namespace

NodePtr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string print(const Node& node) {
  std::string out;
  print_to(out, node);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

enum class OpCode : std::uint8_t { constant, x, neg, add, sub, mul, div, pow, sin, cos, exp, abs, sqrt, min, max };

struct Expression::Instruction {
  OpCode op;
  unsigned exponent = 0;
  double value = 0.0;
};

namespace {

std::size_t compile(const Node& node, std::vector<Expression::Instruction>& prog, std::size_t depth) {
  struct Compiler {
    std::vector<Expression::Instruction>& prog;
    std::size_t depth;
    std::size_t operator()(const Number& n) const {
      prog.push_back({OpCode::constant, 0, n.value});
      return depth + 1;
    }
    std::size_t operator()(const Variable&) const {
      prog.push_back({OpCode::x});
      return depth + 1;
    }
    std::size_t operator()(const Negate& n) const {
      const auto d = compile(*n.operand, prog, depth);
      prog.push_back({OpCode::neg});
      return d;
    }
    std::size_t operator()(const Binary& n) const {
      const auto dl = compile(*n.lhs, prog, depth);
      const auto dr = compile(*n.rhs, prog, depth + 1);
      static constexpr std::array kCodes = {OpCode::add, OpCode::sub, OpCode::mul, OpCode::div};
      prog.push_back({kCodes[static_cast<std::size_t>(n.op)]});
      return std::max(dl, dr);
    }
    std::size_t operator()(const Power& n) const {
      const auto d = compile(*n.base, prog, depth);
      prog.push_back({OpCode::pow, n.exponent});
      return d;
    }
    std::size_t operator()(const Call& n) const {
      std::size_t d = depth;
      for (std::size_t i = 0; i < n.args.size(); ++i) d = std::max(d, compile(*n.args[i], prog, depth + i));
      static constexpr std::array kCodes = {OpCode::sin, OpCode::cos, OpCode::exp, OpCode::abs,
                                            OpCode::sqrt, OpCode::min, OpCode::max};
      prog.push_back({kCodes[static_cast<std::size_t>(n.fn)]});
      return d;
    }
  };
  return std::visit(Compiler{prog, depth}, node.kind);
}

double int_pow(double base, unsigned n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1u) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

[[noreturn]] void eval_fail(const char* what, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at x = " << x;
  throw EvalError(os.str());
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  Expression e(expr::parse(source));
  e.source_ = std::string(source);
  return e;
}

Expression::Expression(NodePtr root) : root_(std::move(root)) {
  if (!root_) throw DomainError("expression needs a root node");
  auto prog = std::make_shared<std::vector<Instruction>>();
  stack_depth_ = compile(*root_, *prog, 0);
  program_ = std::move(prog);
  source_ = print(*root_);
}

double Expression::operator()(double x) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (stack_depth_ > kInline) {
    large.resize(stack_depth_);
    stack = large.data();
  }
  std::size_t top = 0;  // number of live entries
  for (const auto& ins : *program_) {
    double r = 0.0;
    switch (ins.op) {
      case OpCode::constant: stack[top++] = ins.value; continue;
      case OpCode::x: stack[top++] = x; continue;
      case OpCode::neg: stack[top - 1] = -stack[top - 1]; continue;
      case OpCode::add: r = stack[top - 2] + stack[top - 1]; --top; break;
      case OpCode::sub: r = stack[top - 2] - stack[top - 1]; --top; break;
      case OpCode::mul: r = stack[top - 2] * stack[top - 1]; --top; break;
      case OpCode::div:
        if (stack[top - 1] == 0.0) eval_fail("division by zero", x);
        r = stack[top - 2] / stack[top - 1];
        --top;
        break;
      case OpCode::min: r = std::min(stack[top - 2], stack[top - 1]); --top; break;
      case OpCode::max: r = std::max(stack[top - 2], stack[top - 1]); --top; break;
      case OpCode::pow: r = int_pow(stack[top - 1], ins.exponent); break;
      case OpCode::sin: r = std::sin(stack[top - 1]); break;
      case OpCode::cos: r = std::cos(stack[top - 1]); break;
      case OpCode::exp: r = std::exp(stack[top - 1]); break;
      case OpCode::abs: r = std::abs(stack[top - 1]); break;
      case OpCode::sqrt:
        if (stack[top - 1] < 0.0) eval_fail("square root of a negative number", x);
        r = std::sqrt(stack[top - 1]);
        break;
    }
    if (!std::isfinite(r)) eval_fail("expression is not finite", x);
    stack[top - 1] = r;
  }
  return stack[0];
}

// ---------------------------------------------------------------------------
// Generators

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Literal with a random sign, signs carried by Negate.
NodePtr signed_literal(double v) { return v < 0.0 ? negate(number(-v)) : number(v); }

// Rounded to a few digits so printed probes stay readable.
double coefficient(std::mt19937_64& rng, double bound) {
  return std::round(uniform(rng, -bound, bound) * 1000.0) / 1000.0;
}

}  // namespace

NodePtr random_probe(std::mt19937_64& rng, ClosedInterval hull) {
  const double centre = 0.5 * (hull.lo + hull.hi);
  const double half = 0.5 * (hull.hi - hull.lo);
  // t = (x - centre) * (1 / half) ranges over [-1, 1].
  const NodePtr t = binary(BinaryOp::mul, binary(BinaryOp::sub, variable(), signed_literal(centre)),
                           number(half > 0.0 ? 1.0 / half : 1.0));
  const int degree = std::uniform_int_distribution<int>(0, 6)(rng);
  NodePtr sum = signed_literal(coefficient(rng, 1.0));
  for (int d = 1; d <= degree; ++d) {
    const NodePtr mono = d == 1 ? t : power(t, static_cast<unsigned>(d));
    sum = binary(BinaryOp::add, sum, binary(BinaryOp::mul, signed_literal(coefficient(rng, 1.0)), mono));
  }
  std::uniform_int_distribution<int> pick(0, 3);
  const int extras = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < extras; ++i) {
    const NodePtr inner = binary(BinaryOp::add, binary(BinaryOp::mul, signed_literal(coefficient(rng, 3.0)), t),
                                 signed_literal(coefficient(rng, 1.0)));
    NodePtr term;
    switch (pick(rng)) {
      case 0: term = call(Function::sin, {inner}); break;
      case 1: term = call(Function::cos, {inner}); break;
      case 2: term = call(Function::abs, {inner}); break;
      default: term = call(Function::max, {number(0.0), inner}); break;
    }
    sum = binary(BinaryOp::add, sum, binary(BinaryOp::mul, signed_literal(coefficient(rng, 1.0)), term));
  }
  return sum;
}

NodePtr random_ast(std::mt19937_64& rng, int max_depth) {
  std::uniform_int_distribution<int> leaf_or_node(0, 9);
  if (max_depth <= 0 || leaf_or_node(rng) < 3) {
    if (leaf_or_node(rng) < 5) return variable();
    // Mix of integers, short decimals and awkward doubles.
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return number(static_cast<double>(std::uniform_int_distribution<int>(0, 9)(rng)));
      case 1: return number(std::round(uniform(rng, 0.0, 10.0) * 100.0) / 100.0);
      default: return number(uniform(rng, 0.0, 1e3) * std::pow(10.0, std::uniform_int_distribution<int>(-8, 8)(rng)));
    }
  }
  const int d = max_depth - 1;
  switch (std::uniform_int_distribution<int>(0, 8)(rng)) {
    case 0: return negate(random_ast(rng, d));
    case 1: return binary(BinaryOp::add, random_ast(rng, d), random_ast(rng, d));
    case 2: return binary(BinaryOp::sub, random_ast(rng, d), random_ast(rng, d));
    case 3: return binary(BinaryOp::mul, random_ast(rng, d), random_ast(rng, d));
    case 4: return binary(BinaryOp::div, random_ast(rng, d), random_ast(rng, d));
    case 5: return power(random_ast(rng, d), std::uniform_int_distribution<unsigned>(0, 4)(rng));
    case 6: {
      static constexpr std::array kUnary = {Function::sin, Function::cos, Function::exp, Function::abs, Function::sqrt};
      return call(kUnary[std::uniform_int_distribution<std::size_t>(0, kUnary.size() - 1)(rng)], {random_ast(rng, d)});
    }
    default:
      return call(std::uniform_int_distribution<int>(0, 1)(rng) ? Function::min : Function::max,
                  {random_ast(rng, d), random_ast(rng, d)});
  }
}

}  // namespace riesz::expr
