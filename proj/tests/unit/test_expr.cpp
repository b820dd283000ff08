#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "riesz/expr.hpp"

using namespace riesz;
using namespace riesz::expr;

namespace {

// Direct recursive interpretation of the tree; nullopt where evaluation must fail.
std::optional<double> interpret(const Node& node, double x) {
  struct Walk {
    double x;
    std::optional<double> operator()(const Number& n) const { return n.value; }
    std::optional<double> operator()(const Variable&) const { return x; }
    std::optional<double> operator()(const Negate& n) const {
      auto v = interpret(*n.operand, x);
      if (!v) return std::nullopt;
      return -*v;
    }
    std::optional<double> operator()(const Binary& b) const {
      auto l = interpret(*b.lhs, x);
      auto r = interpret(*b.rhs, x);
      if (!l || !r) return std::nullopt;
      double out = 0.0;
      switch (b.op) {
        case BinaryOp::add: out = *l + *r; break;
        case BinaryOp::sub: out = *l - *r; break;
        case BinaryOp::mul: out = *l * *r; break;
        case BinaryOp::div:
          if (*r == 0.0) return std::nullopt;
          out = *l / *r;
          break;
      }
      return check(out);
    }
    std::optional<double> operator()(const Power& p) const {
      auto b = interpret(*p.base, x);
      if (!b) return std::nullopt;
      // Square-and-multiply from the low bit, the documented evaluation order.
      double acc = 1.0, sq = *b;
      for (unsigned e = p.exponent; e != 0; e >>= 1) {
        if (e & 1u) acc *= sq;
        if (e > 1) sq *= sq;
      }
      return check(acc);
    }
    std::optional<double> operator()(const Call& c) const {
      std::vector<double> a;
      for (const auto& arg : c.args) {
        auto v = interpret(*arg, x);
        if (!v) return std::nullopt;
        a.push_back(*v);
      }
      switch (c.fn) {
        case Function::sin: return check(std::sin(a[0]));
        case Function::cos: return check(std::cos(a[0]));
        case Function::exp: return check(std::exp(a[0]));
        case Function::abs: return std::fabs(a[0]);
        case Function::sqrt:
          if (a[0] < 0.0) return std::nullopt;
          return std::sqrt(a[0]);
        case Function::min: return a[1] < a[0] ? a[1] : a[0];
        case Function::max: return a[0] < a[1] ? a[1] : a[0];
      }
      return std::nullopt;
    }
    static std::optional<double> check(double v) {
      if (!std::isfinite(v)) return std::nullopt;
      return v;
    }
  };
  return std::visit(Walk{x}, node.kind);
}

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("RIESZ_TEST_DATA");
  return std::string(dir ? dir : RIESZ_TEST_DATA_DEFAULT) + "/" + name;
}

struct CorpusRow {
  std::string kind, source, x, expected;
  int line = 0;
};

std::vector<CorpusRow> load_corpus() {
  std::ifstream in(data_path("expr_corpus.tsv"));
  std::vector<CorpusRow> rows;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() != 4) ADD_FAILURE() << "malformed corpus line " << n;
    else rows.push_back({cols[0], cols[1], cols[2], cols[3], n});
  }
  return rows;
}

}  // namespace

TEST(Parse, Examples) {
  EXPECT_EQ(Expression::parse("2+3*x")(2.0), 8.0);
  try {
    parse("2+*3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_NO_THROW(parse("max(0, 1 - 4*abs(x-0.5))"));
}

TEST(Eval, Examples) {
  EXPECT_EQ(Expression::parse("x^2 + sin(x)")(0.0), 0.0);
  EXPECT_EQ(Expression::parse("abs(x-1)")(0.25), 0.75);
  EXPECT_THROW(Expression::parse("1/x")(0.0), EvalError);
}

TEST(Parse, ErrorPositionNeverPastInputEnd) {
  for (const char* src : {"", "(", "x+", "sin(", "min(x,", "2^", "x)", "3 x", "#"}) {
    try {
      parse(src);
      ADD_FAILURE() << "accepted '" << src << "'";
    } catch (const ParseError& e) {
      EXPECT_LE(e.position(), std::string_view(src).size() + 1) << src;
    }
  }
}

TEST(Parse, GoldenCorpus) {
  const auto rows = load_corpus();
  ASSERT_EQ(rows.size(), 40u);
  for (const auto& r : rows) {
    SCOPED_TRACE("corpus line " + std::to_string(r.line) + ": " + r.source);
    if (r.kind == "value") {
      const double expected = std::strtod(r.expected.c_str(), nullptr);
      const double got = Expression::parse(r.source)(std::strtod(r.x.c_str(), nullptr));
      EXPECT_EQ(std::memcmp(&got, &expected, sizeof got), 0) << std::hexfloat << got << " vs " << expected;
    } else if (r.kind == "eval_error") {
      const auto e = Expression::parse(r.source);
      EXPECT_THROW(e(std::strtod(r.x.c_str(), nullptr)), EvalError);
    } else if (r.kind == "parse_error") {
      try {
        parse(r.source);
        ADD_FAILURE() << "accepted";
      } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), std::stoul(r.expected));
      }
    } else if (r.kind == "tree") {
      EXPECT_EQ(print(*parse(r.source)), r.expected);
    } else {
      ADD_FAILURE() << "unknown row kind " << r.kind;
    }
  }
}

TEST(Print, ParsePrintFixpoint) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 1000; ++i) {
    const NodePtr a = random_ast(rng, 6);
    const std::string text = print(*a);
    const NodePtr b = parse(text);
    ASSERT_TRUE(structurally_equal(*a, *b)) << text;
    ASSERT_EQ(print(*b), text);
  }
}

TEST(Eval, AgreesWithTreeWalk) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  int evaluated = 0;
  for (int i = 0; i < 1000; ++i) {
    const NodePtr a = random_ast(rng, 5);
    const Expression e(a);
    const double x = xs(rng);
    const auto want = interpret(*a, x);
    if (!want) {
      EXPECT_THROW(e(x), EvalError) << print(*a) << " at " << x;
      continue;
    }
    ++evaluated;
    const double got = e(x);
    EXPECT_EQ(got, *want) << print(*a) << " at " << x;
  }
  EXPECT_GT(evaluated, 500);
}

TEST(Eval, ExpressionsAreSharedAndPure) {
  const auto e = Expression::parse("sin(3*x) + x^2");
  const auto copy = e;
  EXPECT_EQ(e(0.7), copy(0.7));
  EXPECT_EQ(e(0.7), e(0.7));
  EXPECT_EQ(copy.source(), "sin(3*x) + x^2");
}

TEST(Generator, ProbesParseAndEvaluateFinitely) {
  std::mt19937_64 rng(73);
  for (const ClosedInterval hull : {ClosedInterval{0, 1}, ClosedInterval{-3, 5}, ClosedInterval{100, 101}}) {
    for (int i = 0; i < 300; ++i) {
      const NodePtr p = random_probe(rng, hull);
      const Expression e = Expression::parse(print(*p));
      for (int j = 0; j <= 64; ++j) {
        const double x = hull.lo + (hull.hi - hull.lo) * j / 64.0;
        const double v = e(x);
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_LT(std::abs(v), 1e6);
      }
    }
  }
}

TEST(Generator, ProbesAvoidDivisionAndSqrt) {
  std::mt19937_64 rng(74);
  for (int i = 0; i < 200; ++i) {
    const std::string text = print(*random_probe(rng, {0, 1}));
    EXPECT_EQ(text.find('/'), std::string::npos) << text;
    EXPECT_EQ(text.find("sqrt"), std::string::npos) << text;
  }
}

TEST(Parse, ExponentBounds) {
  EXPECT_NO_THROW(parse("x^1024"));
  EXPECT_THROW(parse("x^1025"), ParseError);
  EXPECT_EQ(Expression::parse("2^10")(0.0), 1024.0);
}

TEST(Parse, WhitespaceInsensitive) {
  EXPECT_TRUE(structurally_equal(*parse("\tmin( x ,\n1 )*2 "), *parse("min(x,1)*2")));
}
