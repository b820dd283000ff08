#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz/expr.hpp"
#include "riesz/functionals.hpp"
#include "riesz/interval_sets.hpp"
#include "riesz/ls_measure.hpp"
#include "riesz/monotone.hpp"

namespace riesz::cli {

using nlohmann::json;

/// A problem with the config file. pointer is a JSON pointer into the
/// document ("" for the whole file); line/column are filled in when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t inner_offset = 0;  // position inside a string value, e.g. an expression

 private:
  std::string pointer_;
};

/// Byte offset of every value in the document, keyed by JSON pointer.
class SourceMap {
 public:
  static SourceMap build(const std::string& text);

  /// 1-based (line, column) of the value at pointer, falling back to the
  /// nearest recorded ancestor.
  std::optional<std::pair<std::size_t, std::size_t>> locate(const std::string& pointer) const;

 private:
  std::map<std::string, std::size_t> offsets_;
  std::vector<std::size_t> line_starts_;
};

struct Document {
  json root;
  SourceMap map;
};

/// Parses JSON text; syntax errors become ConfigError with line and column.
Document parse_document(const std::string& text);

struct ExtendSpec {
  std::string mode;  // "linear", "urysohn" or "indicator"
  std::vector<ClosedInterval> far;
  double k = 0.0;
};

struct NamedSet {
  std::string label;
  BorelSetDesc set;
};

/// Every section present in the document, built and validated eagerly.
struct ProblemConfig {
  json raw;
  ClosedInterval hull{0.0, 1.0};
  CompactSet k = make_compact({{0.0, 1.0}}, {0.0, 1.0});  // the whole hull when compact_set is absent
  bool has_compact_set = false;
  std::optional<MonotoneFn> alpha;
  std::optional<std::vector<FunctionalPart>> functional;
  std::optional<expr::Expression> f;
  std::vector<NamedSet> sets;
  std::vector<double> points;
  std::optional<ExtendSpec> extend;
  double tol = 1e-10;
  double recover_tol = 1e-4;  // stopping rule for recover_cdf
};

ProblemConfig load_config(const json& root);

/// FNV-1a over the canonical serialization of everything that determines a
/// report.
std::uint64_t inputs_digest(const std::string& command, const json& config, double tol, std::uint64_t seed);

}  // namespace riesz::cli
