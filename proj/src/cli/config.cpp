#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <set>

#include "riesz/errors.hpp"

namespace riesz::cli {
namespace {

// Character iterator that records how far the parser has read.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, const char* base, std::size_t* mark) : p_(p), base_(base), mark_(mark) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    *mark_ = static_cast<std::size_t>(p_ - base_);
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p_ != b.p_; }

 private:
  const char* p_;
  const char* base_;
  std::size_t* mark_;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class OffsetRecorder : public json::json_sax_t {
 public:
  OffsetRecorder(const std::string& text, const std::size_t* mark, std::map<std::string, std::size_t>& out)
      : text_(text), mark_(mark), out_(out) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }

  bool start_object(std::size_t) override {
    record();
    stack_.push_back({false, 0, {}});
    last_ = *mark_;
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    last_ = *mark_;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override {
    record();
    stack_.push_back({true, 0, {}});
    last_ = *mark_;
    return true;
  }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool is_array;
    std::size_t index;
    std::string key;
  };

  std::string current_pointer() const {
    std::string out;
    for (const auto& f : stack_) out += "/" + (f.is_array ? std::to_string(f.index) : escape_token(f.key));
    return out;
  }

  // The value starts at the first character after the previous event that is
  // not whitespace or punctuation.
  void record() {
    std::size_t pos = last_;
    while (pos < text_.size() && std::string_view(" \t\r\n:,]}").find(text_[pos]) != std::string_view::npos) ++pos;
    out_.emplace(current_pointer(), pos);
  }

  void advance() {
    if (!stack_.empty() && stack_.back().is_array) ++stack_.back().index;
    last_ = *mark_;
  }

  bool scalar() {
    record();
    advance();
    return true;
  }

  bool close() {
    stack_.pop_back();
    advance();
    return true;
  }

  const std::string& text_;
  const std::size_t* mark_;
  std::map<std::string, std::size_t>& out_;
  std::vector<Frame> stack_;
  std::size_t last_ = 0;
};

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + escape_token(key); }
std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

void check_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(child(ptr, key), "unknown key '" + key + "'");
    }
  }
}

const json& require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  return j;
}

const json& require_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  return j;
}

const json& member(const json& j, const std::string& ptr, const char* key) {
  if (!j.contains(key)) throw ConfigError(ptr, std::string("missing required key '") + key + "'");
  return j.at(key);
}

double number_at(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "number must be finite");
  return v;
}

int integer_at(const json& j, const std::string& ptr, int lo, int hi) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) {
    throw ConfigError(ptr, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

ClosedInterval interval_at(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(ptr, "expected a pair [lo, hi]");
  const ClosedInterval out{number_at(j[0], child(ptr, 0)), number_at(j[1], child(ptr, 1))};
  if (!(out.lo <= out.hi)) throw ConfigError(ptr, "interval needs lo <= hi");
  return out;
}

std::vector<ClosedInterval> interval_list_at(const json& j, const std::string& ptr) {
  require_array(j, ptr);
  std::vector<ClosedInterval> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(interval_at(j[i], child(ptr, i)));
  return out;
}

void inside_hull(ClosedInterval c, ClosedInterval hull, const std::string& ptr) {
  if (!hull.contains(c)) {
    throw ConfigError(ptr, "[" + fmt(c.lo) + ", " + fmt(c.hi) + "] leaves the hull [" + fmt(hull.lo) + ", " +
                               fmt(hull.hi) + "]");
  }
}

CompactSet compact_at(const json& j, const std::string& ptr, ClosedInterval hull) {
  if (j.is_object()) {
    check_keys(j, ptr, {"cantor"});
    const int depth = integer_at(member(j, ptr, "cantor"), child(ptr, "cantor"), 0, kMaxCantorDepth);
    return cantor_approx(depth, hull);
  }
  const auto parts = interval_list_at(j, ptr);
  if (parts.empty()) throw ConfigError(ptr, "compact set needs at least one interval");
  for (std::size_t i = 0; i < parts.size(); ++i) inside_hull(parts[i], hull, child(ptr, i));
  return make_compact(parts, hull);
}

template <class Fn>
auto attempt(const std::string& ptr, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const expr::ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(ptr, e.what());
  } catch (const NumericError& e) {
    throw ConfigError(ptr, e.what());
  }
}

expr::Expression expression_at(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected an expression string");
  try {
    return expr::Expression::parse(j.get<std::string>());
  } catch (const expr::ParseError& e) {
    ConfigError err(ptr, "expression: expected " + e.expected() + " at offset " + std::to_string(e.position()));
    err.inner_offset = e.position() + 1;  // +1 for the opening quote
    throw err;
  }
}

RealFn as_fn(const expr::Expression& e) {
  return [e](double x) { return e(x); };
}

DensityTerm density_term_at(const json& j, const std::string& ptr, ClosedInterval hull) {
  require_object(j, ptr);
  check_keys(j, ptr, {"expr", "support"});
  const auto rho = expression_at(member(j, ptr, "expr"), child(ptr, "expr"));
  const auto support = interval_at(member(j, ptr, "support"), child(ptr, "support"));
  inside_hull(support, hull, child(ptr, "support"));
  return attempt(ptr, [&] { return DensityTerm::make(as_fn(rho), support, rho.source()); });
}

MonotoneFn alpha_at(const json& j, const std::string& ptr, ClosedInterval hull) {
  require_object(j, ptr);
  check_keys(j, ptr, {"pieces", "atoms", "densities", "devil_staircase", "identity"});

  std::vector<Knot> knots;
  if (j.contains("pieces")) {
    const auto p = child(ptr, "pieces");
    const auto& arr = require_array(j["pieces"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto kp = child(p, i);
      require_object(arr[i], kp);
      check_keys(arr[i], kp, {"x", "y"});
      knots.push_back({number_at(member(arr[i], kp, "x"), child(kp, "x")),
                       number_at(member(arr[i], kp, "y"), child(kp, "y"))});
      attempt(kp, [&] { return MonotoneFn::make(hull, knots); });
    }
  }

  std::vector<Atom> atoms;
  std::vector<std::string> atom_ptrs;
  if (j.contains("atoms")) {
    const auto p = child(ptr, "atoms");
    const auto& arr = require_array(j["atoms"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto ap = child(p, i);
      require_object(arr[i], ap);
      check_keys(arr[i], ap, {"at", "weight", "side"});
      Atom a{number_at(member(arr[i], ap, "at"), child(ap, "at")),
             number_at(member(arr[i], ap, "weight"), child(ap, "weight"))};
      if (arr[i].contains("side")) {
        const auto& s = arr[i]["side"];
        if (s == "right") {
          a.side = AtomSide::right;
        } else if (s == "left") {
          a.side = AtomSide::left;
        } else {
          throw ConfigError(child(ap, "side"), "side must be \"right\" or \"left\"");
        }
      }
      attempt(ap, [&] { return MonotoneFn::make(hull, {}, {a}); });
      atoms.push_back(a);
      atom_ptrs.push_back(ap);
    }
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return atoms[l].at < atoms[r].at; });
    std::vector<Atom> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && atoms[order[i]].at == atoms[order[i - 1]].at) {
        throw ConfigError(atom_ptrs[order[i]], "duplicate atom at " + fmt(atoms[order[i]].at));
      }
      sorted.push_back(atoms[order[i]]);
    }
    atoms = std::move(sorted);
  }

  std::vector<DensityTerm> densities;
  if (j.contains("densities")) {
    const auto p = child(ptr, "densities");
    const auto& arr = require_array(j["densities"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) densities.push_back(density_term_at(arr[i], child(p, i), hull));
  }

  MonotoneFn alpha = attempt(ptr, [&] { return MonotoneFn::make(hull, knots, atoms, densities); });
  if (j.contains("devil_staircase")) {
    const int depth = integer_at(j["devil_staircase"], child(ptr, "devil_staircase"), 0, kMaxCantorDepth);
    alpha = combine(alpha, devil_staircase(depth, hull));
  }
  if (j.contains("identity")) {
    if (!j["identity"].is_boolean()) throw ConfigError(child(ptr, "identity"), "expected true or false");
    if (j["identity"].get<bool>()) alpha = combine(alpha, MonotoneFn::identity(hull));
  }
  return alpha;
}

std::vector<FunctionalPart> functional_at(const json& j, const std::string& ptr, const CompactSet& k) {
  require_object(j, ptr);
  check_keys(j, ptr, {"dirac", "density", "measure_backed"});
  const ClosedInterval hull = k.hull();
  std::vector<FunctionalPart> parts;

  if (j.contains("dirac")) {
    const auto p = child(ptr, "dirac");
    const auto& arr = require_array(j["dirac"], p);
    DiracCombo combo;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto dp = child(p, i);
      require_object(arr[i], dp);
      check_keys(arr[i], dp, {"at", "weight"});
      const WeightedPoint wp{number_at(member(arr[i], dp, "at"), child(dp, "at")),
                             number_at(member(arr[i], dp, "weight"), child(dp, "weight"))};
      attempt(dp, [&] { return PositiveFunctional::make(k, {DiracCombo{{wp}}}); });
      combo.points.push_back(wp);
    }
    if (!combo.points.empty()) parts.emplace_back(std::move(combo));
  }

  if (j.contains("density")) {
    const auto p = child(ptr, "density");
    const json& d = j["density"];
    std::vector<std::pair<const json*, std::string>> items;
    if (d.is_array()) {
      for (std::size_t i = 0; i < d.size(); ++i) items.emplace_back(&d[i], child(p, i));
    } else {
      items.emplace_back(&d, p);
    }
    for (const auto& [item, ip] : items) {
      require_object(*item, ip);
      check_keys(*item, ip, {"expr", "carrier"});
      const auto rho = expression_at(member(*item, ip, "expr"), child(ip, "expr"));
      std::vector<ClosedInterval> carrier = k.parts();
      if (item->contains("carrier")) {
        carrier = interval_list_at((*item)["carrier"], child(ip, "carrier"));
        for (std::size_t c = 0; c < carrier.size(); ++c) {
          if (!k.contains(carrier[c])) {
            throw ConfigError(child(child(ip, "carrier"), c), "carrier [" + fmt(carrier[c].lo) + ", " +
                                                                   fmt(carrier[c].hi) + "] is not inside K");
          }
        }
      }
      parts.emplace_back(attempt(ip, [&] { return DensityPart::make(as_fn(rho), carrier, rho.source()); }));
    }
  }

  if (j.contains("measure_backed")) {
    const auto p = child(ptr, "measure_backed");
    parts.emplace_back(MeasureBacked{LSMeasure(alpha_at(j["measure_backed"], p, hull))});
    attempt(p, [&] { return PositiveFunctional::make(k, {parts.back()}); });
  }

  if (parts.empty()) throw ConfigError(ptr, "functional needs at least one of dirac, density, measure_backed");
  return parts;
}

Interval open_closed_interval(const json& j, const std::string& ptr) {
  check_keys(j, ptr, {"interval", "left_closed", "right_closed"});
  const auto c = interval_at(member(j, ptr, "interval"), child(ptr, "interval"));
  auto flag = [&](const char* key) {
    if (!j.contains(key)) return true;
    if (!j[key].is_boolean()) throw ConfigError(child(ptr, key), "expected true or false");
    return j[key].get<bool>();
  };
  return Interval{c.lo, c.hi, flag("left_closed"), flag("right_closed")};
}

BorelSetDesc set_at(const json& j, const std::string& ptr, const ProblemConfig& cfg) {
  if (j.is_string()) {
    if (j == "K") return cfg.k;
    if (j == "gaps") return gaps(cfg.k);
    if (j == "hull") return Interval::closed(cfg.hull.lo, cfg.hull.hi);
    throw ConfigError(ptr, "named set must be \"K\", \"gaps\" or \"hull\"");
  }
  if (j.is_array()) {
    const auto c = interval_at(j, ptr);
    inside_hull(c, cfg.hull, ptr);
    return Interval::closed(c.lo, c.hi);
  }
  require_object(j, ptr);
  if (j.contains("interval")) {
    const Interval iv = open_closed_interval(j, ptr);
    inside_hull({iv.lo, iv.hi}, cfg.hull, child(ptr, "interval"));
    return iv;
  }
  if (j.contains("union")) {
    check_keys(j, ptr, {"union"});
    const auto p = child(ptr, "union");
    const auto& arr = require_array(j["union"], p);
    std::vector<Interval> items;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto ip = child(p, i);
      if (arr[i].is_array()) {
        const auto c = interval_at(arr[i], ip);
        items.push_back(Interval::closed(c.lo, c.hi));
      } else {
        require_object(arr[i], ip);
        items.push_back(open_closed_interval(arr[i], ip));
      }
      inside_hull({items.back().lo, items.back().hi}, cfg.hull, ip);
    }
    return attempt(p, [&] { return IntervalUnion::make(items); });
  }
  if (j.contains("compact")) {
    check_keys(j, ptr, {"compact"});
    return compact_at(j["compact"], child(ptr, "compact"), cfg.hull);
  }
  if (j.contains("gaps_of")) {
    check_keys(j, ptr, {"gaps_of"});
    return gaps(compact_at(j["gaps_of"], child(ptr, "gaps_of"), cfg.hull));
  }
  throw ConfigError(ptr, "set must be a pair, a name, or an object with interval, union, compact or gaps_of");
}

}  // namespace

SourceMap SourceMap::build(const std::string& text) {
  SourceMap out;
  out.line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') out.line_starts_.push_back(i + 1);
  }
  std::size_t mark = 0;
  OffsetRecorder recorder(text, &mark, out.offsets_);
  const char* base = text.data();
  json::sax_parse(CountingIterator(base, base, &mark), CountingIterator(base + text.size(), base, &mark),
                  &recorder);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> SourceMap::locate(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (auto it = offsets_.find(p); it != offsets_.end()) {
      const auto line = std::upper_bound(line_starts_.begin(), line_starts_.end(), it->second) - line_starts_.begin();
      return std::pair<std::size_t, std::size_t>(line, it->second - line_starts_[line - 1] + 1);
    }
    if (p.empty()) return std::nullopt;
    p.erase(p.rfind('/'));
  }
}

Document parse_document(const std::string& text) {
  Document doc;
  try {
    doc.root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto dash = what.find(": syntax error"); dash != std::string::npos) what = what.substr(dash + 2);
    ConfigError err("", "malformed JSON: " + what);
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    err.line = line;
    err.column = col;
    throw err;
  }
  doc.map = SourceMap::build(text);
  return doc;
}

ProblemConfig load_config(const json& root) {
  require_object(root, "");
  check_keys(root, "", {"hull", "compact_set", "alpha", "functional", "f", "tol", "set", "sets", "points",
                        "extend", "recover_tol"});
  ProblemConfig cfg;
  cfg.raw = root;
  cfg.hull = interval_at(member(root, "", "hull"), "/hull");
  if (!(cfg.hull.lo < cfg.hull.hi)) throw ConfigError("/hull", "hull needs lo < hi");
  cfg.k = make_compact({cfg.hull}, cfg.hull);

  if (root.contains("tol")) {
    cfg.tol = number_at(root["tol"], "/tol");
    if (!(cfg.tol > 0.0)) throw ConfigError("/tol", "tol must be positive");
  }
  if (root.contains("recover_tol")) {
    cfg.recover_tol = number_at(root["recover_tol"], "/recover_tol");
    if (!(cfg.recover_tol > 0.0)) throw ConfigError("/recover_tol", "recover_tol must be positive");
  }
  if (root.contains("compact_set")) {
    cfg.k = compact_at(root["compact_set"], "/compact_set", cfg.hull);
    cfg.has_compact_set = true;
  }
  if (root.contains("alpha")) cfg.alpha = alpha_at(root["alpha"], "/alpha", cfg.hull);
  if (root.contains("functional")) cfg.functional = functional_at(root["functional"], "/functional", cfg.k);
  if (root.contains("f")) cfg.f = expression_at(root["f"], "/f");

  if (root.contains("set") && root.contains("sets")) throw ConfigError("/sets", "give either set or sets, not both");
  if (root.contains("set")) {
    cfg.sets.push_back({root["set"].dump(), set_at(root["set"], "/set", cfg)});
  }
  if (root.contains("sets")) {
    const auto& arr = require_array(root["sets"], "/sets");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      cfg.sets.push_back({arr[i].dump(), set_at(arr[i], child("/sets", i), cfg)});
    }
  }
  if (root.contains("points")) {
    const auto& arr = require_array(root["points"], "/points");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const double x = number_at(arr[i], child("/points", i));
      if (!cfg.hull.contains(x)) throw ConfigError(child("/points", i), "point " + fmt(x) + " lies outside the hull");
      cfg.points.push_back(x);
    }
  }
  if (root.contains("extend")) {
    const json& e = require_object(root["extend"], "/extend");
    check_keys(e, "/extend", {"mode", "F", "k"});
    ExtendSpec spec;
    const json& mode = member(e, "/extend", "mode");
    if (mode != "linear" && mode != "urysohn" && mode != "indicator") {
      throw ConfigError("/extend/mode", "mode must be \"linear\", \"urysohn\" or \"indicator\"");
    }
    spec.mode = mode.get<std::string>();
    if (spec.mode == "urysohn") {
      spec.far = interval_list_at(member(e, "/extend", "F"), "/extend/F");
      for (std::size_t i = 0; i < spec.far.size(); ++i) inside_hull(spec.far[i], cfg.hull, child("/extend/F", i));
      attempt("/extend/F", [&] { return urysohn(cfg.k, spec.far, cfg.hull); });
    }
    if (spec.mode == "indicator") {
      spec.k = number_at(member(e, "/extend", "k"), "/extend/k");
      if (!(spec.k > 0.0)) throw ConfigError("/extend/k", "k must be positive");
    }
    cfg.extend = std::move(spec);
  }
  return cfg;
}

std::uint64_t inputs_digest(const std::string& command, const json& config, double tol, std::uint64_t seed) {
  const std::string canonical = command + "\n" + config.dump() + "\n" + fmt(tol) + "\n" + std::to_string(seed);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace riesz::cli
