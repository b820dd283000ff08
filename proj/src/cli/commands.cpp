#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "riesz/extension.hpp"
#include "riesz/functionals.hpp"
#include "riesz/parallel.hpp"
#include "riesz/stieltjes.hpp"

namespace riesz::cli {
namespace {

constexpr int kProbeCount = 8;
constexpr int kClosedSetCount = 5;
constexpr double kUniquenessTol = 1e-4;

const MonotoneFn& need_alpha(const ProblemConfig& cfg) {
  if (!cfg.alpha) throw ConfigError("", "this command needs an 'alpha' section");
  return *cfg.alpha;
}

const expr::Expression& need_f(const ProblemConfig& cfg) {
  if (!cfg.f) throw ConfigError("", "this command needs an 'f' expression");
  return *cfg.f;
}

PositiveFunctional need_functional(const ProblemConfig& cfg) {
  if (cfg.functional) return PositiveFunctional::make(cfg.k, *cfg.functional);
  if (cfg.alpha) {
    try {
      return PositiveFunctional::make(cfg.k, {MeasureBacked{LSMeasure(*cfg.alpha)}});
    } catch (const DomainError& e) {
      throw ConfigError("/alpha", e.what());
    }
  }
  throw ConfigError("", "this command needs a 'functional' or 'alpha' section");
}

RealFn as_fn(const expr::Expression& e) {
  return [e](double x) { return e(x); };
}

Report interval_json(const Interval& iv) { return to_string(iv); }

Report alpha_json(const MonotoneFn& alpha) {
  Report knots = Report::array();
  for (const auto& k : alpha.knots()) knots.push_back({k.x, k.y});
  Report atoms = Report::array();
  for (const auto& a : alpha.atoms()) atoms.push_back({{"at", a.at}, {"weight", a.weight}});
  Report densities = Report::array();
  for (const auto& d : alpha.densities()) {
    densities.push_back({{"label", d.label()}, {"support", {d.support().lo, d.support().hi}}, {"mass", d.mass()}});
  }
  return {{"knots", knots}, {"atoms", atoms}, {"densities", densities}};
}

std::vector<expr::Expression> probes(const ProblemConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<expr::Expression> out;
  if (cfg.f) out.push_back(*cfg.f);
  for (int i = 0; i < kProbeCount; ++i) out.emplace_back(expr::random_probe(rng, cfg.hull));
  return out;
}

// sup |f| over a fine grid plus every place where α concentrates or kinks.
double sup_norm(const RealFn& f, const MonotoneFn& alpha) {
  const auto& h = alpha.hull();
  constexpr int n = 1 << 14;
  double best = 0.0;
  for (int i = 0; i <= n; ++i) best = std::max(best, std::abs(f(h.lo + (h.hi - h.lo) * i / n)));
  for (const auto& a : alpha.atoms()) best = std::max(best, std::abs(f(a.at)));
  for (const auto& k : alpha.knots()) best = std::max(best, std::abs(f(k.x)));
  return best;
}

// The same functional assembled from different pieces: Dirac weights halved
// into two combos, densities halved, measures split into atomic and
// continuous parts.
PositiveFunctional alternate_decomposition(const PositiveFunctional& ell) {
  const ClosedInterval hull = ell.domain().hull();
  std::vector<FunctionalPart> parts;
  for (const auto& part : ell.parts()) {
    if (const auto* d = std::get_if<DiracCombo>(&part)) {
      DiracCombo first, second;
      for (const auto& p : d->points) first.points.push_back({p.at, 0.5 * p.weight});
      for (auto it = d->points.rbegin(); it != d->points.rend(); ++it) {
        second.points.push_back({it->at, it->weight - 0.5 * it->weight});
      }
      parts.emplace_back(std::move(first));
      parts.emplace_back(std::move(second));
    } else if (const auto* dp = std::get_if<DensityPart>(&part)) {
      for (int copy = 0; copy < 2; ++copy) {
        DensityPart half;
        for (const auto& t : dp->terms) {
          const RealFn rho = t.rho();
          half.terms.push_back(DensityTerm::make([rho](double x) { return 0.5 * rho(x); }, t.support(), t.label()));
        }
        parts.emplace_back(std::move(half));
      }
    } else {
      const MonotoneFn& a = std::get<MeasureBacked>(part).mu.alpha();
      if (!a.atoms().empty()) parts.emplace_back(MeasureBacked{LSMeasure(MonotoneFn::make(hull, {}, a.atoms()))});
      parts.emplace_back(MeasureBacked{LSMeasure(MonotoneFn::make(hull, a.knots(), {}, a.densities()))});
    }
  }
  return PositiveFunctional::make(ell.domain(), std::move(parts));
}

CompactSet random_closed_set(std::mt19937_64& rng, ClosedInterval hull) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> at(hull.lo, hull.hi);
  std::vector<ClosedInterval> parts;
  for (int i = count(rng); i > 0; --i) {
    double u = at(rng), v = at(rng);
    if (u > v) std::swap(u, v);
    parts.push_back({u, v});
  }
  return make_compact(parts, hull);
}

struct Identity {
  std::string name;
  bool pass = false;
  bool converged = true;
  Report detail = Report::object();
};

}  // namespace

Outcome integrate(const ProblemConfig& cfg, const RunOptions& opt) {
  const MonotoneFn& alpha = need_alpha(cfg);
  const auto& f = need_f(cfg);
  const auto r = rs_integral(as_fn(f), alpha, opt.tol);
  Outcome out;
  out.outputs = {{"f", f.source()},
                 {"value", r.value},
                 {"error_estimate", r.error_estimate},
                 {"evaluations", r.evaluations},
                 {"variation", total_variation(alpha).value}};
  out.converged = r.converged;
  return out;
}

Outcome measure(const ProblemConfig& cfg, const RunOptions&) {
  if (cfg.sets.empty()) throw ConfigError("", "this command needs a 'set' or 'sets' section");
  const LSMeasure mu = cfg.alpha ? LSMeasure(*cfg.alpha) : represent(need_functional(cfg)).mu;
  Outcome out;
  Report sets = Report::array();
  for (const auto& s : cfg.sets) {
    sets.push_back({{"set", Report::parse(s.label)}, {"mass", measure_set(mu, s.set)}});
  }
  out.outputs = {{"total_mass", mu.total_mass()}, {"sets", sets}};
  return out;
}

Outcome represent(const ProblemConfig& cfg, const RunOptions&) {
  if (!cfg.functional) throw ConfigError("", "this command needs a 'functional' section");
  const PositiveFunctional ell = PositiveFunctional::make(cfg.k, *cfg.functional);
  const Representation rep = represent(ell);
  const GapDecomposition gd = gaps(cfg.k);

  Report gap_list = Report::array();
  double gap_total = 0.0;
  for (const auto& g : gd.gaps) {
    const double m = measure_set(rep.mu, g);
    gap_total += m;
    gap_list.push_back({{"gap", interval_json(g)}, {"mass", m}});
  }
  Outcome out;
  out.outputs = {{"norm", rep.norm},
                 {"variation", total_variation(rep.alpha).value},
                 {"mass_K", measure_set(rep.mu, cfg.k)},
                 {"gap_mass_total", gap_total},
                 {"gaps", gap_list},
                 {"constant_on_gaps", is_constant_on_gaps(rep.alpha, cfg.k)},
                 {"alpha", alpha_json(rep.alpha)}};
  return out;
}

Outcome verify(const ProblemConfig& cfg, const RunOptions& opt) {
  const PositiveFunctional ell = need_functional(cfg);
  const Representation rep = represent(ell);
  const auto fs = probes(cfg, opt.seed);
  const double scale = std::max(1.0, rep.norm);

  std::vector<Identity> results(6);
  parallel_for(results.size(), [&](std::size_t which) {
    Identity& id = results[which];
    switch (which) {
      case 0: {
        id.name = "thm1_norm_eq_variation";
        const auto one = rs_integral([](double) { return 1.0; }, rep.alpha, opt.tol);
        const double v = total_variation(rep.alpha).value;
        double worst_slack = 0.0;
        for (const auto& f : fs) {
          const auto r = rs_integral(as_fn(f), rep.alpha, opt.tol);
          id.converged = id.converged && r.converged;
          worst_slack = std::max(worst_slack, std::abs(r.value) - (sup_norm(as_fn(f), rep.alpha) * v + opt.tol));
        }
        const double gap = std::abs(one.value - v);
        // Densities are integrated to the requested tolerance, jumps and pieces exactly.
        const double limit = std::max(kIdentityTolerance * scale, rep.alpha.densities().empty() ? 0.0 : opt.tol);
        id.pass = gap <= limit && worst_slack <= 0.0;
        id.detail = {{"integral_of_one", one.value}, {"variation", v}, {"difference", gap},
                     {"limit", limit}, {"bound_worst_slack", worst_slack}};
        break;
      }
      case 1: {
        id.name = "thm2_representation";
        const double limit = 2.0 * opt.tol;
        double worst = 0.0;
        for (const auto& f : fs) {
          const double lhs = apply(ell, as_fn(f), opt.tol);
          const auto rhs = lebesgue_integral(as_fn(f), rep.mu, ell.domain(), opt.tol);
          id.converged = id.converged && rhs.converged;
          worst = std::max(worst, std::abs(lhs - rhs.value));
        }
        id.pass = worst <= limit;
        id.detail = {{"probes", fs.size()}, {"max_difference", worst}, {"limit", limit}};
        break;
      }
      case 2: {
        id.name = "thm2_gap_mass";
        const double outside = measure_set(rep.mu, gaps(ell.domain()));
        const double inside = measure_set(rep.mu, ell.domain());
        id.pass = outside <= kIdentityTolerance * scale && std::abs(inside - rep.norm) <= kIdentityTolerance * scale;
        id.detail = {{"gap_mass", outside}, {"mass_K", inside}, {"norm", rep.norm}};
        break;
      }
      case 3: {
        id.name = "prop_isometry";
        const IsometryCheck c = check_isometry(ell);
        id.pass = c.spread() <= 1e-10 * scale;
        id.detail = {{"variation", c.variation}, {"mass_K", c.mass}, {"norm", c.norm}, {"spread", c.spread()}};
        break;
      }
      case 4: {
        id.name = "prop_range";
        std::vector<PiecewiseFunction> restricted;
        for (const auto& f : fs) restricted.push_back(restrict(f, ell.domain()));
        const bool flat = is_constant_on_gaps(rep.alpha, ell.domain());
        double worst = 0.0;
        for (const auto& g : restricted) {
          worst = std::max(worst, std::abs(extension_discrepancy(rep.alpha, ell.domain(), g, opt.tol)));
        }
        const bool factors = factors_through_K(rep.alpha, ell.domain(), restricted, opt.tol);
        id.pass = flat && factors;
        id.detail = {{"constant_on_gaps", flat}, {"factors_through_K", factors}, {"max_discrepancy", worst}};
        break;
      }
      case 5: {
        id.name = "uniqueness";
        const Representation other = represent(alternate_decomposition(ell));
        std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
        std::vector<CompactSet> sets{ell.domain()};
        for (int i = 0; i < kClosedSetCount; ++i) sets.push_back(random_closed_set(rng, cfg.hull));
        bool all_equal = true;
        Report per_set = Report::array();
        double worst_exact = 0.0, worst_oracle = 0.0, k_reached = 0.0;
        for (const auto& c : sets) {
          const auto cmp = compare_on_closed(rep.mu, other.mu, c, kUniquenessTol);
          worst_exact = std::max(worst_exact, std::abs(cmp.exact_mu - cmp.exact_nu));
          worst_oracle = std::max({worst_oracle, std::abs(cmp.oracle_mu - cmp.exact_mu),
                                   std::abs(cmp.oracle_nu - cmp.exact_nu)});
          k_reached = std::max(k_reached, cmp.k_reached);
          all_equal = all_equal && cmp.equal;
          id.converged = id.converged && cmp.oracle_converged;
          Report parts = Report::array();
          for (const auto& p : c.parts()) parts.push_back({p.lo, p.hi});
          per_set.push_back({{"C", parts}, {"exact", cmp.exact_mu}, {"oracle", cmp.oracle_mu}, {"k", cmp.k_reached}});
        }
        id.pass = all_equal && worst_oracle <= kUniquenessTol;
        id.detail = {{"closed_sets", sets.size()}, {"max_exact_difference", worst_exact},
                     {"max_oracle_error", worst_oracle}, {"k_reached", k_reached},
                     {"sets", per_set}};
        break;
      }
    }
  });

  Outcome out;
  Report list = Report::array();
  for (const auto& id : results) {
    list.push_back({{"identity", id.name}, {"pass", id.pass}, {"converged", id.converged}, {"detail", id.detail}});
    out.verified = out.verified && id.pass;
    out.converged = out.converged && id.converged;
  }
  out.outputs = {{"norm", rep.norm}, {"identities", list}};
  return out;
}

Outcome extend(const ProblemConfig& cfg, const RunOptions&) {
  if (!cfg.extend) throw ConfigError("", "this command needs an 'extend' section");
  if (cfg.points.empty()) throw ConfigError("", "this command needs a 'points' list");
  const ExtendSpec& spec = *cfg.extend;
  std::vector<double> values(cfg.points.size());
  Outcome out;
  if (spec.mode == "linear") {
    const PiecewiseFunction ext = extend_linear(restrict(need_f(cfg), cfg.k), cfg.k);
    std::transform(cfg.points.begin(), cfg.points.end(), values.begin(), [&](double x) { return ext(x); });
  } else if (spec.mode == "urysohn") {
    urysohn(cfg.k, spec.far, cfg.hull).evaluate(cfg.points, values);
  } else {
    indicator_approx(cfg.k, spec.k).evaluate(cfg.points, values);
  }
  Report list = Report::array();
  for (std::size_t i = 0; i < values.size(); ++i) list.push_back({{"x", cfg.points[i]}, {"value", values[i]}});
  out.outputs = {{"mode", spec.mode}, {"values", list}};
  return out;
}

Outcome recover(const ProblemConfig& cfg, const RunOptions& opt) {
  if (cfg.points.empty()) throw ConfigError("", "this command needs a 'points' list");
  const PositiveFunctional ell = need_functional(cfg);
  const Representation rep = represent(ell);
  const BlackBoxFunctional box = [&](const RealFn& f) { return apply(ell, f, opt.tol); };

  Outcome out;
  Report list = Report::array();
  for (double x : cfg.points) {
    const CdfRecovery r = recover_cdf(box, ell.domain(), x, cfg.recover_tol);
    const auto clipped = ell.domain().clip(cfg.hull.lo, x);
    const double exact = clipped ? measure_set(rep.mu, *clipped) : 0.0;
    list.push_back({{"x", x},
                    {"value", r.value},
                    {"exact", exact},
                    {"abs_error", std::abs(r.value - exact)},
                    {"converged", r.converged},
                    {"k", r.k}});
    out.converged = out.converged && r.converged;
  }
  out.outputs = {{"recover_tol", cfg.recover_tol}, {"points", list}};
  return out;
}

}  // namespace riesz::cli
