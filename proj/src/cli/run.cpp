#include "riesz/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "riesz/errors.hpp"

namespace riesz::cli {
namespace {

std::ostream& null_stream() {
  static std::ostream sink(nullptr);
  return sink;
}

using Handler = std::function<Outcome(const ProblemConfig&, const RunOptions&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"integrate", integrate}, {"measure", measure}, {"represent", represent},
      {"verify", verify},       {"extend", extend},   {"recover", recover},
  };
  return table;
}

const char* describe(const std::string& command) {
  if (command == "integrate") return "Riemann-Stieltjes integral of f against alpha";
  if (command == "measure") return "Lebesgue-Stieltjes measure of the described sets";
  if (command == "represent") return "representing alpha and measure of a positive functional";
  if (command == "verify") return "check the representation identities on the config's fixture";
  if (command == "extend") return "evaluate an extension, Urysohn or indicator approximation";
  return "recover alpha(x) from functional values";
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void emit(std::ostream& out, const Report& report) { out << report.dump(2) << '\n'; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();

  CLI::App app{"Stieltjes integrals, Lebesgue-Stieltjes measures and Riesz representations on compact sets",
               "stieltjes"};
  app.require_subcommand(1);
  std::string config_path;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool timing = false;
  for (const auto& [name, handler] : handlers()) {
    (void)handler;
    auto* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_path, "problem definition (JSON)")->required();
    sub->add_option("--tol", tol, "quadrature tolerance, overrides the config")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for generated probes and test sets");
    sub->add_flag("--timing", timing, "add wall time to the report");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, null_stream(), err);
    const bool unknown = !args.empty() && !args.front().starts_with('-') && !handlers().count(args.front());
    Report report;
    report["command"] = args.empty() ? "" : args.front();
    report["status"] = "config_error";
    report["error"] = {{"message", unknown ? "unknown subcommand '" + args.front() + "'" : std::string(e.what())}};
    emit(out, report);
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Report report;
  report["command"] = command;
  int code = kOk;
  std::string summary;

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read config file '" + config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    Document doc;
    ProblemConfig cfg;
    try {
      doc = parse_document(text);
      cfg = load_config(doc.root);
    } catch (ConfigError& e) {
      if (e.line == 0) {
        if (auto loc = doc.map.locate(e.pointer())) {
          e.line = loc->first;
          e.column = loc->second + e.inner_offset;
        }
      }
      throw;
    }

    RunOptions opt{.tol = tol > 0.0 ? tol : cfg.tol, .seed = seed};
    report["inputs_digest"] = "fnv1a64:" + hex64(inputs_digest(command, doc.root, opt.tol, opt.seed));
    report["tol"] = opt.tol;
    report["seed"] = opt.seed;

    Outcome outcome;
    try {
      outcome = handlers().at(command)(cfg, opt);
    } catch (ConfigError& e) {
      if (auto loc = doc.map.locate(e.pointer()); loc && !e.pointer().empty()) {
        e.line = loc->first;
        e.column = loc->second;
      }
      throw;
    }
    report["outputs"] = std::move(outcome.outputs);
    report["converged"] = outcome.converged;
    if (!outcome.converged) {
      code = kNotConverged;
      report["status"] = "not_converged";
      summary = "numeric non-convergence; see the converged flags in the report";
    } else if (!outcome.verified) {
      code = kVerificationFailed;
      report["status"] = "verification_failed";
      summary = "verification failed";
    } else {
      report["status"] = "ok";
      summary = "ok";
    }
  } catch (const ConfigError& e) {
    code = kConfigError;
    Report error{{"message", e.what()}, {"pointer", e.pointer()}};
    std::string where = config_path;
    if (e.line > 0) {
      error["line"] = e.line;
      error["column"] = e.column;
      where += ":" + std::to_string(e.line) + ":" + std::to_string(e.column);
    }
    report["status"] = "config_error";
    report["error"] = error;
    summary = where + ": " + (e.pointer().empty() ? "" : e.pointer() + ": ") + e.what();
  } catch (const expr::EvalError& e) {
    code = kConfigError;
    report["status"] = "evaluation_error";
    report["error"] = {{"message", e.what()}};
    summary = std::string("evaluation error: ") + e.what();
  } catch (const DomainError& e) {
    code = kConfigError;
    report["status"] = "config_error";
    report["error"] = {{"message", e.what()}};
    summary = e.what();
  } catch (const NumericError& e) {
    code = kNotConverged;
    report["status"] = "not_converged";
    report["error"] = {{"message", e.what()}};
    summary = std::string("numeric failure: ") + e.what();
  }

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if (timing) report["wall_time_ms"] = elapsed_ms;
  emit(out, report);

  char wall[32];
  std::snprintf(wall, sizeof wall, "%.1f", elapsed_ms);
  err << "stieltjes " << command << ": " << summary << " (exit " << code << ", " << wall << " ms)\n";
  return code;
}

}  // namespace riesz::cli
