#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "config.hpp"

namespace riesz::cli {

using Report = nlohmann::ordered_json;

struct Outcome {
  Report outputs = Report::object();
  bool converged = true;
  bool verified = true;
};

struct RunOptions {
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

Outcome integrate(const ProblemConfig& cfg, const RunOptions& opt);
Outcome measure(const ProblemConfig& cfg, const RunOptions& opt);
Outcome represent(const ProblemConfig& cfg, const RunOptions& opt);
Outcome verify(const ProblemConfig& cfg, const RunOptions& opt);
Outcome extend(const ProblemConfig& cfg, const RunOptions& opt);
Outcome recover(const ProblemConfig& cfg, const RunOptions& opt);

}  // namespace riesz::cli
