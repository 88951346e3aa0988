#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gradquad/branch.hpp"
#include "gradquad/diagnostics.hpp"
#include "gradquad/problem.hpp"
#include "gradquad/solve.hpp"

namespace gradquad {

struct ThresholdRequest {
  ThresholdRegime regime = ThresholdRegime::constant_b_pos;
  double b = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double b_lo = std::numeric_limits<double>::quiet_NaN();
  double b_hi = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
};

struct OutputSpec {
  std::string csv_path;
  std::string json_path;
  int precision = 12;
};

// Parsed run configuration. Parsing is strict: unknown keys and
// ill-typed values are rejected with the JSON path in the message.
struct RunConfig {
  bool has_problem = false;
  ProblemSpec problem;  // radius comes from grid.R
  int grid_m = 256;

  SolveOptions solve;
  BranchOptions branch;  // branch.solve mirrors `solve` after parsing
  std::vector<double> lambda_list;
  bool branch_auto = false;
  double lambda_star_tol = 1e-3;

  OutputSpec outputs;
  std::optional<double> stability_epsilon;
  std::vector<ThresholdRequest> thresholds;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace gradquad
