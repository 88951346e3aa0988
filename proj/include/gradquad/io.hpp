#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradquad/branch.hpp"
#include "gradquad/diagnostics.hpp"
#include "gradquad/problem.hpp"
#include "gradquad/solve.hpp"
#include "gradquad/stability.hpp"

namespace gradquad {

// Fixed-precision decimal emission: every number that leaves the library
// goes through %.<digits>g so reruns are byte-identical across platforms.
std::string format_sig(double v, int digits = 12);
double round_sig(double v, int digits = 12);

std::string branch_csv(const std::vector<BranchRecord>& records,
                       int digits = 12);

nlohmann::json values_json(const Eigen::VectorXd& v, int digits = 12);
nlohmann::json grid_json(const RadialGrid& grid, int digits = 12);
nlohmann::json problem_json(const ProblemSpec& spec, int digits = 12);
nlohmann::json solve_options_json(const SolveOptions& opts, int digits = 12);
nlohmann::json solution_json(const ProblemSpec& spec, const SolveReport& report,
                             int digits = 12);
nlohmann::json certificate_json(const EigenCertificate& cert, int digits = 12);
nlohmann::json branch_json(const ProblemSpec& spec, const RadialGrid& grid,
                           const BranchOptions& opts, const BranchResult& result,
                           const std::optional<LambdaStarBracket>& bracket,
                           int digits = 12);
nlohmann::json threshold_json(const ThresholdReport& rep, int digits = 12);

// One line per report, key=value tokens, LF separated.
std::string threshold_table(const std::vector<ThresholdReport>& reps,
                            int digits = 12);

std::string json_text(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gradquad
