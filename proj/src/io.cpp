#include "gradquad/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "gradquad/errors.hpp"

namespace gradquad {

std::string format_sig(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_sig(v, digits).c_str(), nullptr);
}

std::string branch_csv(const std::vector<BranchRecord>& records, int digits) {
  std::string out = "lambda,sup_norm,h1_norm,lq_norm_eu,mu1,converged,monotone_iters\n";
  for (const BranchRecord& r : records) {
    out += format_sig(r.lambda, digits);
    out += ',';
    out += format_sig(r.sup_norm, digits);
    out += ',';
    out += format_sig(r.h1_norm, digits);
    out += ',';
    out += format_sig(r.lq_norm_eu, digits);
    out += ',';
    out += format_sig(r.mu1, digits);
    out += ',';
    out += r.converged ? '1' : '0';
    out += ',';
    out += std::to_string(r.monotone_iters);
    out += '\n';
  }
  return out;
}

nlohmann::json values_json(const Eigen::VectorXd& v, int digits) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(round_sig(v[i], digits));
  return arr;
}

nlohmann::json grid_json(const RadialGrid& grid, int digits) {
  return {{"domain", grid.domain() == DomainKind::ball ? "ball" : "interval"},
          {"R", round_sig(grid.radius(), digits)},
          {"dimension", round_sig(grid.dimension(), digits)},
          {"M", grid.cells()}};
}

namespace {

nlohmann::json coefficient_json(const CoefficientB& b, int digits) {
  switch (b.kind()) {
    case CoefficientKind::constant:
      return {{"kind", "constant"}, {"value", round_sig(b.constant_value(), digits)}};
    case CoefficientKind::tabulated:
      return {{"kind", "tabulated"}, {"values", values_json(b.table(), digits)}};
    case CoefficientKind::formula: {
      nlohmann::json params = nlohmann::json::object();
      for (const auto& kv : b.formula_params())
        params[kv.first] = round_sig(kv.second, digits);
      return {{"kind", "formula"}, {"id", b.formula_id()}, {"params", params}};
    }
  }
  return nullptr;
}

nlohmann::json nonlinearity_json(const NonlinearityG& g, int digits) {
  nlohmann::json j = {{"kind", g.name()}};
  if (g.kind() != NonlinearityKind::custom)
    j["param"] = round_sig(g.param(), digits);
  return j;
}

}  // namespace

nlohmann::json problem_json(const ProblemSpec& spec, int digits) {
  return {{"domain", spec.domain.kind == DomainKind::ball ? "ball" : "interval"},
          {"R", round_sig(spec.domain.radius, digits)},
          {"dimension", round_sig(spec.dimension, digits)},
          {"b", coefficient_json(spec.coefficient, digits)},
          {"g", nonlinearity_json(spec.nonlinearity, digits)},
          {"lambda", round_sig(spec.lambda, digits)}};
}

nlohmann::json solve_options_json(const SolveOptions& opts, int digits) {
  return {{"newton_tol", round_sig(opts.newton_tol, digits)},
          {"newton_max", opts.newton_max},
          {"monotone_tol", round_sig(opts.monotone_tol, digits)},
          {"monotone_max", opts.monotone_max},
          {"backtracking", opts.backtracking},
          {"backtrack_factor", round_sig(opts.backtrack_factor, digits)},
          {"min_step", round_sig(opts.min_step, digits)},
          {"sup_ceiling", round_sig(opts.sup_ceiling, digits)}};
}

nlohmann::json solution_json(const ProblemSpec& spec, const SolveReport& report,
                             int digits) {
  nlohmann::json j;
  j["status"] = to_string(report.status);
  j["problem"] = problem_json(spec, digits);
  if (report.solution.grid) j["grid"] = grid_json(*report.solution.grid, digits);
  j["lambda"] = round_sig(report.solution.meta.lambda, digits);
  j["sup_norm"] = round_sig(report.solution.sup_norm(), digits);
  j["residual_sup"] = round_sig(report.solution.meta.residual_sup, digits);
  j["newton_iters"] = report.solution.meta.newton_iters;
  j["monotone_iters"] = report.solution.meta.monotone_iters;
  j["min_nodal_increment"] = round_sig(report.min_nodal_increment, digits);
  j["values"] = values_json(report.solution.values, digits);
  return j;
}

nlohmann::json certificate_json(const EigenCertificate& cert, int digits) {
  return {{"mu1", round_sig(cert.mu1, digits)},
          {"positivity_margin", round_sig(cert.positivity_margin, digits)},
          {"residual", round_sig(cert.residual, digits)},
          {"verdict", to_string(cert.verdict)},
          {"iterations", cert.iterations},
          {"eigenfunction", values_json(cert.eigenfunction, digits)}};
}

nlohmann::json branch_json(const ProblemSpec& spec, const RadialGrid& grid,
                           const BranchOptions& opts, const BranchResult& result,
                           const std::optional<LambdaStarBracket>& bracket,
                           int digits) {
  nlohmann::json j;
  j["problem"] = problem_json(spec, digits);
  j["grid"] = grid_json(grid, digits);
  j["options"] = {{"solve", solve_options_json(opts.solve, digits)},
                  {"lq_exponent", round_sig(opts.lq_exponent, digits)},
                  {"warm_start", opts.warm_start},
                  {"cold_check_stride", opts.cold_check_stride},
                  {"certificates", opts.certificates}};
  nlohmann::json recs = nlohmann::json::array();
  for (const BranchRecord& r : result.records) {
    recs.push_back({{"lambda", round_sig(r.lambda, digits)},
                    {"sup_norm", round_sig(r.sup_norm, digits)},
                    {"h1_norm", round_sig(r.h1_norm, digits)},
                    {"lq_norm_eu", round_sig(r.lq_norm_eu, digits)},
                    {"mu1", round_sig(r.mu1, digits)},
                    {"converged", r.converged},
                    {"monotone_iters", r.monotone_iters}});
  }
  j["records"] = recs;
  j["min_interlambda_increment"] =
      round_sig(result.min_interlambda_increment, digits);
  if (result.seed)
    j["seed"] = {{"lambda_lo", round_sig(result.seed->lambda_lo, digits)},
                 {"lambda_hi", round_sig(result.seed->lambda_hi, digits)}};
  if (bracket)
    j["bracket"] = {{"lambda_lo", round_sig(bracket->lambda_lo, digits)},
                    {"lambda_hi", round_sig(bracket->lambda_hi, digits)},
                    {"width", round_sig(bracket->width(), digits)}};
  return j;
}

nlohmann::json threshold_json(const ThresholdReport& rep, int digits) {
  nlohmann::json j;
  j["regime"] = to_string(rep.regime);
  nlohmann::json inputs;
  inputs["b_lo"] = round_sig(rep.inputs.b_lo, digits);
  inputs["b_hi"] = round_sig(rep.inputs.b_hi, digits);
  if (!std::isnan(rep.inputs.beta)) inputs["beta"] = round_sig(rep.inputs.beta, digits);
  if (!std::isnan(rep.inputs.delta)) inputs["delta"] = round_sig(rep.inputs.delta, digits);
  if (!std::isnan(rep.inputs.eta)) inputs["eta"] = round_sig(rep.inputs.eta, digits);
  j["inputs"] = inputs;
  j["n_threshold"] = round_sig(rep.n_threshold, digits);
  j["n_integer"] = rep.n_integer;
  j["q_threshold"] = round_sig(rep.q_threshold, digits);
  if (rep.has_alpha_window)
    j["alpha_window"] = {round_sig(rep.alpha_lo, digits),
                         round_sig(rep.alpha_hi, digits)};
  else
    j["alpha_window"] = nlohmann::json::array();
  j["applicable"] = rep.applicable;
  if (!rep.applicable) j["reason"] = rep.reason;
  return j;
}

std::string threshold_table(const std::vector<ThresholdReport>& reps,
                            int digits) {
  std::string out;
  for (const ThresholdReport& rep : reps) {
    out += "regime=";
    out += to_string(rep.regime);
    if (rep.inputs.b_lo == rep.inputs.b_hi) {
      out += " b=" + format_sig(rep.inputs.b_lo, digits);
    } else {
      out += " b_lo=" + format_sig(rep.inputs.b_lo, digits);
      out += " b_hi=" + format_sig(rep.inputs.b_hi, digits);
    }
    if (!std::isnan(rep.inputs.beta))
      out += " beta=" + format_sig(rep.inputs.beta, digits);
    if (!std::isnan(rep.inputs.delta))
      out += " delta=" + format_sig(rep.inputs.delta, digits);
    if (!std::isnan(rep.inputs.eta))
      out += " eta=" + format_sig(rep.inputs.eta, digits);
    out += " n_threshold=" + format_sig(rep.n_threshold, digits);
    out += " n_integer=" + std::to_string(rep.n_integer);
    out += " q_threshold=" + format_sig(rep.q_threshold, digits);
    if (rep.has_alpha_window)
      out += " alpha_window=(" + format_sig(rep.alpha_lo, digits) + "," +
             format_sig(rep.alpha_hi, digits) + ")";
    else
      out += " alpha_window=()";
    out += rep.applicable ? " applicable=yes" : " applicable=no";
    if (!rep.applicable) out += " reason=\"" + rep.reason + "\"";
    out += '\n';
  }
  return out;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  f.flush();
  if (!f) throw Error("write failed: " + path);
}

}  // namespace gradquad
