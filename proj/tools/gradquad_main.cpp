#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gradquad/branch.hpp"
#include "gradquad/config.hpp"
#include "gradquad/diagnostics.hpp"
#include "gradquad/errors.hpp"
#include "gradquad/hopf_cole.hpp"
#include "gradquad/io.hpp"
#include "gradquad/nonlinearity.hpp"
#include "gradquad/solve.hpp"
#include "gradquad/stability.hpp"

namespace {

using namespace gradquad;

int env_threads() {
  const char* raw = std::getenv("GRADQUAD_THREADS");
  if (raw == nullptr) return 1;
  const long parsed = std::strtol(raw, nullptr, 10);
  if (parsed < 1) return 1;
  return parsed > 256 ? 256 : static_cast<int>(parsed);
}

std::string join_out(const std::string& out_dir, const std::string& path) {
  if (path.empty() || out_dir.empty() || path.front() == '/') return path;
  return out_dir + "/" + path;
}

void require_problem(const RunConfig& cfg) {
  if (!cfg.has_problem)
    throw ConfigError("config: a problem section is required for this command");
}

int exit_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return 0;
    case SolveStatus::diverged: return 2;
    case SolveStatus::newton_failure: return 3;
    case SolveStatus::max_iters: return 1;
  }
  return 1;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  require_problem(cfg);
  const GridPtr grid = cfg.problem.grid(cfg.grid_m);
  const SolveReport rep = monotone_solve(cfg.problem, grid, cfg.solve);
  const nlohmann::json doc =
      solution_json(cfg.problem, rep, cfg.outputs.precision);
  const std::string text = json_text(doc);
  std::cout << text;
  if (!cfg.outputs.json_path.empty())
    write_text_file(join_out(out_dir, cfg.outputs.json_path), text);
  return exit_for(rep.status);
}

// Cold solves at distinct lambdas are independent; distribute them and
// reassemble in schedule order so the result matches the sequential sweep.
BranchResult parallel_cold_sweep(const ProblemSpec& spec, const GridPtr& grid,
                                 const std::vector<double>& lambdas,
                                 const BranchOptions& opts, int threads) {
  struct Slot {
    SolveReport rep;
    BranchRecord rec;
  };
  std::vector<std::optional<Slot>> slots(lambdas.size());
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = cursor.fetch_add(1); k < lambdas.size();
             k = cursor.fetch_add(1)) {
          const ProblemSpec at = spec.with_lambda(lambdas[k]);
          SolveReport rep = monotone_solve(at, grid, opts.solve, nullptr);
          BranchRecord rec = branch_record(at, rep, opts);
          slots[k] = Slot{std::move(rep), std::move(rec)};
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  BranchResult out;
  double last_converged = 0.0;
  bool have_converged = false;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    Slot& slot = *slots[k];
    const SolveStatus status = slot.rep.status;
    if (status == SolveStatus::max_iters || status == SolveStatus::newton_failure)
      throw ConvergenceError("sweep cannot classify lambda=" +
                             std::to_string(lambdas[k]) + " (status " +
                             std::string(to_string(status)) + ")");
    out.records.push_back(slot.rec);
    if (status == SolveStatus::converged) {
      if (!out.solutions.empty()) {
        const double inc =
            (slot.rep.solution.values - out.solutions.back().values).minCoeff();
        out.min_interlambda_increment =
            std::min(out.min_interlambda_increment, inc);
      }
      out.solutions.push_back(std::move(slot.rep.solution));
      last_converged = lambdas[k];
      have_converged = true;
    } else {
      out.seed = BracketSeed{have_converged ? last_converged : 0.0, lambdas[k]};
      break;
    }
  }
  return out;
}

int cmd_branch(const RunConfig& cfg, const std::string& out_dir) {
  require_problem(cfg);
  if (!cfg.branch_auto && cfg.lambda_list.empty())
    throw ConfigError("branch: provide lambda_list or set auto: true");
  const GridPtr grid = cfg.problem.grid(cfg.grid_m);

  const int threads = env_threads();
  BranchResult result;
  if (threads > 1 && !cfg.branch_auto && !cfg.branch.warm_start)
    result = parallel_cold_sweep(cfg.problem, grid, cfg.lambda_list, cfg.branch,
                                 threads);
  else
    result = trace_branch(cfg.problem, grid, cfg.lambda_list, cfg.branch);

  const LambdaStarBracket bracket =
      lambda_star_bracket(cfg.problem, grid, cfg.lambda_star_tol, cfg.branch);

  const std::string csv = branch_csv(result.records, cfg.outputs.precision);
  std::cout << csv;
  if (!cfg.outputs.csv_path.empty())
    write_text_file(join_out(out_dir, cfg.outputs.csv_path), csv);
  if (!cfg.outputs.json_path.empty()) {
    const nlohmann::json doc = branch_json(cfg.problem, *grid, cfg.branch,
                                           result, bracket,
                                           cfg.outputs.precision);
    write_text_file(join_out(out_dir, cfg.outputs.json_path), json_text(doc));
  }
  return 0;
}

int cmd_thresholds(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.thresholds.empty())
    throw ConfigError("config: a thresholds section is required for this command");
  std::vector<ThresholdReport> reps;
  for (const ThresholdRequest& req : cfg.thresholds) {
    switch (req.regime) {
      case ThresholdRegime::constant_b_pos:
        reps.push_back(threshold_constant_b_pos(req.b, req.beta));
        break;
      case ThresholdRegime::constant_b_neg:
        reps.push_back(threshold_constant_b_neg(req.b, req.beta));
        break;
      case ThresholdRegime::general_b:
        reps.push_back(threshold_general_b(req.b_lo, req.b_hi, req.delta, req.eta));
        break;
      case ThresholdRegime::bootstrap:
        throw ConfigError("thresholds: the bootstrap regime has no table form");
    }
  }
  std::cout << threshold_table(reps, cfg.outputs.precision);
  if (!cfg.outputs.json_path.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ThresholdReport& rep : reps)
      arr.push_back(threshold_json(rep, cfg.outputs.precision));
    write_text_file(join_out(out_dir, cfg.outputs.json_path), json_text(arr));
  }
  return 0;
}

int cmd_stability(const RunConfig& cfg, const std::string& out_dir) {
  require_problem(cfg);
  const GridPtr grid = cfg.problem.grid(cfg.grid_m);
  const SolveReport rep = monotone_solve(cfg.problem, grid, cfg.solve);
  nlohmann::json doc;
  doc["status"] = to_string(rep.status);
  doc["problem"] = problem_json(cfg.problem, cfg.outputs.precision);
  doc["grid"] = grid_json(*grid, cfg.outputs.precision);
  if (rep.status == SolveStatus::converged) {
    const EigenCertificate cert = stability_certificate(cfg.problem, rep.solution);
    doc["certificate"] = certificate_json(cert, cfg.outputs.precision);
    if (cfg.stability_epsilon) {
      const EigenCertificate relaxed =
          epsilon_relaxed_check(cfg.problem, rep.solution, *cfg.stability_epsilon);
      doc["relaxed"] = certificate_json(relaxed, cfg.outputs.precision);
      doc["relaxed"]["epsilon"] =
          round_sig(*cfg.stability_epsilon, cfg.outputs.precision);
    }
  }
  const std::string text = json_text(doc);
  std::cout << text;
  if (!cfg.outputs.json_path.empty())
    write_text_file(join_out(out_dir, cfg.outputs.json_path), text);
  return exit_for(rep.status);
}

int cmd_check_transform(const RunConfig& cfg, const std::string& out_dir) {
  require_problem(cfg);
  const double b = cfg.problem.coefficient.constant_value();
  const GridPtr grid = cfg.problem.grid(cfg.grid_m);

  const SolveReport rep_u = monotone_solve(cfg.problem, grid, cfg.solve);

  const TransformedNonlinearity f = derive_f(cfg.problem.nonlinearity, b);
  ProblemSpec vspec = cfg.problem;
  vspec.coefficient = CoefficientB::constant(0.0);
  const bool monotone = b > 0.0 && cfg.problem.nonlinearity.nondecreasing();
  vspec.nonlinearity = NonlinearityG::custom(
      "transformed", [f](double v) { return f.f(v); },
      [f](double v) { return f.fp(v); }, monotone, false, std::nullopt);
  const SolveReport rep_v = monotone_solve(vspec, grid, cfg.solve);

  nlohmann::json doc;
  doc["status_u"] = to_string(rep_u.status);
  doc["status_v"] = to_string(rep_v.status);
  doc["problem"] = problem_json(cfg.problem, cfg.outputs.precision);
  doc["grid"] = grid_json(*grid, cfg.outputs.precision);
  if (rep_u.status == SolveStatus::converged &&
      rep_v.status == SolveStatus::converged) {
    const SolutionField pushed = hopf_cole_forward(rep_u.solution, b);
    const double sup_diff =
        (pushed.values - rep_v.solution.values).cwiseAbs().maxCoeff();
    doc["sup_diff"] = round_sig(sup_diff, cfg.outputs.precision);
    doc["sup_u"] = round_sig(rep_u.solution.sup_norm(), cfg.outputs.precision);
    doc["sup_v"] = round_sig(rep_v.solution.sup_norm(), cfg.outputs.precision);
    const EigenCertificate cert_u = stability_certificate(cfg.problem, rep_u.solution);
    const EigenCertificate cert_v = stability_certificate(vspec, rep_v.solution);
    doc["verdict_u"] = to_string(cert_u.verdict);
    doc["verdict_v"] = to_string(cert_v.verdict);
  }
  const std::string text = json_text(doc);
  std::cout << text;
  if (!cfg.outputs.json_path.empty())
    write_text_file(join_out(out_dir, cfg.outputs.json_path), text);
  if (rep_u.status != SolveStatus::converged) return exit_for(rep_u.status);
  return exit_for(rep_v.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal branches, fold brackets, stability certificates and "
               "regularity diagnostics for -lap u - b(x)|grad u|^2 = lambda g(u)"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int grid_m_override = 0;
  app.add_option("--config", config_path, "JSON run configuration path");
  app.add_option("--out", out_dir, "directory prefix for output files");
  app.add_option("--grid-m", grid_m_override, "override the grid cell count");

  CLI::App* c_solve = app.add_subcommand("solve", "one monotone solve at fixed lambda");
  CLI::App* c_branch = app.add_subcommand("branch", "lambda sweep, records and fold bracket");
  CLI::App* c_thresholds = app.add_subcommand("thresholds", "regularity threshold table");
  CLI::App* c_stability = app.add_subcommand("stability", "principal-eigenvalue certificate");
  CLI::App* c_check = app.add_subcommand("check-transform", "u- vs v-form agreement for constant b");

  CLI11_PARSE(app, argc, argv);

  try {
    if (config_path.empty()) throw ConfigError("--config is required");
    RunConfig cfg = load_config(config_path);
    if (grid_m_override > 0) cfg.grid_m = grid_m_override;
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    if (c_solve->parsed()) return cmd_solve(cfg, out_dir);
    if (c_branch->parsed()) return cmd_branch(cfg, out_dir);
    if (c_thresholds->parsed()) return cmd_thresholds(cfg, out_dir);
    if (c_stability->parsed()) return cmd_stability(cfg, out_dir);
    if (c_check->parsed()) return cmd_check_transform(cfg, out_dir);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
