#include "gradquad/branch.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gradquad/diagnostics.hpp"
#include "gradquad/errors.hpp"
#include "gradquad/operators.hpp"

namespace gradquad {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

BranchRecord branch_record(const ProblemSpec& spec, const SolveReport& rep,
                           const BranchOptions& opts) {
  BranchRecord rec;
  rec.lambda = spec.lambda;
  rec.sup_norm = rep.solution.sup_norm();
  rec.converged = rep.status == SolveStatus::converged;
  rec.monotone_iters = rep.solution.meta.monotone_iters;
  if (rec.converged) {
    rec.h1_norm = h1_norm(rep.solution);
    rec.lq_norm_eu = lq_norm_exp(rep.solution, opts.lq_exponent);
    rec.mu1 = opts.certificates
                  ? stability_certificate(spec, rep.solution, opts.eigen).mu1
                  : kNaN;
  } else {
    rec.h1_norm = kNaN;
    rec.lq_norm_eu = kNaN;
    rec.mu1 = kNaN;
  }
  return rec;
}

BranchResult trace_branch(const ProblemSpec& spec, const GridPtr& grid,
                          const std::vector<double>& lambdas,
                          const BranchOptions& opts) {
  spec.validate();
  if (!grid) throw ConfigError("branch sweep needs a grid");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0) || !std::isfinite(lambdas[k]))
      throw ConfigError("lambda schedule entries must be finite and >= 0");
    if (k > 0 && !(lambdas[k] > lambdas[k - 1]))
      throw ConfigError("lambda schedule must be strictly increasing");
  }
  const bool auto_schedule = lambdas.empty();
  if (auto_schedule) {
    if (!(opts.auto_start > 0.0) || !(opts.auto_ratio > 1.0))
      throw ConfigError("auto schedule needs auto_start > 0 and auto_ratio > 1");
  }

  BranchResult out;
  double lam = opts.auto_start;
  double last_converged = 0.0;
  bool have_converged = false;
  for (std::size_t k = 0;; ++k) {
    if (auto_schedule) {
      if (k > 0) lam *= opts.auto_ratio;
      if (lam > opts.lambda_ceiling)
        throw ConvergenceError(
            "auto schedule passed the lambda ceiling without diverging; "
            "the branch appears unbounded");
    } else {
      if (k >= lambdas.size()) break;
      lam = lambdas[k];
    }
    const ProblemSpec at = spec.with_lambda(lam);
    const SolutionField* start = nullptr;
    if (opts.warm_start && !out.solutions.empty()) start = &out.solutions.back();
    SolveReport rep = monotone_solve(at, grid, opts.solve, start);

    if (rep.status == SolveStatus::max_iters ||
        rep.status == SolveStatus::newton_failure)
      throw ConvergenceError("sweep cannot classify lambda=" +
                             std::to_string(lam) + " (status " +
                             std::string(to_string(rep.status)) + ")");

    if (rep.status == SolveStatus::converged && start != nullptr &&
        opts.cold_check_stride > 0 &&
        (k + 1) % static_cast<std::size_t>(opts.cold_check_stride) == 0) {
      SolveReport cold = monotone_solve(at, grid, opts.solve, nullptr);
      const double drift =
          cold.status == SolveStatus::converged
              ? (cold.solution.values - rep.solution.values).cwiseAbs().maxCoeff()
              : std::numeric_limits<double>::infinity();
      if (drift > 10.0 * opts.solve.monotone_tol)
        throw ConvergenceError("warm start drifted from the cold solve at lambda=" +
                               std::to_string(lam));
    }

    out.records.push_back(branch_record(at, rep, opts));
    if (rep.status == SolveStatus::converged) {
      if (!out.solutions.empty()) {
        const double inc =
            (rep.solution.values - out.solutions.back().values).minCoeff();
        out.min_interlambda_increment =
            std::min(out.min_interlambda_increment, inc);
      }
      out.solutions.push_back(std::move(rep.solution));
      last_converged = lam;
      have_converged = true;
    } else {
      out.seed = BracketSeed{have_converged ? last_converged : 0.0, lam};
      break;
    }
  }
  return out;
}

LambdaStarBracket lambda_star_bracket(const ProblemSpec& spec,
                                      const GridPtr& grid, double tol,
                                      const BranchOptions& opts,
                                      double lambda_init) {
  spec.validate();
  if (!grid) throw ConfigError("bracketing needs a grid");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ConfigError("bracket tolerance must be positive and finite");
  if (!(lambda_init > 0.0) || !std::isfinite(lambda_init))
    throw ConfigError("initial lambda must be positive and finite");
  if (!(spec.nonlinearity.g0() > 0.0))
    throw ConfigError("bracketing requires g(0) > 0 so the branch leaves zero");

  auto classify = [&](double lam) {
    const SolveStatus s =
        monotone_solve(spec.with_lambda(lam), grid, opts.solve, nullptr).status;
    if (s == SolveStatus::max_iters || s == SolveStatus::newton_failure)
      throw ConvergenceError("cannot classify solvability at lambda=" +
                             std::to_string(lam) + " (status " +
                             std::string(to_string(s)) + ")");
    return s == SolveStatus::converged;
  };

  double lam = lambda_init;
  while (!classify(lam)) {
    lam *= 0.5;
    if (lam < lambda_init * 0x1p-40)
      throw ConfigError(
          "solver diverges at arbitrarily small lambda; the grid is too "
          "coarse or the problem is mis-scaled");
  }
  double lo = lam;
  double hi = 0.0;
  for (double probe = lo * 2.0;; probe *= 2.0) {
    if (probe > opts.lambda_ceiling)
      throw ConvergenceError(
          "no divergence found below the lambda ceiling; the extremal "
          "parameter appears unbounded");
    if (classify(probe)) {
      lo = probe;
    } else {
      hi = probe;
      break;
    }
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) break;  // double resolution exhausted
    if (classify(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > tol)
    throw ConvergenceError("bisection stalled before reaching the requested width");
  return LambdaStarBracket{lo, hi};
}

WeakFormTerm weak_form_term(const ProblemSpec& spec, const SolutionField& u,
                            const Eigen::VectorXd& xi,
                            const Eigen::VectorXd& xi_lap, int index) {
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  if (xi.size() != grid.nodes() || xi_lap.size() != grid.nodes())
    throw GridMismatchError("test function arrays must be nodal");
  const Eigen::VectorXd b = spec.coefficient.realize(grid);
  const Eigen::VectorXd grad2 = nodal_gradient_sq(grid, u.values);
  const Eigen::VectorXd& w = grid.weights();

  WeakFormTerm t;
  t.index = index;
  for (int i = 0; i < grid.nodes(); ++i) {
    // u = 0 nodes contribute nothing; skipping them keeps Dirichlet ends
    // away from the (possibly singular) analytic Laplacian of xi
    if (u.values[i] != 0.0) t.laplacian_term -= w[i] * u.values[i] * xi_lap[i];
    t.gradient_term += w[i] * b[i] * grad2[i] * xi[i];
    t.reaction_term += w[i] * spec.lambda * spec.nonlinearity.g(u.values[i]) * xi[i];
  }
  t.residual = t.laplacian_term - t.gradient_term - t.reaction_term;
  t.scale = std::max({std::abs(t.laplacian_term), std::abs(t.gradient_term),
                      std::abs(t.reaction_term)});
  t.rel_residual = t.scale > 0.0 ? std::abs(t.residual) / t.scale : 0.0;
  return t;
}

ExtremalProxy extremal_proxy(const ProblemSpec& spec, const GridPtr& grid,
                             const LambdaStarBracket& bracket,
                             const BranchOptions& opts) {
  spec.validate();
  if (!grid) throw ConfigError("proxy evaluation needs a grid");
  if (!(bracket.lambda_lo >= 0.0) || !(bracket.lambda_hi > bracket.lambda_lo))
    throw ConfigError("invalid bracket for proxy evaluation");

  const ProblemSpec at = spec.with_lambda(bracket.lambda_lo);
  SolveReport rep = monotone_solve(at, grid, opts.solve, nullptr);
  if (rep.status != SolveStatus::converged)
    throw ConvergenceError("proxy solve at the bracket floor did not converge (status " +
                           std::string(to_string(rep.status)) + ")");

  const int nodes = grid->nodes();
  const double R = grid->radius();
  const double n = grid->dimension();

  ExtremalProxy out;
  out.lambda = bracket.lambda_lo;
  out.informational =
      spec.nonlinearity.kind() != NonlinearityKind::exponential;

  for (int j = 1; j <= 8; ++j) {
    Eigen::VectorXd xi(nodes), xi_lap(nodes);
    if (grid->domain() == DomainKind::ball) {
      // xi = (1 - x^2) x^m with x = r/R and m = 2(j-1)
      const double m = 2.0 * (j - 1);
      for (int i = 0; i < nodes; ++i) {
        const double x = grid->node(i) / R;
        xi[i] = (1.0 - x * x) * std::pow(x, m);
        const double lead =
            m == 0.0 ? 0.0 : m * (m + n - 2.0) * std::pow(x, m - 2.0);
        xi_lap[i] = (lead - (m + 2.0) * (m + n) * std::pow(x, m)) / (R * R);
      }
    } else {
      // xi = (x(1-x))^j on the unit interval
      for (int i = 0; i < nodes; ++i) {
        const double x = grid->node(i);
        const double p = x * (1.0 - x);
        const double dp = 1.0 - 2.0 * x;
        xi[i] = std::pow(p, j);
        const double dxi = j * std::pow(p, j - 1.0) * dp;
        double lap = -2.0 * j * std::pow(p, j - 1.0);
        if (j >= 2) lap += j * (j - 1.0) * std::pow(p, j - 2.0) * dp * dp;
        if (x > 0.0 && n != 1.0) lap += (n - 1.0) / x * dxi;
        xi_lap[i] = lap;
      }
    }
    out.terms.push_back(weak_form_term(at, rep.solution, xi, xi_lap, j));
    out.worst_rel_residual =
        std::max(out.worst_rel_residual, out.terms.back().rel_residual);
  }
  out.solution = std::move(rep.solution);
  return out;
}

}  // namespace gradquad
