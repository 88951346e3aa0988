#include "gradquad/solve.hpp"

#include <cmath>
#include <limits>

#include "gradquad/errors.hpp"
#include "gradquad/operators.hpp"
#include "gradquad/tridiagonal.hpp"

namespace gradquad {

namespace {

// Residual of -Delta_h u - b |grad_h u|^2 - rhs on the unknown nodes.
// Differences are nested so the cancellation in the second difference does
// not poison the sup-norm tolerance on fine grids.
Eigen::VectorXd quasilinear_residual(const RadialGrid& grid, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& rhs) {
  const int base = grid.first_unknown();
  const double h = grid.spacing();
  const double n = grid.dimension();
  Eigen::VectorXd res(grid.unknowns());
  for (int j = 0; j < grid.unknowns(); ++j) {
    const int i = base + j;
    double lap, grad;
    if (i == 0) {
      lap = 2.0 * n * (u[1] - u[0]) / (h * h);
      grad = 0.0;
    } else {
      const double dp = u[i + 1] - u[i];
      const double dm = u[i] - u[i - 1];
      grad = (dp + dm) / (2.0 * h);
      lap = (dp - dm) / (h * h) + (n - 1.0) / grid.node(i) * grad;
    }
    res[j] = -lap - b[i] * grad * grad - rhs[i];
  }
  return res;
}

struct NewtonOutcome {
  Eigen::VectorXd u_nodal;
  double residual_sup = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool ok = false;
};

NewtonOutcome newton_frozen_rhs(const RadialGrid& grid, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& rhs,
                                const Eigen::VectorXd& initial,
                                const SolveOptions& opts) {
  NewtonOutcome out;
  out.u_nodal = initial;
  // Dirichlet values are data, not unknowns.
  out.u_nodal[grid.cells()] = 0.0;
  if (grid.domain() == DomainKind::interval) out.u_nodal[0] = 0.0;

  // The absolute target is floored at the roundoff scale of the residual
  // evaluation itself: second differences contribute eps * sup|u| / h^2, the
  // source eps * sup|rhs|.  A tighter demand dead-ends the backtracking on
  // huge (pre-blow-up) transients that are otherwise perfectly solvable.
  const double eps = std::numeric_limits<double>::epsilon();
  const double h = grid.spacing();
  const double rhs_sup = rhs.cwiseAbs().maxCoeff();
  auto tol_at = [&](const Eigen::VectorXd& u_now) {
    const double lap_scale = u_now.cwiseAbs().maxCoeff() / (h * h);
    return std::max(opts.newton_tol, 8.0 * eps * std::max(rhs_sup, lap_scale));
  };

  Eigen::VectorXd res = quasilinear_residual(grid, b, out.u_nodal, rhs);
  double res_sup = res.cwiseAbs().maxCoeff();
  if (!std::isfinite(res_sup)) return out;

  const Eigen::VectorXd zero_potential = Eigen::VectorXd::Zero(grid.nodes());
  auto grid_ptr = std::make_shared<RadialGrid>(grid);

  for (int k = 0; k < opts.newton_max; ++k) {
    if (res_sup <= tol_at(out.u_nodal)) {
      out.residual_sup = res_sup;
      out.iterations = k;
      out.ok = true;
      return out;
    }
    const LinearizedOperator jac =
        assemble_operator(grid_ptr, b, out.u_nodal, zero_potential);
    TridiagonalLU<double> lu(jac.sub, jac.diag, jac.super);
    if (lu.singular())
      throw SingularMatrixError("newton: singular tridiagonal Jacobian");
    const Eigen::VectorXd delta = lu.solve(-res);

    double step = 1.0;
    for (;;) {
      Eigen::VectorXd trial = out.u_nodal;
      trial.segment(grid.first_unknown(), grid.unknowns()) += step * delta;
      Eigen::VectorXd trial_res = quasilinear_residual(grid, b, trial, rhs);
      const double trial_sup = trial_res.cwiseAbs().maxCoeff();
      if ((std::isfinite(trial_sup) && trial_sup < res_sup) || !opts.backtracking) {
        out.u_nodal = std::move(trial);
        res = std::move(trial_res);
        res_sup = trial_sup;
        break;
      }
      step *= opts.backtrack_factor;
      if (step < opts.min_step) {
        out.residual_sup = res_sup;
        out.iterations = k + 1;
        out.ok = res_sup <= tol_at(out.u_nodal); // at the roundoff floor is done
        return out;
      }
    }
    out.iterations = k + 1;
  }
  out.residual_sup = res_sup;
  out.ok = res_sup <= tol_at(out.u_nodal);
  return out;
}

} // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::newton_failure: return "newton_failure";
  }
  return "unknown";
}

SolutionField solve_frozen_rhs(GridPtr grid, const Eigen::VectorXd& b_nodal,
                               const Eigen::VectorXd& rhs_nodal,
                               const Eigen::VectorXd& initial_nodal,
                               const SolveOptions& opts) {
  const NewtonOutcome out = newton_frozen_rhs(*grid, b_nodal, rhs_nodal, initial_nodal, opts);
  if (!out.ok)
    throw ConvergenceError("newton stalled at sup residual " +
                           std::to_string(out.residual_sup) + " after " +
                           std::to_string(out.iterations) + " iterations");
  SolutionField field = make_field(std::move(grid), out.u_nodal);
  field.meta.residual_sup = out.residual_sup;
  field.meta.newton_iters = out.iterations;
  return field;
}

SolutionField solve_step(const ProblemSpec& spec, const SolutionField& rhs_source,
                         const SolveOptions& opts) {
  spec.validate();
  if (!rhs_source.grid) throw GridMismatchError("solve_step: source has no grid");
  const RadialGrid& grid = *rhs_source.grid;
  const Eigen::VectorXd b = spec.coefficient.realize(grid);
  Eigen::VectorXd rhs(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i)
    rhs[i] = spec.lambda * spec.nonlinearity.g(rhs_source.values[i]);
  SolutionField field =
      solve_frozen_rhs(rhs_source.grid, b, rhs, rhs_source.values, opts);
  field.meta.lambda = spec.lambda;
  return field;
}

SolveReport monotone_solve(const ProblemSpec& spec, GridPtr grid,
                           const SolveOptions& opts, const SolutionField* start) {
  spec.validate();
  const RadialGrid& g = *grid;
  const Eigen::VectorXd b = spec.coefficient.realize(g);

  SolveReport report;
  report.min_nodal_increment = 0.0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.nodes());
  if (start) {
    if (!start->grid || !start->grid->same_layout(g))
      throw GridMismatchError("monotone_solve: start field grid mismatch");
    u = start->values;
  }

  int total_newton = 0;
  auto finish = [&](SolveStatus status, Eigen::VectorXd values, double residual) {
    report.status = status;
    report.solution = make_field(grid, std::move(values));
    report.solution.meta.lambda = spec.lambda;
    report.solution.meta.residual_sup = residual;
    report.solution.meta.newton_iters = total_newton;
    report.solution.meta.monotone_iters = static_cast<int>(report.increments.size());
    return report;
  };

  double last_residual = 0.0;
  for (int m = 0; m < opts.monotone_max; ++m) {
    Eigen::VectorXd rhs(g.nodes());
    for (int i = 0; i < g.nodes(); ++i)
      rhs[i] = spec.lambda * spec.nonlinearity.g(u[i]);
    // A source beyond this scale forces the next iterate across any sane
    // ceiling but can overflow the Newton algebra first; classify it now.
    constexpr double source_ceiling = 1e100;
    if (!rhs.allFinite() || rhs.cwiseAbs().maxCoeff() > source_ceiling)
      return finish(SolveStatus::diverged, std::move(u), last_residual);

    const NewtonOutcome inner = newton_frozen_rhs(g, b, rhs, u, opts);
    total_newton += inner.iterations;
    if (!inner.ok) {
      // With a positive gradient coefficient the frozen problems lose
      // solvability past the fold before the sup norm runs away, so an inner
      // dead-end reached along a still-growing iterate sequence is blow-up.
      // A converging sequence keeps every frozen problem solvable (sources
      // stay below the minimal solution's), so its inner solves cannot fail.
      const bool growing = !report.increments.empty() &&
                           report.increments.back() > 10.0 * opts.monotone_tol;
      if (growing || inner.u_nodal.cwiseAbs().maxCoeff() > opts.sup_ceiling)
        return finish(SolveStatus::diverged, std::move(u), last_residual);
      return finish(SolveStatus::newton_failure, inner.u_nodal, inner.residual_sup);
    }

    const Eigen::VectorXd increment = inner.u_nodal - u;
    report.increments.push_back(increment.cwiseAbs().maxCoeff());
    report.min_nodal_increment =
        std::min(report.min_nodal_increment, increment.minCoeff());
    last_residual = inner.residual_sup;

    if (inner.u_nodal.cwiseAbs().maxCoeff() > opts.sup_ceiling)
      return finish(SolveStatus::diverged, std::move(u), last_residual);

    u = inner.u_nodal;
    if (report.increments.back() <= opts.monotone_tol)
      return finish(SolveStatus::converged, std::move(u), last_residual);
  }
  return finish(SolveStatus::max_iters, std::move(u), last_residual);
}

SolutionField unit_rhs_supersolution(const ProblemSpec& spec, GridPtr grid,
                                     const SolveOptions& opts) {
  if (spec.domain.kind != DomainKind::ball)
    throw RegimeError("unit_rhs_supersolution requires the ball domain");
  const RadialGrid& g = *grid;
  const Eigen::VectorXd b = spec.coefficient.realize(g);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(g.nodes());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.nodes());
  return solve_frozen_rhs(std::move(grid), b, rhs, zero, opts);
}

} // namespace gradquad
