#pragma once

#include <Eigen/Core>
#include <vector>

#include "gradquad/grid.hpp"
#include "gradquad/problem.hpp"

namespace gradquad {

enum class SolveStatus { converged, diverged, max_iters, newton_failure };

const char* to_string(SolveStatus status);

struct SolveOptions {
  double newton_tol = 1e-10;  // sup-norm residual target of the inner solve
  int newton_max = 50;
  double monotone_tol = 1e-9; // sup-norm increment target of the outer loop
  int monotone_max = 20000;   // near a fold the contraction rate approaches 1
  bool backtracking = true;   // damped Newton; false = full steps
  double backtrack_factor = 0.5;
  double min_step = 9.5367431640625e-07; // 2^-20
  double sup_ceiling = 1e3;   // blow-up classification threshold
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iters;
  SolutionField solution; // converged: the minimal solution; diverged: last bounded iterate
  std::vector<double> increments; // sup-norm outer increments
  double min_nodal_increment = 0; // most negative nodal increment seen (monotonicity witness)
};

/// Damped Newton solve of -Delta_h u - b(x) |grad_h u|^2 = rhs with the
/// boundary values fixed at zero.  The Jacobian is the drift linearization
/// -Delta_h - 2 b(x) u' d/dr (the frozen rhs carries no state coupling).
/// Throws SingularMatrixError on a zero pivot and ConvergenceError when
/// backtracking exhausts the minimum step.
SolutionField solve_frozen_rhs(GridPtr grid, const Eigen::VectorXd& b_nodal,
                               const Eigen::VectorXd& rhs_nodal,
                               const Eigen::VectorXd& initial_nodal,
                               const SolveOptions& opts = {});

/// One outer step: solves the quasilinear problem with the source frozen at
/// lambda * g(rhs_source).
SolutionField solve_step(const ProblemSpec& spec, const SolutionField& rhs_source,
                         const SolveOptions& opts = {});

/// Monotone iteration from u = 0 (or an optional sub-minimal start):
/// u_m solves -Delta u_m - b |grad u_m|^2 = lambda g(u_{m-1}).
/// Stops at increment <= monotone_tol (converged), iterate above the
/// sup ceiling or overflowing source (diverged), or iteration caps.
SolveReport monotone_solve(const ProblemSpec& spec, GridPtr grid,
                           const SolveOptions& opts = {},
                           const SolutionField* start = nullptr);

/// Supersolution for the smallness criterion: solves
/// -Delta w - b(x) |grad w|^2 = 1 on the ball (lambda plays no role).
/// The iteration is guaranteed to converge whenever lambda * g(max w) < 1.
SolutionField unit_rhs_supersolution(const ProblemSpec& spec, GridPtr grid,
                                     const SolveOptions& opts = {});

} // namespace gradquad
