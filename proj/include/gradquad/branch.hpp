#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gradquad/grid.hpp"
#include "gradquad/problem.hpp"
#include "gradquad/solve.hpp"
#include "gradquad/stability.hpp"

namespace gradquad {

struct BranchRecord {
  double lambda = 0.0;
  double sup_norm = 0.0;
  double h1_norm = 0.0;
  double lq_norm_eu = 0.0;  // ||e^u||_{L^q} for the configured q
  double mu1 = 0.0;
  bool converged = false;
  int monotone_iters = 0;
};

struct BracketSeed {
  double lambda_lo = 0.0;  // last converged lambda (0 when none converged)
  double lambda_hi = 0.0;  // first diverged lambda
};

struct BranchOptions {
  SolveOptions solve;
  EigenOptions eigen;
  double lq_exponent = 2.0;
  bool warm_start = true;
  int cold_check_stride = 10;  // cold re-solve at every stride-th point
  bool certificates = true;    // attach mu1 per converged record
  double auto_start = 1.0;     // auto schedule begins here...
  double auto_ratio = 1.2;     // ...and grows geometrically
  double lambda_ceiling = 1e12;
};

// Sweep result. `solutions` holds the converged fields in record order;
// a diverged tail record (always the last one) has no matching entry.
struct BranchResult {
  std::vector<BranchRecord> records;
  std::vector<SolutionField> solutions;
  // min over consecutive converged pairs of min_i(u_next_i - u_prev_i)
  double min_interlambda_increment = std::numeric_limits<double>::infinity();
  std::optional<BracketSeed> seed;  // set when the sweep hit divergence
};

// Record assembly for one solve; shared by the sequential sweep and any
// caller distributing cold solves over workers.
BranchRecord branch_record(const ProblemSpec& spec, const SolveReport& rep,
                           const BranchOptions& opts);

// Traces the minimal branch over the given lambda values (strictly
// increasing, all >= 0). An empty list requests the automatic geometric
// schedule, which runs until the first divergence. The first divergence
// always terminates the sweep and fills `seed`.
BranchResult trace_branch(const ProblemSpec& spec, const GridPtr& grid,
                          const std::vector<double>& lambdas,
                          const BranchOptions& opts = {});

struct LambdaStarBracket {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double width() const { return lambda_hi - lambda_lo; }
};

// Brackets the fold by halving/doubling from lambda_init and bisecting
// on solvability with cold starts until the width drops below tol.
LambdaStarBracket lambda_star_bracket(const ProblemSpec& spec,
                                      const GridPtr& grid, double tol,
                                      const BranchOptions& opts = {},
                                      double lambda_init = 1.0);

struct WeakFormTerm {
  int index = 0;
  double laplacian_term = 0.0;  // -int u lap(xi) dmu
  double gradient_term = 0.0;   //  int b |grad u|^2 xi dmu
  double reaction_term = 0.0;   //  lambda int g(u) xi dmu
  double residual = 0.0;        //  laplacian - gradient - reaction
  double scale = 0.0;
  double rel_residual = 0.0;
};

struct ExtremalProxy {
  SolutionField solution;
  double lambda = 0.0;
  std::vector<WeakFormTerm> terms;
  double worst_rel_residual = 0.0;
  bool informational = false;  // reaction outside the exponential family
};

// Weak-form integrals of one test function xi (given with its Laplacian).
WeakFormTerm weak_form_term(const ProblemSpec& spec, const SolutionField& u,
                            const Eigen::VectorXd& xi,
                            const Eigen::VectorXd& xi_lap, int index = 0);

// Solution at bracket.lambda_lo together with the weak-form residuals of
// eight polynomial bubbles vanishing on the Dirichlet boundary.
ExtremalProxy extremal_proxy(const ProblemSpec& spec, const GridPtr& grid,
                             const LambdaStarBracket& bracket,
                             const BranchOptions& opts = {});

}  // namespace gradquad
