#pragma once

#include <Eigen/Core>

#include "gradquad/grid.hpp"
#include "gradquad/operators.hpp"
#include "gradquad/problem.hpp"

namespace gradquad {

enum class StabilityVerdict { stable, semi_stable, unstable };

const char* to_string(StabilityVerdict v);

struct EigenOptions {
  double increment_tol = 1e-10;   // stop when the eigenvalue estimate settles
  double residual_target = 1e-8;  // required sup norm of L*phi - mu*phi
  int max_iters = 10000;
  double verdict_tol = 1e-6;      // half-width of the semi_stable band
};

// Principal (smallest) eigenvalue of the linearized operator together with
// its positive eigenfunction, normalized so the largest entry equals one.
struct EigenCertificate {
  double mu1 = 0.0;
  Eigen::VectorXd eigenfunction;  // nodal, Dirichlet entries zero
  double positivity_margin = 0.0; // min over unknown nodes
  double residual = 0.0;          // sup norm of the eigen-residual
  StabilityVerdict verdict = StabilityVerdict::unstable;
  int iterations = 0;
};

// Smallest eigenvalue of an assembled tridiagonal operator via shifted
// inverse iteration. Throws PositivityError if the computed eigenfunction
// is not strictly positive and ConvergenceError if iteration stalls.
EigenCertificate principal_eigenvalue(const LinearizedOperator& op,
                                      const EigenOptions& opts = {});

// Certificate for the linearization of the problem around a solution.
EigenCertificate stability_certificate(const ProblemSpec& spec,
                                       const SolutionField& u,
                                       const EigenOptions& opts = {});

// Same certificate with the zero-order coefficient damped to
// (lambda - epsilon) * g'(u); requires 0 < epsilon <= lambda.
EigenCertificate epsilon_relaxed_check(const ProblemSpec& spec,
                                       const SolutionField& u, double epsilon,
                                       const EigenOptions& opts = {});

}  // namespace gradquad
