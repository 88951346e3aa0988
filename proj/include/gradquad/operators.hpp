#pragma once

#include <Eigen/Core>

#include "gradquad/grid.hpp"
#include "gradquad/problem.hpp"

namespace gradquad {

/// Discrete radial Laplacian u'' + (n-1)/r u' at the nodes.
///
/// Interior nodes use second-order central differences (exact on
/// quadratics).  On the ball the center node uses the symmetry closure
/// 2n (u_1 - u_0) / h^2.  Boundary rows (and the left end for the
/// interval domain) are not meaningful and are set to zero.
Eigen::VectorXd radial_laplacian(const RadialGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& u);

/// Nodal first derivative: central differences at interior nodes,
/// 0 at the ball center (symmetry), second-order one-sided at the ends.
Eigen::VectorXd nodal_gradient(const RadialGrid& grid,
                               const Eigen::Ref<const Eigen::VectorXd>& u);

/// Pointwise |grad u|^2 = (u')^2 on the nodes.
Eigen::VectorXd nodal_gradient_sq(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& u);

/// Restriction of a nodal array to the unknown (non-Dirichlet) nodes.
Eigen::VectorXd restrict_unknowns(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& nodal);

/// Extension of an unknown vector to a nodal array with zero boundary values.
Eigen::VectorXd prolong_unknowns(const RadialGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& unknowns);

/// Tridiagonal matrix of the linearized operator
///   L = -Delta_h - drift(x) d/dr - potential(x)
/// acting on the unknown nodes (Dirichlet values eliminated).
/// Band convention is row-wise: sub[j] couples row j to column j-1
/// (sub[0] = 0), super[j] couples row j to column j+1 (super[k-1] = 0).
struct LinearizedOperator {
  GridPtr grid;
  Eigen::VectorXd sub, diag, super;
  Eigen::VectorXd drift;     // 2 b(x) u'(x) at the unknown nodes
  Eigen::VectorXd potential; // lambda g'(u) at the unknown nodes

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Assembles L from nodal coefficient, state, and potential arrays.
LinearizedOperator assemble_operator(GridPtr grid, const Eigen::VectorXd& b_nodal,
                                     const Eigen::VectorXd& u_nodal,
                                     const Eigen::VectorXd& potential_nodal);

/// Linearization of the full problem around state u:
/// drift = 2 b(x) u', potential = lambda g'(u).
LinearizedOperator assemble_linearized(const ProblemSpec& spec, const SolutionField& u);

} // namespace gradquad
