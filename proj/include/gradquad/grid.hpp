#pragma once

#include <Eigen/Core>
#include <memory>

namespace gradquad {

enum class DomainKind { ball, interval };

/// Uniform radial mesh on [0, R] with M cells (M+1 nodes, r_i = R*i/M).
///
/// Two domain kinds share the layout:
///  - ball: radial reduction of the ball of radius R in dimension n.
///    Node 0 is the center (symmetry closure), node M carries the Dirichlet
///    condition; unknowns are nodes 0..M-1.  Quadrature weights are
///    trapezoidal with density omega_{n-1} r^{n-1}, so integrating 1
///    recovers the ball volume.
///  - interval: the segment [0, 1] with Dirichlet conditions at both ends;
///    unknowns are nodes 1..M-1 and weights are plain trapezoid.
///
/// The dimension n >= 1 is real; it enters only through the first-order
/// coefficient (n-1)/r and the quadrature density.
class RadialGrid {
public:
  RadialGrid(DomainKind domain, double radius, double dimension, int cells);

  DomainKind domain() const { return domain_; }
  double radius() const { return radius_; }
  double dimension() const { return dimension_; }
  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double spacing() const { return spacing_; }
  double node(int i) const { return radii_[i]; }

  const Eigen::VectorXd& radii() const { return radii_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Index of the first unknown node (0 for ball, 1 for interval).
  int first_unknown() const { return domain_ == DomainKind::ball ? 0 : 1; }
  /// Number of unknown (non-Dirichlet) nodes.
  int unknowns() const { return cells_ - first_unknown(); }

  /// Trapezoidal integral of a nodal array against the domain measure.
  double integrate(const Eigen::Ref<const Eigen::VectorXd>& nodal) const;

  bool same_layout(const RadialGrid& other) const;

private:
  DomainKind domain_;
  double radius_;
  double dimension_;
  int cells_;
  double spacing_;
  Eigen::VectorXd radii_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(DomainKind domain, double radius, double dimension, int cells);

struct SolveMeta {
  double lambda = 0.0;
  double residual_sup = 0.0;
  int newton_iters = 0;
  int monotone_iters = 0;
};

/// Nodal scalar field on a RadialGrid (values has grid->nodes() entries;
/// solver outputs keep values[M] = 0 on the Dirichlet boundary).
struct SolutionField {
  GridPtr grid;
  Eigen::VectorXd values;
  SolveMeta meta;

  double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

SolutionField make_field(GridPtr grid, Eigen::VectorXd values);

} // namespace gradquad
