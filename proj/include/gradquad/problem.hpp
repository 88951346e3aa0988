#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <utility>

#include "gradquad/grid.hpp"
#include "gradquad/nonlinearity.hpp"

namespace gradquad {

enum class CoefficientKind { constant, tabulated, formula };

/// Spatial coefficient b(x) of the quadratic gradient term, radial.
class CoefficientB {
public:
  static CoefficientB constant(double b);
  /// Nodal values; must match the grid the problem is solved on.
  static CoefficientB tabulated(Eigen::VectorXd values);
  /// Registered radial formulas.  Shipped: "parabolic" with params
  /// {scale, curvature}: b(r) = scale * (1 - curvature * r^2).
  static CoefficientB formula(const std::string& id, std::map<std::string, double> params);

  CoefficientKind kind() const { return kind_; }
  double constant_value() const;
  const Eigen::VectorXd& table() const { return table_; }
  const std::string& formula_id() const { return formula_id_; }
  const std::map<std::string, double>& formula_params() const { return params_; }

  /// Nodal values on a grid (GridMismatchError if tabulated sizes differ).
  Eigen::VectorXd realize(const RadialGrid& grid) const;
  /// (b_lo, b_hi) over the grid nodes.
  std::pair<double, double> bounds(const RadialGrid& grid) const;

private:
  CoefficientKind kind_ = CoefficientKind::constant;
  double value_ = 0.0;
  Eigen::VectorXd table_;
  std::string formula_id_;
  std::map<std::string, double> params_;
};

struct DomainSpec {
  DomainKind kind = DomainKind::ball;
  double radius = 1.0; // fixed to 1 for the interval domain
};

/// Full problem statement for -Delta u - b(x) |grad u|^2 = lambda g(u),
/// u = 0 on the boundary, radial symmetry at r = 0 on the ball.
struct ProblemSpec {
  DomainSpec domain;
  double dimension = 1.0;
  CoefficientB coefficient = CoefficientB::constant(0.0);
  NonlinearityG nonlinearity = NonlinearityG::exponential(1.0);
  double lambda = 0.0;

  void validate() const;
  ProblemSpec with_lambda(double value) const {
    ProblemSpec s = *this;
    s.lambda = value;
    return s;
  }
  GridPtr grid(int cells) const {
    return make_grid(domain.kind, domain.radius, dimension, cells);
  }
};

} // namespace gradquad
