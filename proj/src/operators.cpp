#include "gradquad/operators.hpp"

#include <string>

#include "gradquad/errors.hpp"

namespace gradquad {

namespace {

void check_nodal(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& u,
                 const char* who) {
  if (u.size() != grid.nodes())
    throw GridMismatchError(std::string(who) + ": field has " + std::to_string(u.size()) +
                            " nodes, grid has " + std::to_string(grid.nodes()));
}

} // namespace

Eigen::VectorXd radial_laplacian(const RadialGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& u) {
  check_nodal(grid, u, "radial_laplacian");
  const int m = grid.cells();
  const double h = grid.spacing();
  const double n = grid.dimension();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
  // Nested differences: the naive three-term form loses ~eps*|u|/h^2
  // absolute accuracy, which matters at fine grids.
  for (int i = 1; i < m; ++i) {
    const double dp = u[i + 1] - u[i];
    const double dm = u[i] - u[i - 1];
    out[i] = (dp - dm) / (h * h) + (n - 1.0) / grid.node(i) * (dp + dm) / (2.0 * h);
  }
  if (grid.domain() == DomainKind::ball)
    out[0] = 2.0 * n * (u[1] - u[0]) / (h * h);
  return out;
}

Eigen::VectorXd nodal_gradient(const RadialGrid& grid,
                               const Eigen::Ref<const Eigen::VectorXd>& u) {
  check_nodal(grid, u, "nodal_gradient");
  const int m = grid.cells();
  const double h = grid.spacing();
  Eigen::VectorXd out(m + 1);
  for (int i = 1; i < m; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  out[0] = grid.domain() == DomainKind::ball
               ? 0.0
               : (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  out[m] = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);
  return out;
}

Eigen::VectorXd nodal_gradient_sq(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& u) {
  return nodal_gradient(grid, u).cwiseAbs2();
}

Eigen::VectorXd restrict_unknowns(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& nodal) {
  check_nodal(grid, nodal, "restrict_unknowns");
  return nodal.segment(grid.first_unknown(), grid.unknowns());
}

Eigen::VectorXd prolong_unknowns(const RadialGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& unknowns) {
  if (unknowns.size() != grid.unknowns())
    throw GridMismatchError("prolong_unknowns: size mismatch");
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(grid.nodes());
  nodal.segment(grid.first_unknown(), grid.unknowns()) = unknowns;
  return nodal;
}

Eigen::VectorXd LinearizedOperator::apply(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int k = size();
  if (x.size() != k) throw GridMismatchError("LinearizedOperator::apply: size mismatch");
  Eigen::VectorXd y(k);
  for (int j = 0; j < k; ++j) {
    double s = diag[j] * x[j];
    if (j > 0) s += sub[j] * x[j - 1];
    if (j + 1 < k) s += super[j] * x[j + 1];
    y[j] = s;
  }
  return y;
}

LinearizedOperator assemble_operator(GridPtr grid, const Eigen::VectorXd& b_nodal,
                                     const Eigen::VectorXd& u_nodal,
                                     const Eigen::VectorXd& potential_nodal) {
  const RadialGrid& g = *grid;
  check_nodal(g, b_nodal, "assemble_operator (coefficient)");
  check_nodal(g, u_nodal, "assemble_operator (state)");
  check_nodal(g, potential_nodal, "assemble_operator (potential)");

  const int k = g.unknowns();
  const int base = g.first_unknown();
  const double h = g.spacing();
  const double n = g.dimension();
  const double inv_h2 = 1.0 / (h * h);

  const Eigen::VectorXd gradient = nodal_gradient(g, u_nodal);

  LinearizedOperator op;
  op.grid = std::move(grid);
  op.sub = Eigen::VectorXd::Zero(k);
  op.diag = Eigen::VectorXd::Zero(k);
  op.super = Eigen::VectorXd::Zero(k);
  op.drift = Eigen::VectorXd::Zero(k);
  op.potential = Eigen::VectorXd::Zero(k);

  for (int j = 0; j < k; ++j) {
    const int i = base + j;
    op.potential[j] = potential_nodal[i];
    if (i == 0) {
      // Ball center: symmetry closure; the gradient (and with it the
      // drift term) vanishes there.
      op.diag[j] = 2.0 * n * inv_h2 - potential_nodal[0];
      op.super[j] = -2.0 * n * inv_h2;
      continue;
    }
    const double drift = 2.0 * b_nodal[i] * gradient[i];
    op.drift[j] = drift;
    const double radial = (n - 1.0) / (2.0 * h * g.node(i));
    const double convect = drift / (2.0 * h);
    op.diag[j] = 2.0 * inv_h2 - potential_nodal[i];
    if (j > 0) op.sub[j] = -inv_h2 + radial + convect;
    if (j + 1 < k) op.super[j] = -inv_h2 - radial - convect;
  }
  return op;
}

LinearizedOperator assemble_linearized(const ProblemSpec& spec, const SolutionField& u) {
  if (!u.grid) throw GridMismatchError("assemble_linearized: field has no grid");
  const RadialGrid& g = *u.grid;
  const Eigen::VectorXd b = spec.coefficient.realize(g);
  Eigen::VectorXd potential(g.nodes());
  for (int i = 0; i < g.nodes(); ++i)
    potential[i] = spec.lambda * spec.nonlinearity.gp(u.values[i]);
  return assemble_operator(u.grid, b, u.values, potential);
}

} // namespace gradquad
