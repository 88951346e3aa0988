#include "gradquad/grid.hpp"

#include <cmath>

#include "gradquad/errors.hpp"

namespace gradquad {

namespace {

// Surface area of the unit sphere S^{n-1} for real n (2 for n = 1).
double sphere_surface(double n) {
  return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0);
}

} // namespace

RadialGrid::RadialGrid(DomainKind domain, double radius, double dimension, int cells)
    : domain_(domain), radius_(radius), dimension_(dimension), cells_(cells) {
  if (!(radius > 0.0)) throw ConfigError("grid radius must be positive");
  if (!(dimension >= 1.0)) throw ConfigError("dimension must be >= 1");
  if (cells < 16) throw ConfigError("grid needs at least 16 cells");
  if (domain == DomainKind::interval && radius != 1.0)
    throw ConfigError("interval domain is fixed to [0, 1]");

  spacing_ = radius / cells;
  radii_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) radii_[i] = radius * i / cells;

  const double factor =
      domain == DomainKind::ball ? sphere_surface(dimension) : 1.0;
  weights_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    const double density = std::pow(radii_[i], dimension - 1.0);
    const double trap = (i == 0 || i == cells) ? 0.5 : 1.0;
    weights_[i] = factor * density * trap * spacing_;
  }
}

double RadialGrid::integrate(const Eigen::Ref<const Eigen::VectorXd>& nodal) const {
  if (nodal.size() != weights_.size())
    throw GridMismatchError("integrate: field has " + std::to_string(nodal.size()) +
                            " nodes, grid has " + std::to_string(weights_.size()));
  return weights_.dot(nodal);
}

bool RadialGrid::same_layout(const RadialGrid& other) const {
  return domain_ == other.domain_ && cells_ == other.cells_ &&
         radius_ == other.radius_ && dimension_ == other.dimension_;
}

GridPtr make_grid(DomainKind domain, double radius, double dimension, int cells) {
  return std::make_shared<RadialGrid>(domain, radius, dimension, cells);
}

SolutionField make_field(GridPtr grid, Eigen::VectorXd values) {
  if (!grid) throw GridMismatchError("make_field: null grid");
  if (values.size() != grid->nodes())
    throw GridMismatchError("make_field: " + std::to_string(values.size()) +
                            " values for " + std::to_string(grid->nodes()) + " nodes");
  return SolutionField{std::move(grid), std::move(values), {}};
}

} // namespace gradquad
