#include "gradquad/problem.hpp"

#include <cmath>

#include "gradquad/errors.hpp"

namespace gradquad {

CoefficientB CoefficientB::constant(double b) {
  CoefficientB c;
  c.kind_ = CoefficientKind::constant;
  c.value_ = b;
  return c;
}

CoefficientB CoefficientB::tabulated(Eigen::VectorXd values) {
  if (values.size() < 2) throw ConfigError("tabulated coefficient needs nodal values");
  CoefficientB c;
  c.kind_ = CoefficientKind::tabulated;
  c.table_ = std::move(values);
  return c;
}

CoefficientB CoefficientB::formula(const std::string& id,
                                   std::map<std::string, double> params) {
  if (id != "parabolic")
    throw ConfigError("unknown coefficient formula '" + id + "' (known: parabolic)");
  for (const auto& [key, _] : params)
    if (key != "scale" && key != "curvature")
      throw ConfigError("coefficient formula 'parabolic': unknown param '" + key + "'");
  CoefficientB c;
  c.kind_ = CoefficientKind::formula;
  c.formula_id_ = id;
  c.params_ = std::move(params);
  return c;
}

double CoefficientB::constant_value() const {
  if (kind_ != CoefficientKind::constant)
    throw RegimeError("coefficient is not constant");
  return value_;
}

Eigen::VectorXd CoefficientB::realize(const RadialGrid& grid) const {
  switch (kind_) {
    case CoefficientKind::constant:
      return Eigen::VectorXd::Constant(grid.nodes(), value_);
    case CoefficientKind::tabulated:
      if (table_.size() != grid.nodes())
        throw GridMismatchError("tabulated coefficient has " +
                                std::to_string(table_.size()) + " values, grid has " +
                                std::to_string(grid.nodes()) + " nodes");
      return table_;
    case CoefficientKind::formula: {
      const double scale = params_.count("scale") ? params_.at("scale") : 1.0;
      const double curv = params_.count("curvature") ? params_.at("curvature") : 0.0;
      Eigen::VectorXd out(grid.nodes());
      for (int i = 0; i < grid.nodes(); ++i) {
        const double r = grid.node(i);
        out[i] = scale * (1.0 - curv * r * r);
      }
      return out;
    }
  }
  throw Error("unreachable coefficient kind");
}

std::pair<double, double> CoefficientB::bounds(const RadialGrid& grid) const {
  if (kind_ == CoefficientKind::constant) return {value_, value_};
  const Eigen::VectorXd values = realize(grid);
  return {values.minCoeff(), values.maxCoeff()};
}

void ProblemSpec::validate() const {
  if (!(domain.radius > 0.0)) throw ConfigError("domain radius must be positive");
  if (domain.kind == DomainKind::interval && domain.radius != 1.0)
    throw ConfigError("interval domain is fixed to [0, 1]");
  if (!(dimension >= 1.0)) throw ConfigError("dimension must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be finite and nonnegative");
}

} // namespace gradquad
