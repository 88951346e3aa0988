#include "gradquad/hopf_cole.hpp"

#include <cmath>
#include <string>

#include "gradquad/errors.hpp"

namespace gradquad {

namespace {

constexpr double kMaxExponent = 700.0;

double forward_checked(double u, double b, int node) {
  const double x = b * u;
  if (x > kMaxExponent) {
    std::string where = node >= 0 ? " at node " + std::to_string(node) : "";
    throw RangeError("hopf_cole_forward: exponent " + std::to_string(x) +
                     " exceeds 700" + where);
  }
  return b > 0.0 ? std::expm1(x) : -std::expm1(x);
}

double inverse_checked(double v, double b, int node) {
  std::string where = node >= 0 ? " at node " + std::to_string(node) : "";
  if (b > 0.0) {
    if (!(v > -1.0))
      throw DomainError("hopf_cole_inverse (positive_b branch): v = " +
                        std::to_string(v) + " must be > -1" + where);
    return std::log1p(v) / b;
  }
  if (!(v >= 0.0 && v < 1.0))
    throw DomainError("hopf_cole_inverse (negative_b branch): v = " +
                      std::to_string(v) + " must lie in [0, 1)" + where);
  return std::log1p(-v) / b;
}

} // namespace

double hopf_cole_forward_value(double u, double b) {
  if (b == 0.0) throw ConfigError("hopf_cole_forward: b must be nonzero");
  return forward_checked(u, b, -1);
}

double hopf_cole_inverse_value(double v, double b) {
  if (b == 0.0) throw ConfigError("hopf_cole_inverse: b must be nonzero");
  return inverse_checked(v, b, -1);
}

SolutionField hopf_cole_forward(const SolutionField& u, double b) {
  if (b == 0.0) throw ConfigError("hopf_cole_forward: b must be nonzero");
  SolutionField out = u;
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    out.values[i] = forward_checked(u.values[i], b, static_cast<int>(i));
  return out;
}

SolutionField hopf_cole_inverse(const SolutionField& v, double b) {
  if (b == 0.0) throw ConfigError("hopf_cole_inverse: b must be nonzero");
  SolutionField out = v;
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    out.values[i] = inverse_checked(v.values[i], b, static_cast<int>(i));
  return out;
}

} // namespace gradquad
