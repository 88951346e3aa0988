#pragma once

#include "gradquad/grid.hpp"

namespace gradquad {

/// Pointwise substitution removing the quadratic gradient term for constant b.
/// b > 0: v = e^{bu} - 1 (v > -1);  b < 0: v = 1 - e^{bu} (v in [0, 1) for u >= 0).
/// Throws RangeError when b*u exceeds exponent 700, ConfigError for b = 0.
double hopf_cole_forward_value(double u, double b);

/// Inverse substitution. b > 0 requires v > -1; b < 0 requires v in [0, 1);
/// violations throw DomainError naming the branch.
double hopf_cole_inverse_value(double v, double b);

/// Nodal versions; errors name the offending node index.
SolutionField hopf_cole_forward(const SolutionField& u, double b);
SolutionField hopf_cole_inverse(const SolutionField& v, double b);

} // namespace gradquad
