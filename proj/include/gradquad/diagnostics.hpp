#pragma once

#include <limits>
#include <string>

#include "gradquad/grid.hpp"
#include "gradquad/nonlinearity.hpp"
#include "gradquad/problem.hpp"

namespace gradquad {

enum class ThresholdRegime { constant_b_pos, constant_b_neg, general_b, bootstrap };

const char* to_string(ThresholdRegime r);

struct ThresholdInputs {
  double b_lo = std::numeric_limits<double>::quiet_NaN();
  double b_hi = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
};

// Dimension/exponent thresholds plus the admissible alpha interval.
// Real-valued thresholds are reported together with the largest integer
// dimension strictly below them (n_integer, -1 when not applicable).
struct ThresholdReport {
  ThresholdRegime regime = ThresholdRegime::constant_b_pos;
  double n_threshold = std::numeric_limits<double>::quiet_NaN();
  int n_integer = -1;
  double q_threshold = std::numeric_limits<double>::quiet_NaN();
  bool has_alpha_window = false;
  double alpha_lo = std::numeric_limits<double>::quiet_NaN();
  double alpha_hi = std::numeric_limits<double>::quiet_NaN();
  ThresholdInputs inputs;
  bool applicable = false;
  std::string reason;  // empty when applicable
};

ThresholdReport threshold_constant_b_pos(double b, double beta);
ThresholdReport threshold_constant_b_neg(double b, double beta);

// Variable coefficient bounded by 0 < b_lo <= b(x) <= b_hi; delta/eta are
// the splitting weights with delta^2 + eta^2 <= 1. b_lo == b_hi takes a
// dedicated constant limit path (eta = 1, oscillation term dropped).
ThresholdReport threshold_general_b(double b_lo, double b_hi, double delta,
                                    double eta);

// Convenience preset delta^2 = 2 b_hi sqrt(b_hi - b_lo).
double oscillation_delta_preset(double b_lo, double b_hi);

// Gradient-weighted integral inequality
//   int |grad u|^2 e^{gamma b u} (e^{b u}-1)^{2 alpha-2}
//     <= lambda/(b(2 alpha+gamma-3)) int e^{(beta+(2 alpha+gamma-2)b)u}
//        + lambda L_gamma
// with b taken as the nodal maximum and L_gamma assembled by running the
// telescoping recursion down to gamma = 2 (where it vanishes exactly).
struct GradientInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  double l_gamma = 0.0;
  bool holds = false;
};

GradientInequality check_gradient_inequality(const ProblemSpec& spec,
                                   const SolutionField& u, double alpha,
                                   int gamma);

// lambda int g(u)(e^{bu}-1) dmu  vs  b int |grad u|^2 dmu, constant b > 0.
struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

EnergyIdentity energy_identity_check(const ProblemSpec& spec,
                                     const SolutionField& u);

double h1_norm(const SolutionField& u);

// log of ||e^u||_{L^q} with the radial measure, evaluated in log space so
// pre-blow-up iterates never overflow; lq_norm_exp exponentiates it.
double log_lq_norm_exp(const SolutionField& u, double q);
double lq_norm_exp(const SolutionField& u, double q);

// liminf_{s->inf} g'(s)(e^{bs}-1)/(b g(s)) estimated on a tail sample,
// with exact analytic values for the registered nonlinearity kinds.
struct H1Condition {
  bool satisfied = false;
  double liminf_estimate = 0.0;
};

H1Condition h1_condition_constant_b(const NonlinearityG& g, double b);

double truncate_t1(double s);

// Split-gradient bound for b(x) <= -eps < 0:
//   int_{u<=1} |grad u|^2 + eps int_{u>1} |grad u|^2 <= lambda int |g(u)|.
struct TruncationCheck {
  double lhs_low = 0.0;
  double lhs_high = 0.0;
  double rhs = 0.0;
  double epsilon = 0.0;
  bool holds = false;
};

TruncationCheck truncation_h1_check(const ProblemSpec& spec,
                                    const SolutionField& u);

// For 0 <= b(x) <= b_hi and unit-exponent reaction: v = e^{b_hi u} - 1
// should satisfy -lap v <= lambda b_hi (v+1)^{(b_hi+1)/b_hi} nodally.
struct BootstrapCheck {
  double residual_max = 0.0;
  double scale = 0.0;
  bool is_subsolution = false;
};

BootstrapCheck bootstrap_subsolution_check(const ProblemSpec& spec,
                                           const SolutionField& u);

}  // namespace gradquad
