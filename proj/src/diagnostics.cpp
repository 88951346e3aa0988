#include "gradquad/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gradquad/errors.hpp"
#include "gradquad/operators.hpp"

namespace gradquad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExpCeiling = 700.0;  // exp stays finite below this

double checked_exp(double arg, const char* term) {
  if (arg > kExpCeiling)
    throw RangeError(std::string("exponent overflow while evaluating ") + term +
                     " (argument " + std::to_string(arg) + ")");
  return std::exp(arg);
}

int largest_integer_below(double threshold) {
  if (!std::isfinite(threshold)) return -1;
  const double c = std::ceil(threshold);
  return static_cast<int>(c) - 1;
}

}  // namespace

const char* to_string(ThresholdRegime r) {
  switch (r) {
    case ThresholdRegime::constant_b_pos: return "constant_b_pos";
    case ThresholdRegime::constant_b_neg: return "constant_b_neg";
    case ThresholdRegime::general_b: return "general_b";
    case ThresholdRegime::bootstrap: return "bootstrap";
  }
  return "constant_b_pos";
}

ThresholdReport threshold_constant_b_pos(double b, double beta) {
  if (!(b > 0.0)) throw ConfigError("constant_b_pos requires b > 0");
  if (!(beta > 0.0)) throw ConfigError("constant_b_pos requires beta > 0");
  ThresholdReport rep;
  rep.regime = ThresholdRegime::constant_b_pos;
  rep.inputs.b_lo = rep.inputs.b_hi = b;
  rep.inputs.beta = beta;
  const double ratio = b / beta;
  const double root = std::sqrt(1.0 + ratio);
  rep.n_threshold = 6.0 + 4.0 * ratio + 4.0 * root;
  rep.q_threshold = 3.0 + 2.0 * ratio + 2.0 * root;
  rep.n_integer = largest_integer_below(rep.n_threshold);
  if (beta > b / 8.0) {
    rep.has_alpha_window = true;
    rep.alpha_lo = 0.5;
    rep.alpha_hi = (beta + std::sqrt(beta * (beta + b))) / b;
    rep.applicable = true;
  } else {
    rep.applicable = false;
    rep.reason = "beta <= b/8: no admissible alpha";
  }
  return rep;
}

ThresholdReport threshold_constant_b_neg(double b, double beta) {
  if (!(b < 0.0)) throw ConfigError("constant_b_neg requires b < 0");
  ThresholdReport rep;
  rep.regime = ThresholdRegime::constant_b_neg;
  rep.inputs.b_lo = rep.inputs.b_hi = b;
  rep.inputs.beta = beta;
  if (!(beta > -b)) {
    rep.applicable = false;
    rep.reason = "beta <= -b: absorption too weak for the negative-b estimate";
    return rep;
  }
  const double ratio = b / beta;
  rep.n_threshold = 6.0 + 4.0 * ratio + 4.0 * std::sqrt(1.0 + ratio);
  rep.n_integer = largest_integer_below(rep.n_threshold);
  rep.applicable = true;
  return rep;
}

ThresholdReport threshold_general_b(double b_lo, double b_hi, double delta,
                                    double eta) {
  if (!(b_hi > 0.0)) throw ConfigError("general_b requires b_hi > 0");
  if (!(b_lo <= b_hi)) throw ConfigError("general_b requires b_lo <= b_hi");
  ThresholdReport rep;
  rep.regime = ThresholdRegime::general_b;
  rep.inputs.b_lo = b_lo;
  rep.inputs.b_hi = b_hi;
  rep.inputs.beta = 1.0;  // unit-exponent reaction is baked into this regime

  if (b_lo == b_hi) {
    // Constant limit: eta -> 1, the oscillation term vanishes exactly.
    rep.inputs.eta = 1.0;
    rep.inputs.delta = 0.0;
    if (!(b_hi < 8.0)) {
      rep.applicable = false;
      rep.reason = "b >= 8: oscillation condition fails even in the constant limit";
      return rep;
    }
    const double radicand = 1.0 + b_hi;
    const double root = std::sqrt(radicand);
    rep.q_threshold = 3.0 + 2.0 * b_hi + 2.0 * root;
    rep.n_threshold = 6.0 + 4.0 * b_hi + 4.0 * root;
    rep.n_integer = largest_integer_below(rep.n_threshold);
    rep.has_alpha_window = true;
    rep.alpha_lo = 0.5;
    rep.alpha_hi = (1.0 + root) / b_hi;
    rep.applicable = true;
    return rep;
  }

  if (!(delta > 0.0) || !(eta > 0.0))
    throw ConfigError("general_b requires delta > 0 and eta > 0");
  if (delta * delta + eta * eta > 1.0 + 1e-15)
    throw ConfigError("general_b requires delta^2 + eta^2 <= 1");
  rep.inputs.delta = delta;
  rep.inputs.eta = eta;

  const double d2 = delta * delta;
  const double e2 = eta * eta;
  const double osc_budget = (d2 / e2) * (e2 - b_hi / 8.0);
  if (!(b_hi - b_lo < osc_budget)) {
    rep.applicable = false;
    rep.reason = "oscillation condition violated: b_hi - b_lo >= (delta^2/eta^2)(eta^2 - b_hi/8)";
    return rep;
  }
  const double radicand = e2 * (e2 + b_hi) - 2.0 * b_hi * (b_hi - b_lo) * e2 / d2;
  if (!(radicand >= 0.0))
    throw RangeError("threshold radicand negative despite oscillation condition");
  const double root = std::sqrt(radicand);
  rep.q_threshold = 1.0 + 2.0 * e2 + 2.0 * b_hi + 2.0 * root;
  rep.n_threshold = 2.0 + 4.0 * e2 + 4.0 * b_hi + 4.0 * root;
  rep.n_integer = largest_integer_below(rep.n_threshold);
  rep.has_alpha_window = true;
  rep.alpha_lo = 0.5;
  rep.alpha_hi = (e2 + root) / b_hi;
  rep.applicable = true;
  return rep;
}

double oscillation_delta_preset(double b_lo, double b_hi) {
  if (!(b_hi > 0.0) || !(b_lo <= b_hi))
    throw ConfigError("preset requires 0 < b_hi and b_lo <= b_hi");
  return std::sqrt(2.0 * b_hi * std::sqrt(b_hi - b_lo));
}

GradientInequality check_gradient_inequality(const ProblemSpec& spec,
                                   const SolutionField& u, double alpha,
                                   int gamma) {
  if (!(alpha > 0.5)) throw RangeError("gradient inequality requires alpha > 1/2");
  if (gamma < 2) throw RangeError("gradient inequality requires integer gamma >= 2");
  if (spec.nonlinearity.kind() != NonlinearityKind::exponential)
    throw RegimeError("gradient inequality needs the pure exponential reaction");
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const double beta = spec.nonlinearity.param();
  const auto bounds = spec.coefficient.bounds(grid);
  const double b = bounds.second;  // nodal maximum drives the estimate
  if (!(b > 0.0)) throw RegimeError("gradient inequality requires max b > 0");

  const Eigen::VectorXd grad2 = nodal_gradient_sq(grid, u.values);
  const Eigen::VectorXd& w = grid.weights();

  double lhs = 0.0;
  for (int i = 0; i < grid.nodes(); ++i) {
    // u = 0 nodes contribute an integrable boundary singularity for
    // alpha < 1; dropping them underestimates the left side only.
    if (!(u.values[i] > 0.0) || grad2[i] == 0.0) continue;
    const double log_weight = gamma * b * u.values[i] +
                              (2.0 * alpha - 2.0) * std::log(std::expm1(b * u.values[i]));
    lhs += w[i] * grad2[i] * checked_exp(log_weight, "the gradient integral");
  }

  // int e^{(beta+(2 alpha+j-2) b) u} dmu for each level of the recursion
  auto level_integral = [&](int j) {
    const double exponent_coef = beta + (2.0 * alpha + j - 2.0) * b;
    double acc = 0.0;
    for (int i = 0; i < grid.nodes(); ++i)
      acc += w[i] * checked_exp(exponent_coef * u.values[i], "a recursion level integral");
    return acc;
  };

  GradientInequality out;
  out.l_gamma = 0.0;
  double chain = 1.0;  // product of the telescoping factors c_k, k = gamma..j+1
  for (int j = gamma - 1; j >= 2; --j) {
    chain *= (j + 1 - 2.0) / (2.0 * alpha + (j + 1) - 3.0);
    out.l_gamma += chain * level_integral(j) / (b * (2.0 * alpha + j - 3.0));
  }
  out.lhs = lhs;
  out.rhs = spec.lambda / (b * (2.0 * alpha + gamma - 3.0)) * level_integral(gamma) +
            spec.lambda * out.l_gamma;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

EnergyIdentity energy_identity_check(const ProblemSpec& spec,
                                     const SolutionField& u) {
  const double b = spec.coefficient.constant_value();
  if (!(b > 0.0)) throw RegimeError("energy identity requires constant b > 0");
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd grad2 = nodal_gradient_sq(grid, u.values);

  Eigen::VectorXd weight(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i)
    weight[i] = spec.nonlinearity.g(u.values[i]) * std::expm1(b * u.values[i]);

  EnergyIdentity out;
  out.lhs = spec.lambda * grid.integrate(weight);
  out.rhs = b * grid.integrate(grad2);
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.rel_err = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

double h1_norm(const SolutionField& u) {
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd grad2 = nodal_gradient_sq(grid, u.values);
  const Eigen::VectorXd sq = u.values.array().square();
  return std::sqrt(grid.integrate(grad2) + grid.integrate(sq));
}

double log_lq_norm_exp(const SolutionField& u, double q) {
  if (!(q > 0.0)) throw RangeError("L^q norm requires q > 0");
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd& w = grid.weights();
  // log sum_i w_i e^{q u_i} via the usual max-shift, immune to overflow
  double top = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.nodes(); ++i) {
    if (w[i] <= 0.0) continue;
    top = std::max(top, q * u.values[i] + std::log(w[i]));
  }
  if (!std::isfinite(top)) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int i = 0; i < grid.nodes(); ++i) {
    if (w[i] <= 0.0) continue;
    acc += std::exp(q * u.values[i] + std::log(w[i]) - top);
  }
  return (top + std::log(acc)) / q;
}

double lq_norm_exp(const SolutionField& u, double q) {
  return std::exp(log_lq_norm_exp(u, q));
}

H1Condition h1_condition_constant_b(const NonlinearityG& g, double b) {
  if (!(b > 0.0)) throw RangeError("condition evaluator requires b > 0");
  H1Condition out;
  if (const auto exact = g.h1_liminf()) {
    out.liminf_estimate = *exact;
    out.satisfied = *exact > 1.0 + 1e-6;
    return out;
  }
  const double samples[] = {10.0, 20.0, 40.0, 80.0};
  double tail_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 4; ++k) {
    const double s = samples[k];
    const double gp = g.gp(s);
    const double gv = g.g(s);
    double ratio;
    if (gp == 0.0) {
      ratio = 0.0;
    } else if (!std::isfinite(gp) || !std::isfinite(gv)) {
      ratio = std::numeric_limits<double>::infinity();
    } else if (gp > 0.0 && gv > 0.0) {
      // log-space assembly keeps e^{bs} from overflowing the quotient
      const double log_em1 = b * s > 36.0 ? b * s : std::log(std::expm1(b * s));
      ratio = std::exp(std::log(gp) - std::log(gv) + log_em1 - std::log(b));
    } else {
      ratio = gp * std::expm1(b * s) / (b * gv);
    }
    if (k > 0) tail_min = std::min(tail_min, ratio);
  }
  out.liminf_estimate = tail_min;
  out.satisfied = tail_min > 1.0 + 1e-6;
  return out;
}

double truncate_t1(double s) { return std::clamp(s, -1.0, 1.0); }

TruncationCheck truncation_h1_check(const ProblemSpec& spec,
                                    const SolutionField& u) {
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd b = spec.coefficient.realize(grid);
  const double b_max = b.maxCoeff();
  if (!(b_max < -1e-12))
    throw RegimeError("truncation bound requires b(x) <= -eps < 0 at every node (max b = " +
                      std::to_string(b_max) + ")");
  const double eps = -b_max;

  const Eigen::VectorXd grad2 = nodal_gradient_sq(grid, u.values);
  const Eigen::VectorXd& w = grid.weights();
  TruncationCheck out;
  out.epsilon = eps;
  double rhs = 0.0;
  for (int i = 0; i < grid.nodes(); ++i) {
    if (u.values[i] <= 1.0)
      out.lhs_low += w[i] * grad2[i];
    else
      out.lhs_high += w[i] * grad2[i];
    rhs += w[i] * std::abs(spec.nonlinearity.g(u.values[i]));
  }
  out.rhs = spec.lambda * rhs;
  out.holds = out.lhs_low + eps * out.lhs_high <= out.rhs * (1.0 + 1e-6);
  return out;
}

BootstrapCheck bootstrap_subsolution_check(const ProblemSpec& spec,
                                           const SolutionField& u) {
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd b = spec.coefficient.realize(grid);
  if (b.minCoeff() < 0.0)
    throw RegimeError("bootstrap comparison requires b(x) >= 0 at every node");
  if (spec.nonlinearity.kind() != NonlinearityKind::exponential ||
      spec.nonlinearity.param() != 1.0)
    throw RegimeError("bootstrap comparison is stated for the unit exponential reaction");
  const double b_hi = b.maxCoeff();

  Eigen::VectorXd v(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i)
    v[i] = std::expm1(b_hi * u.values[i]);
  const Eigen::VectorXd lap = radial_laplacian(grid, v);

  BootstrapCheck out;
  out.residual_max = -std::numeric_limits<double>::infinity();
  const double p = b_hi > 0.0 ? (b_hi + 1.0) / b_hi : 0.0;
  for (int j = 0; j < grid.unknowns(); ++j) {
    const int i = grid.first_unknown() + j;
    const double lhs = -lap[i];
    const double rhs =
        b_hi > 0.0 ? spec.lambda * b_hi * std::pow(v[i] + 1.0, p) : 0.0;
    out.residual_max = std::max(out.residual_max, lhs - rhs);
    out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
  }
  out.scale = std::max(out.scale, 1.0);
  out.is_subsolution = out.residual_max <= 1e-6 * out.scale;
  return out;
}

}  // namespace gradquad
