#include "gradquad/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "gradquad/errors.hpp"
#include "gradquad/nonlinearity.hpp"
#include "gradquad/tridiagonal.hpp"

namespace gradquad {

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::semi_stable: return "semi_stable";
    case StabilityVerdict::unstable: return "unstable";
  }
  return "unstable";
}

namespace {

using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::vector<long double> apply_rows(const LinearizedOperator& op,
                                    const Eigen::VectorXd& x) {
  const int n = op.size();
  std::vector<long double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    long double acc = static_cast<long double>(op.diag[j]) * x[j];
    if (j > 0) acc += static_cast<long double>(op.sub[j]) * x[j - 1];
    if (j + 1 < n) acc += static_cast<long double>(op.super[j]) * x[j + 1];
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

long double rayleigh_quotient(const Eigen::VectorXd& x,
                              const std::vector<long double>& lx) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    num += static_cast<long double>(x[j]) * lx[static_cast<std::size_t>(j)];
    den += static_cast<long double>(x[j]) * static_cast<long double>(x[j]);
  }
  return num / den;
}

long double eigen_residual_sup(const Eigen::VectorXd& x,
                               const std::vector<long double>& lx,
                               long double mu) {
  long double worst = 0.0L;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const long double r =
        lx[static_cast<std::size_t>(j)] - mu * static_cast<long double>(x[j]);
    const long double a = r < 0.0L ? -r : r;
    if (a > worst) worst = a;
  }
  return worst;
}

template <typename Vec>
Eigen::Index argmax_abs(const Vec& y) {
  Eigen::Index im = 0;
  auto best = std::abs(y[0]);
  for (Eigen::Index j = 1; j < y.size(); ++j) {
    const auto a = std::abs(y[j]);
    if (a > best) {
      best = a;
      im = j;
    }
  }
  return im;
}

}  // namespace

EigenCertificate principal_eigenvalue(const LinearizedOperator& op,
                                      const EigenOptions& opts) {
  const int n = op.size();
  if (n < 2) throw GridMismatchError("eigenvalue iteration needs at least two unknowns");

  // Gershgorin lower bound keeps the initial shift strictly below the
  // whole spectrum, so inverse iteration locks onto the bottom eigenvalue.
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double row = op.diag[j];
    if (j > 0) row -= std::abs(op.sub[j]);
    if (j + 1 < n) row -= std::abs(op.super[j]);
    lo = std::min(lo, row);
  }
  const double shift = lo - 1.0 - 1e-3 * std::max(1.0, std::abs(lo));

  const TridiagonalLU<double> coarse(
      op.sub, (op.diag.array() - shift).matrix(), op.super);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  long double mu = 0.0L;
  long double last_inc = std::numeric_limits<long double>::infinity();
  int iters = 0;

  const int coarse_cap = std::max(10, opts.max_iters / 2);
  while (iters < coarse_cap) {
    Eigen::VectorXd y = coarse.solve(x);
    const Eigen::Index im = argmax_abs(y);
    if (!std::isfinite(y[im]) || y[im] == 0.0)
      throw ConvergenceError("inverse iteration produced a degenerate vector");
    x = y / y[im];
    const auto lx = apply_rows(op, x);
    const long double next = rayleigh_quotient(x, lx);
    last_inc = next > mu ? next - mu : mu - next;
    mu = next;
    ++iters;
    if (iters > 3 &&
        static_cast<double>(last_inc) <= 1e-3 * std::max(1.0, std::abs(static_cast<double>(mu))))
      break;
  }

  auto lx = apply_rows(op, x);
  mu = rayleigh_quotient(x, lx);
  long double res = eigen_residual_sup(x, lx, mu);
  bool settled = static_cast<double>(last_inc) <= opts.increment_tol;

  // Polish with sweeps shifted just below the current estimate; the
  // factorizations run in long double so the certificate stays sharp.
  const VecL sub = op.sub.cast<long double>();
  const VecL sup = op.super.cast<long double>();
  const VecL d = op.diag.cast<long double>();
  while (iters < opts.max_iters &&
         !(settled && static_cast<double>(res) <= opts.residual_target)) {
    const long double floor =
        1e-13L * std::max<long double>(1.0L, std::abs(mu));
    long double delta = std::max(4.0L * last_inc, floor);
    bool swept = false;
    for (int attempt = 0; attempt < 4 && !swept; ++attempt) {
      const long double sigma = mu - delta;
      const VecL ds = (d.array() - sigma).matrix();
      const TridiagonalLU<long double> refine(sub, ds, sup);
      if (refine.singular()) {
        delta *= 1024.0L;
        continue;
      }
      VecL yl = refine.solve(x.cast<long double>());
      const Eigen::Index im = argmax_abs(yl);
      if (!std::isfinite(static_cast<double>(yl[im])) || yl[im] == 0.0L) {
        delta *= 1024.0L;
        continue;
      }
      yl /= yl[im];
      x = yl.cast<double>();
      swept = true;
    }
    if (!swept)
      throw ConvergenceError("shifted refinement could not factor the operator");
    lx = apply_rows(op, x);
    const long double next = rayleigh_quotient(x, lx);
    last_inc = next > mu ? next - mu : mu - next;
    mu = next;
    res = eigen_residual_sup(x, lx, mu);
    settled = static_cast<double>(last_inc) <= opts.increment_tol;
    ++iters;
  }

  if (!settled)
    throw ConvergenceError("eigenvalue iteration stalled after " +
                           std::to_string(iters) + " sweeps (last increment " +
                           sci(static_cast<double>(last_inc)) + ")");
  if (static_cast<double>(res) > opts.residual_target)
    throw ConvergenceError("eigen-residual " + sci(static_cast<double>(res)) +
                           " stayed above target " + sci(opts.residual_target));

  const double margin = x.minCoeff();
  if (!(margin > 0.0))
    throw PositivityError("principal eigenfunction is not strictly positive (min entry " +
                          sci(margin) + "); refine the grid and retry");

  EigenCertificate cert;
  cert.mu1 = static_cast<double>(mu);
  cert.eigenfunction = prolong_unknowns(*op.grid, x);
  cert.positivity_margin = margin;
  cert.residual = static_cast<double>(res);
  cert.iterations = iters;
  if (cert.mu1 > opts.verdict_tol)
    cert.verdict = StabilityVerdict::stable;
  else if (cert.mu1 >= -opts.verdict_tol)
    cert.verdict = StabilityVerdict::semi_stable;
  else
    cert.verdict = StabilityVerdict::unstable;
  return cert;
}

EigenCertificate stability_certificate(const ProblemSpec& spec,
                                       const SolutionField& u,
                                       const EigenOptions& opts) {
  return principal_eigenvalue(assemble_linearized(spec, u), opts);
}

EigenCertificate epsilon_relaxed_check(const ProblemSpec& spec,
                                       const SolutionField& u, double epsilon,
                                       const EigenOptions& opts) {
  spec.validate();
  if (!(epsilon > 0.0) || !(epsilon <= spec.lambda))
    throw RangeError("epsilon must lie in (0, lambda]; got epsilon=" +
                     std::to_string(epsilon) + " with lambda=" +
                     std::to_string(spec.lambda));
  if (!u.grid) throw GridMismatchError("solution carries no grid");
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd b = spec.coefficient.realize(grid);
  Eigen::VectorXd pot(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i)
    pot[i] = (spec.lambda - epsilon) * spec.nonlinearity.gp(u.values[i]);
  return principal_eigenvalue(assemble_operator(u.grid, b, u.values, pot), opts);
}

}  // namespace gradquad
