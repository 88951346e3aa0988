// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// binary exits nonzero when any check fails. Reference values come from the
// self-contained shooting oracle and closed-form threshold identities.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gradquad/branch.hpp"
#include "gradquad/diagnostics.hpp"
#include "gradquad/errors.hpp"
#include "gradquad/hopf_cole.hpp"
#include "gradquad/io.hpp"
#include "gradquad/problem.hpp"
#include "gradquad/solve.hpp"
#include "gradquad/stability.hpp"
#include "oracles/shooting.hpp"

using namespace gradquad;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return format_sig(v, 4); }

ProblemSpec ball_problem(double n, CoefficientB b, NonlinearityG g,
                         double lambda, double radius = 1.0) {
  ProblemSpec spec;
  spec.domain.kind = DomainKind::ball;
  spec.domain.radius = radius;
  spec.dimension = n;
  spec.coefficient = std::move(b);
  spec.nonlinearity = std::move(g);
  spec.lambda = lambda;
  return spec;
}

struct MatrixRun {
  ProblemSpec spec;
  SolutionField u;
  double b_max = 0.0;
  double beta = 0.0;
};

struct SharedState {
  std::optional<LambdaStarBracket> bracket_c1;  // b=1, exp(1), n=2
  std::optional<LambdaStarBracket> bracket_c2;  // slab, b=0
  std::optional<LambdaStarBracket> bracket_c3;  // ball n=3, b=0
  std::optional<double> mu_single_c1;
  std::optional<double> mu_single_c3;
  std::vector<MatrixRun> positive_runs;
};

// ---- 1: constant-coefficient substitution pushes the solution through ----

bool criterion1(SharedState& sh, std::string& note) {
  const auto t0 = Clock::now();
  const ProblemSpec uspec = ball_problem(2.0, CoefficientB::constant(1.0),
                                         NonlinearityG::exponential(1.0), 0.5);
  const GridPtr grid = uspec.grid(2048);
  const SolveReport rep_u = monotone_solve(uspec, grid);

  ProblemSpec vspec = uspec;
  vspec.coefficient = CoefficientB::constant(0.0);
  vspec.nonlinearity = NonlinearityG::custom(
      "quadratic_shift",
      [](double v) { return (1.0 + v) * (1.0 + v); },
      [](double v) { return 2.0 * (1.0 + v); }, true, true);
  const SolveReport rep_v = monotone_solve(vspec, grid);

  if (rep_u.status != SolveStatus::converged ||
      rep_v.status != SolveStatus::converged) {
    note = "formulation solves did not both converge";
    return false;
  }
  const SolutionField pushed = hopf_cole_forward(rep_u.solution, 1.0);
  const double diff =
      (pushed.values - rep_v.solution.values).cwiseAbs().maxCoeff();
  const double secs = seconds_since(t0);
  sh.mu_single_c1 = stability_certificate(uspec, rep_u.solution).mu1;
  note = "sup diff " + fmt(diff) + " at M=2048 in " + fmt(secs) + " s";
  return diff <= 1e-6 && secs <= 10.0;
}

// ---- 2: fold bracket agrees with the shooting oracle on the slab ----

bool criterion2(SharedState& sh, std::string& note) {
  const auto t0 = Clock::now();
  const double star = oracle::lambda_star(1.0, /*interval=*/false, 0.5);
  const ProblemSpec spec = ball_problem(1.0, CoefficientB::constant(0.0),
                                        NonlinearityG::exponential(1.0), 0.0,
                                        0.5);
  const GridPtr grid = spec.grid(1024);
  const LambdaStarBracket br = lambda_star_bracket(spec, grid, 1e-3);
  sh.bracket_c2 = br;
  const double secs = seconds_since(t0);
  note = "bracket [" + fmt(br.lambda_lo) + ", " + fmt(br.lambda_hi) +
         "], oracle " + format_sig(star, 8) + ", " + fmt(secs) + " s";
  return br.width() <= 1e-3 + 1e-12 && br.lambda_lo <= star &&
         star <= br.lambda_hi && std::abs(star - 3.513830) <= 2e-5 &&
         secs <= 60.0;
}

// ---- 3: lambda = 2 sits strictly inside the n = 3 solvable range ----

bool criterion3(SharedState& sh, std::string& note) {
  const ProblemSpec spec = ball_problem(3.0, CoefficientB::constant(0.0),
                                        NonlinearityG::exponential(1.0), 2.0);
  const GridPtr grid = spec.grid(256);
  const LambdaStarBracket br = lambda_star_bracket(spec, grid, 1e-3);
  sh.bracket_c3 = br;
  const SolveReport rep = monotone_solve(spec, grid);
  if (rep.status != SolveStatus::converged) {
    note = "solve at lambda=2 did not converge";
    return false;
  }
  sh.mu_single_c3 = stability_certificate(spec, rep.solution).mu1;
  const double margin = br.lambda_hi - 2.0;
  note = "lambda=2 converged, fold margin " + fmt(margin);
  return margin >= 0.5;
}

// ---- 4: certificates stay nonnegative and degenerate toward the fold ----

struct TraceOutcome {
  bool floor_ok = false;
  bool decreasing_ok = false;
  bool decay_ok = false;
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

TraceOutcome fold_trace_checks(const ProblemSpec& spec, const GridPtr& grid,
                               double lambda_lo) {
  std::vector<double> schedule;
  for (const double f : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999})
    schedule.push_back(f * lambda_lo);
  const BranchResult res = trace_branch(spec, grid, schedule);

  TraceOutcome out;
  if (res.records.size() != schedule.size()) return out;
  out.floor_ok = true;
  out.decreasing_ok = true;
  for (std::size_t k = 0; k < res.records.size(); ++k) {
    const BranchRecord& r = res.records[k];
    if (!r.converged || !(r.mu1 >= -1e-6)) out.floor_ok = false;
    if (k > 0 && !(r.mu1 < res.records[k - 1].mu1 + 1e-8))
      out.decreasing_ok = false;
  }
  if (out.floor_ok) {
    out.ratio = res.records.back().mu1 / res.records[2].mu1;
    out.decay_ok = res.records.back().mu1 <= 0.1 * res.records[2].mu1;
  }
  return out;
}

bool criterion4(SharedState& sh, std::string& note) {
  if (!sh.bracket_c2 || !sh.bracket_c3 || !sh.mu_single_c1 ||
      !sh.mu_single_c3) {
    note = "earlier runs left no records to certify";
    return false;
  }
  if (!(*sh.mu_single_c1 >= -1e-6) || !(*sh.mu_single_c3 >= -1e-6)) {
    note = "single-solve certificate below the floor";
    return false;
  }

  const ProblemSpec spec1 = ball_problem(2.0, CoefficientB::constant(1.0),
                                         NonlinearityG::exponential(1.0), 0.0);
  const GridPtr grid1 = spec1.grid(256);
  sh.bracket_c1 = lambda_star_bracket(spec1, grid1, 1e-3);

  const ProblemSpec spec2 = ball_problem(1.0, CoefficientB::constant(0.0),
                                         NonlinearityG::exponential(1.0), 0.0,
                                         0.5);
  const ProblemSpec spec3 = ball_problem(3.0, CoefficientB::constant(0.0),
                                         NonlinearityG::exponential(1.0), 0.0);

  const TraceOutcome t1 =
      fold_trace_checks(spec1, grid1, sh.bracket_c1->lambda_lo);
  const TraceOutcome t2 =
      fold_trace_checks(spec2, spec2.grid(1024), sh.bracket_c2->lambda_lo);
  const TraceOutcome t3 =
      fold_trace_checks(spec3, spec3.grid(256), sh.bracket_c3->lambda_lo);

  note = "near-fold/mid mu1 ratios " + fmt(t1.ratio) + ", " + fmt(t2.ratio) +
         ", " + fmt(t3.ratio);
  for (const TraceOutcome& t : {t1, t2, t3})
    if (!t.floor_ok || !t.decreasing_ok || !t.decay_ok) return false;
  return true;
}

// ---- 5: monotone-iteration invariants over the coefficient matrix ----

bool criterion5(SharedState& sh, std::string& note) {
  const double lambda = 0.1;
  int total = 0;
  int converged = 0;
  int dominated_checked = 0;
  bool floors = true;
  bool dominated = true;
  for (const double n : {1.0, 2.0, 3.0, 10.0}) {
    const GridPtr grid = make_grid(DomainKind::ball, 1.0, n, 128);
    Eigen::VectorXd tab(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i) {
      const double r = grid->node(i);
      tab[i] = 1.0 - r * r / 4.0;
    }
    const std::vector<CoefficientB> coeffs = {
        CoefficientB::constant(-1.0), CoefficientB::constant(0.0),
        CoefficientB::constant(0.5),  CoefficientB::constant(1.0),
        CoefficientB::constant(2.0),  CoefficientB::tabulated(tab)};
    for (const CoefficientB& b : coeffs) {
      for (const double beta : {1.0, 2.0}) {
        ++total;
        const ProblemSpec spec =
            ball_problem(n, b, NonlinearityG::exponential(beta), lambda);
        const SolveReport rep = monotone_solve(spec, grid);
        if (rep.status != SolveStatus::converged) continue;
        ++converged;
        if (!(rep.min_nodal_increment >= -1e-10)) floors = false;
        const SolutionField w = unit_rhs_supersolution(spec, grid);
        if (lambda * spec.nonlinearity.g(w.values.maxCoeff()) < 1.0) {
          ++dominated_checked;
          if (!((w.values - rep.solution.values).minCoeff() >= -1e-8))
            dominated = false;
        }
        const double b_max = spec.coefficient.bounds(*grid).second;
        if (b_max > 0.0)
          sh.positive_runs.push_back({spec, rep.solution, b_max, beta});
      }
    }
  }
  note = std::to_string(converged) + "/" + std::to_string(total) +
         " converged, " + std::to_string(dominated_checked) +
         " domination checks";
  return floors && dominated && converged == total && dominated_checked > 0;
}

// ---- 6: threshold golden values and the constant-coefficient limit ----

bool criterion6(SharedState&, std::string& note) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const ThresholdReport pos = threshold_constant_b_pos(1.0, 1.0);
  const double golden = 10.0 + 4.0 * std::sqrt(2.0);
  bool ok = std::abs(pos.n_threshold - golden) <= 1e-12 && pos.n_integer == 15;

  const double drift_coarse =
      std::abs(threshold_constant_b_pos(1e-6, 1.0).n_threshold - 10.0);
  const double drift_fine =
      std::abs(threshold_constant_b_pos(1e-12, 1.0).n_threshold - 10.0);
  ok = ok && drift_fine <= 1e-5 && drift_fine < drift_coarse;

  ok = ok && !threshold_constant_b_neg(-1.0, 1.0).applicable;

  std::mt19937 rng(7041982);
  std::uniform_real_distribution<double> draw(1e-8, 8.0 - 1e-8);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double b = draw(rng);
    const ThresholdReport lim = threshold_general_b(b, b, nan, nan);
    const ThresholdReport ref = threshold_constant_b_pos(b, 1.0);
    if (!lim.applicable || !ref.applicable) {
      note = "constant-limit case unexpectedly inapplicable at b=" + fmt(b);
      return false;
    }
    worst = std::max(worst, std::abs(lim.n_threshold - ref.n_threshold));
    worst = std::max(worst, std::abs(lim.q_threshold - ref.q_threshold));
    worst = std::max(worst, std::abs(lim.alpha_hi - ref.alpha_hi));
  }
  ok = ok && worst <= 1e-10;
  note = "golden drift " + fmt(std::abs(pos.n_threshold - golden)) +
         ", constant-limit worst " + fmt(worst);
  return ok;
}

// ---- 7: gradient-weighted inequality on every stable stored solution ----

bool criterion7(SharedState& sh, std::string& note) {
  if (sh.positive_runs.empty()) {
    note = "no stored solutions to check";
    return false;
  }
  int checks = 0;
  int gamma2_checks = 0;
  int stable_solutions = 0;
  bool holds = true;
  bool tail_zero = true;
  for (const MatrixRun& run : sh.positive_runs) {
    const EigenCertificate cert = stability_certificate(run.spec, run.u);
    if (cert.verdict != StabilityVerdict::stable) continue;
    ++stable_solutions;
    const ThresholdReport window =
        threshold_constant_b_pos(run.b_max, run.beta);
    if (!window.has_alpha_window) continue;
    for (const int gamma : {2, 3, 4}) {
      for (const double alpha : {0.75, 1.0, 1.5}) {
        if (!(alpha > window.alpha_lo && alpha < window.alpha_hi)) continue;
        const GradientInequality lc =
            check_gradient_inequality(run.spec, run.u, alpha, gamma);
        ++checks;
        if (!lc.holds) holds = false;
        if (gamma == 2) {
          ++gamma2_checks;
          if (lc.l_gamma != 0.0) tail_zero = false;
        }
      }
    }
  }
  note = std::to_string(checks) + " inequality checks over " +
         std::to_string(stable_solutions) + " stable solutions";
  return holds && tail_zero && checks > 0 && gamma2_checks > 0;
}

// ---- 8: integral identity converges at second order ----

bool criterion8(SharedState& sh, std::string& note) {
  if (!sh.bracket_c1) {
    note = "no fold bracket available for the mid-branch point";
    return false;
  }
  const double lambda = 0.5 * sh.bracket_c1->lambda_lo;
  const ProblemSpec spec = ball_problem(
      2.0, CoefficientB::constant(1.0), NonlinearityG::exponential(1.0), lambda);
  double errs[2] = {0.0, 0.0};
  int idx = 0;
  for (const int m : {1024, 2048}) {
    const SolveReport rep = monotone_solve(spec, spec.grid(m));
    if (rep.status != SolveStatus::converged) {
      note = "mid-branch solve failed at M=" + std::to_string(m);
      return false;
    }
    errs[idx++] = energy_identity_check(spec, rep.solution).rel_err;
  }
  note = "rel err " + fmt(errs[0]) + " at M=1024, improvement " +
         fmt(errs[0] / errs[1]) + "x on doubling";
  return errs[0] <= 1e-4 && errs[1] <= errs[0] / 3.0;
}

// ---- 9: uniform-norm surrogate near the fold plus the growth condition ----

bool criterion9(SharedState&, std::string& note) {
  const ProblemSpec spec = ball_problem(3.0, CoefficientB::constant(1.0),
                                        NonlinearityG::exponential(1.0), 0.0);
  const GridPtr grid = spec.grid(512);
  const LambdaStarBracket br = lambda_star_bracket(spec, grid, 1e-3);
  const auto h1_at = [&](double lambda) {
    const SolveReport rep = monotone_solve(spec.with_lambda(lambda), grid);
    if (rep.status != SolveStatus::converged)
      throw ConvergenceError("uniformity solve failed at lambda=" +
                             std::to_string(lambda));
    return h1_norm(rep.solution);
  };
  const double near_fold = h1_at(0.999 * br.lambda_lo);
  const double mid = h1_at(0.9 * br.lambda_lo);

  const H1Condition cond_exp =
      h1_condition_constant_b(NonlinearityG::exponential(1.0), 1.0);
  const NonlinearityG saturating = NonlinearityG::custom(
      "saturating", [](double s) { return -std::expm1(-s); },
      [](double s) { return std::exp(-s); }, true, false, 1.0);
  const H1Condition cond_flat = h1_condition_constant_b(saturating, 1.0);

  note = "h1 growth " + fmt(near_fold / mid) + "x, saturating limit " +
         fmt(cond_flat.liminf_estimate);
  return near_fold <= 2.0 * mid && cond_exp.satisfied &&
         !cond_flat.satisfied && cond_flat.liminf_estimate == 1.0;
}

// ---- 10: split-gradient bound for negative coefficients ----

bool criterion10(SharedState&, std::string& note) {
  const ProblemSpec spec = ball_problem(3.0, CoefficientB::constant(-1.0),
                                        NonlinearityG::exponential(2.0), 0.0);
  const GridPtr grid = spec.grid(256);
  const LambdaStarBracket br = lambda_star_bracket(spec, grid, 1e-2);
  const double lambda = 0.5 * br.lambda_lo;
  const SolveReport rep = monotone_solve(spec.with_lambda(lambda), grid);
  if (rep.status != SolveStatus::converged) {
    note = "mid-branch solve failed";
    return false;
  }
  const TruncationCheck tc =
      truncation_h1_check(spec.with_lambda(lambda), rep.solution);
  const bool clamps = truncate_t1(0.5) == 0.5 && truncate_t1(2.0) == 1.0 &&
                      truncate_t1(-3.0) == -1.0;
  note = "split lhs " + fmt(tc.lhs_low + tc.epsilon * tc.lhs_high) +
         " vs rhs " + fmt(tc.rhs);
  return tc.holds && clamps;
}

}  // namespace

int main() {
  SharedState sh;
  const std::vector<std::function<bool(SharedState&, std::string&)>> checks = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};

  int passed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    bool ok = false;
    std::string note;
    try {
      ok = checks[i](sh, note);
    } catch (const std::exception& e) {
      ok = false;
      note = e.what();
    }
    if (ok) ++passed;
    std::printf("criterion %zu: %s (%s)\n", i + 1, ok ? "PASS" : "FAIL",
                note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 1;
}
