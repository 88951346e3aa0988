#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace gradquad {

enum class NonlinearityKind { exponential, gelfand_pullback, power_shift, custom };

/// Source nonlinearity g on the right-hand side lambda * g(u).
///
/// Shipped kinds are extended linearly below u = 0 (g(0) + g'(0) u), which
/// keeps transient Newton iterates well defined without affecting the
/// nonnegative solution range.  Custom nonlinearities are used as supplied.
class NonlinearityG {
public:
  using Map = std::function<double(double)>;

  /// g(u) = exp(beta * u), beta > 0.
  static NonlinearityG exponential(double beta);
  /// g(u) = exp(exp(b*u) - 1 - b*u); its transform with the same b is b*e^v.
  static NonlinearityG gelfand_pullback(double b);
  /// g(u) = (1 + u)^p.
  static NonlinearityG power_shift(double p);
  /// User-supplied g and g'.  Optional analytic value for the growth-ratio
  /// limit used by the uniform-bound condition evaluator.
  static NonlinearityG custom(std::string name, Map g, Map gp, bool nondecreasing,
                              bool convex, std::optional<double> h1_liminf = {});

  double g(double u) const;
  double gp(double u) const;

  NonlinearityKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Kind parameter: beta for exponential, b for gelfand_pullback, p for
  /// power_shift, 0 for custom.
  double param() const { return param_; }
  double g0() const { return g0_; }
  bool nondecreasing() const { return nondecreasing_; }
  bool convex() const { return convex_; }
  const std::optional<double>& h1_liminf() const { return h1_liminf_; }

private:
  NonlinearityG() = default;

  NonlinearityKind kind_ = NonlinearityKind::custom;
  std::string name_;
  double param_ = 0.0;
  Map g_, gp_;
  double g0_ = 0.0, gp0_ = 0.0;
  bool extend_below_zero_ = false;
  bool nondecreasing_ = false, convex_ = false;
  std::optional<double> h1_liminf_;
};

/// Transformed nonlinearity f for the substituted problem -Delta v = lambda f(v).
///
/// positive_b branch: v = e^{bu} - 1, valid on (-1, inf),
///   f(v) = b (v+1) g(log1p(v)/b).
/// negative_b branch: v = 1 - e^{bu}, valid on (0, 1) (0 allowed as the
///   boundary value), f(v) = |b| (1-v) g(log1p(-v)/b).
class TransformedNonlinearity {
public:
  enum class Branch { positive_b, negative_b };

  TransformedNonlinearity(Branch branch, double lo, double hi,
                          std::function<double(double)> f,
                          std::function<double(double)> fp)
      : branch_(branch), lo_(lo), hi_(hi), f_(std::move(f)), fp_(std::move(fp)) {}

  double f(double v) const;
  double fp(double v) const;

  Branch branch() const { return branch_; }
  std::pair<double, double> valid_range() const { return {lo_, hi_}; }

private:
  void check(double v) const;

  Branch branch_;
  double lo_, hi_;
  std::function<double(double)> f_, fp_;
};

/// Builds the transformed nonlinearity for coefficient value b != 0.
TransformedNonlinearity derive_f(const NonlinearityG& g, double b);

} // namespace gradquad
