#include "gradquad/nonlinearity.hpp"

#include <cmath>
#include <limits>

#include "gradquad/errors.hpp"

namespace gradquad {

NonlinearityG NonlinearityG::exponential(double beta) {
  if (!(beta > 0.0)) throw ConfigError("exponential nonlinearity needs beta > 0");
  NonlinearityG n;
  n.kind_ = NonlinearityKind::exponential;
  n.name_ = "exp";
  n.param_ = beta;
  n.g_ = [beta](double u) { return std::exp(beta * u); };
  n.gp_ = [beta](double u) { return beta * std::exp(beta * u); };
  n.g0_ = 1.0;
  n.gp0_ = beta;
  n.extend_below_zero_ = true;
  n.nondecreasing_ = true;
  n.convex_ = true;
  n.h1_liminf_ = std::numeric_limits<double>::infinity();
  return n;
}

NonlinearityG NonlinearityG::gelfand_pullback(double b) {
  if (b == 0.0) throw ConfigError("gelfand_pullback needs b != 0");
  NonlinearityG n;
  n.kind_ = NonlinearityKind::gelfand_pullback;
  n.name_ = "gelfand_pullback";
  n.param_ = b;
  n.g_ = [b](double u) { return std::exp(std::expm1(b * u) - b * u); };
  // g'(u) = (b e^{bu} - b) g(u), in closed form.
  n.gp_ = [b, g = n.g_](double u) { return b * std::expm1(b * u) * g(u); };
  n.g0_ = 1.0;
  n.gp0_ = 0.0;
  n.extend_below_zero_ = true;
  n.nondecreasing_ = b > 0.0;
  n.convex_ = b > 0.0;
  if (b > 0.0) n.h1_liminf_ = std::numeric_limits<double>::infinity();
  return n;
}

NonlinearityG NonlinearityG::power_shift(double p) {
  NonlinearityG n;
  n.kind_ = NonlinearityKind::power_shift;
  n.name_ = "power_shift";
  n.param_ = p;
  n.g_ = [p](double u) { return std::pow(1.0 + u, p); };
  n.gp_ = [p](double u) { return p * std::pow(1.0 + u, p - 1.0); };
  n.g0_ = 1.0;
  n.gp0_ = p;
  n.extend_below_zero_ = true;
  n.nondecreasing_ = p >= 0.0;
  n.convex_ = p >= 1.0 || p <= 0.0;
  return n;
}

NonlinearityG NonlinearityG::custom(std::string name, Map g, Map gp, bool nondecreasing,
                                    bool convex, std::optional<double> h1_liminf) {
  if (!g || !gp) throw ConfigError("custom nonlinearity needs g and g'");
  NonlinearityG n;
  n.kind_ = NonlinearityKind::custom;
  n.name_ = std::move(name);
  n.g_ = std::move(g);
  n.gp_ = std::move(gp);
  n.g0_ = n.g_(0.0);
  n.gp0_ = n.gp_(0.0);
  n.nondecreasing_ = nondecreasing;
  n.convex_ = convex;
  n.h1_liminf_ = h1_liminf;
  return n;
}

double NonlinearityG::g(double u) const {
  if (extend_below_zero_ && u < 0.0) return g0_ + gp0_ * u;
  return g_(u);
}

double NonlinearityG::gp(double u) const {
  if (extend_below_zero_ && u < 0.0) return gp0_;
  return gp_(u);
}

void TransformedNonlinearity::check(double v) const {
  if (v > lo_ && v < hi_) return;
  if (branch_ == Branch::negative_b && v == lo_) return;
  const char* name = branch_ == Branch::positive_b ? "positive_b" : "negative_b";
  throw DomainError("transformed nonlinearity (" + std::string(name) + " branch): v = " +
                    std::to_string(v) + " outside (" + std::to_string(lo_) + ", " +
                    std::to_string(hi_) + ")");
}

double TransformedNonlinearity::f(double v) const {
  check(v);
  return f_(v);
}

double TransformedNonlinearity::fp(double v) const {
  check(v);
  return fp_(v);
}

TransformedNonlinearity derive_f(const NonlinearityG& g, double b) {
  if (b == 0.0) throw ConfigError("derive_f: b must be nonzero");
  if (b > 0.0) {
    auto f = [g, b](double v) { return b * (v + 1.0) * g.g(std::log1p(v) / b); };
    auto fp = [g, b](double v) {
      const double u = std::log1p(v) / b;
      return b * g.g(u) + g.gp(u);
    };
    return TransformedNonlinearity(TransformedNonlinearity::Branch::positive_b, -1.0,
                                   std::numeric_limits<double>::infinity(), f, fp);
  }
  const double ab = -b;
  auto f = [g, b, ab](double v) { return ab * (1.0 - v) * g.g(std::log1p(-v) / b); };
  auto fp = [g, b, ab](double v) {
    const double u = std::log1p(-v) / b;
    return -ab * g.g(u) + g.gp(u);
  };
  return TransformedNonlinearity(TransformedNonlinearity::Branch::negative_b, 0.0, 1.0, f,
                                 fp);
}

} // namespace gradquad
