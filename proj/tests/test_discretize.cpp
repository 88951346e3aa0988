#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gradquad/errors.hpp"
#include "gradquad/grid.hpp"
#include "gradquad/operators.hpp"
#include "gradquad/tridiagonal.hpp"

using namespace gradquad;

namespace {

Eigen::VectorXd sample(const RadialGrid& g, double (*f)(double)) {
  Eigen::VectorXd out(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) out[i] = f(g.node(i));
  return out;
}

}  // namespace

TEST_CASE("radial laplacian is exact on quadratics") {
  for (const double n : {1.0, 2.0, 3.0, 10.0}) {
    const auto grid = make_grid(DomainKind::ball, 1.0, n, 32);
    const Eigen::VectorXd u = sample(*grid, [](double r) { return 1.0 - r * r; });
    const Eigen::VectorXd lap = radial_laplacian(*grid, u);
    // Delta (1 - r^2) = -2n, center closure included
    for (int i = 0; i < grid->cells(); ++i)
      CHECK(lap[i] == doctest::Approx(-2.0 * n).epsilon(1e-10));
  }
}

TEST_CASE("radial laplacian converges at second order") {
  const auto err_at = [](int M) {
    const auto grid = make_grid(DomainKind::ball, 1.0, 3.0, M);
    const Eigen::VectorXd u =
        sample(*grid, [](double r) { return std::cos(M_PI_2 * r); });
    const Eigen::VectorXd lap = radial_laplacian(*grid, u);
    double worst = 0.0;
    for (int i = 1; i < grid->cells(); ++i) {
      const double r = grid->node(i);
      const double exact = -M_PI_2 * M_PI_2 * std::cos(M_PI_2 * r) -
                           2.0 / r * M_PI_2 * std::sin(M_PI_2 * r);
      worst = std::max(worst, std::abs(lap[i] - exact));
    }
    return worst;
  };
  const double e1 = err_at(64), e2 = err_at(128);
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("nodal gradient") {
  const auto grid = make_grid(DomainKind::ball, 1.0, 2.0, 64);
  const Eigen::VectorXd u = sample(*grid, [](double r) { return r * r; });
  const Eigen::VectorXd du = nodal_gradient(*grid, u);
  CHECK(du[0] == doctest::Approx(0.0));
  for (int i = 1; i <= grid->cells(); ++i)
    CHECK(du[i] == doctest::Approx(2.0 * grid->node(i)).epsilon(1e-10));

  const Eigen::VectorXd gsq = nodal_gradient_sq(*grid, u);
  CHECK(gsq[32] == doctest::Approx(std::pow(2.0 * grid->node(32), 2)));
}

TEST_CASE("restriction and prolongation") {
  const auto ball = make_grid(DomainKind::ball, 1.0, 3.0, 16);
  Eigen::VectorXd nodal = Eigen::VectorXd::LinSpaced(17, 1.0, 17.0);
  const Eigen::VectorXd r = restrict_unknowns(*ball, nodal);
  CHECK(r.size() == 16);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[15] == doctest::Approx(16.0));
  const Eigen::VectorXd p = prolong_unknowns(*ball, r);
  CHECK(p.size() == 17);
  CHECK(p[16] == doctest::Approx(0.0));
  CHECK(p[3] == doctest::Approx(4.0));

  const auto seg = make_grid(DomainKind::interval, 1.0, 1.0, 16);
  const Eigen::VectorXd rs = restrict_unknowns(*seg, nodal);
  CHECK(rs.size() == 15);
  CHECK(rs[0] == doctest::Approx(2.0));
  const Eigen::VectorXd ps = prolong_unknowns(*seg, rs);
  CHECK(ps[0] == doctest::Approx(0.0));
  CHECK(ps[16] == doctest::Approx(0.0));
  CHECK(ps[1] == doctest::Approx(2.0));
}

TEST_CASE("assembled operator matches dense application") {
  const auto grid = make_grid(DomainKind::ball, 1.0, 3.0, 24);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(25, 0.7);
  const Eigen::VectorXd u = sample(*grid, [](double r) { return 0.3 * (1.0 - r * r); });
  Eigen::VectorXd pot(25);
  for (int i = 0; i < 25; ++i) pot[i] = 0.5 + 0.1 * i;

  const LinearizedOperator op = assemble_operator(grid, b, u, pot);
  REQUIRE(op.size() == 24);

  // apply() must agree with an explicit dense build from the bands
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(24, 24);
  for (int j = 0; j < 24; ++j) {
    A(j, j) = op.diag[j];
    if (j > 0) A(j, j - 1) = op.sub[j];
    if (j + 1 < 24) A(j, j + 1) = op.super[j];
  }
  Eigen::VectorXd x = Eigen::VectorXd::Random(24);
  CHECK((op.apply(x) - A * x).cwiseAbs().maxCoeff() < 1e-12);

  // L u restricted = -lap u - 2 b u' u' - pot u on the unknowns (consistency
  // of the linearization with the nodal operators, applied to u itself)
  const Eigen::VectorXd lap = radial_laplacian(*grid, u);
  const Eigen::VectorXd du = nodal_gradient(*grid, u);
  const Eigen::VectorXd Lu = op.apply(restrict_unknowns(*grid, u));
  for (int j = 0; j < 24; ++j) {
    const double expect = -lap[j] - 2.0 * b[j] * du[j] * du[j] - pot[j] * u[j];
    CHECK(Lu[j] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("tridiagonal solver against dense") {
  const int k = 40;
  Eigen::VectorXd sub(k), diag(k), super(k);
  std::srand(1234);
  for (int i = 0; i < k; ++i) {
    sub[i] = -0.3 - 0.4 * (std::rand() / double(RAND_MAX));
    super[i] = -0.3 - 0.4 * (std::rand() / double(RAND_MAX));
    diag[i] = 2.0 + std::rand() / double(RAND_MAX);
  }
  sub[0] = 0.0;
  super[k - 1] = 0.0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    A(i, i) = diag[i];
    if (i > 0) A(i, i - 1) = sub[i];
    if (i + 1 < k) A(i, i + 1) = super[i];
  }
  const Eigen::VectorXd rhs = Eigen::VectorXd::Random(k);
  const Eigen::VectorXd x = tridiagonal_solve<double>(sub, diag, super, rhs);
  const Eigen::VectorXd xd = A.fullPivLu().solve(rhs);
  CHECK((x - xd).cwiseAbs().maxCoeff() < 1e-10);

  TridiagonalLU<double> lu(sub, diag, super);
  CHECK_FALSE(lu.singular());
  CHECK((A * lu.solve(rhs) - rhs).cwiseAbs().maxCoeff() < 1e-10);

  Eigen::VectorXd bad_diag = diag;
  bad_diag[0] = 0.0;
  bad_diag[1] = 0.0; // two leading zeros defeat the first elimination step
  TridiagonalLU<double> bad(sub, bad_diag, super);
  // a singular factorization must refuse to solve
  if (bad.singular()) CHECK_THROWS_AS(bad.solve(rhs), SingularMatrixError);
}

TEST_CASE("helmholtz closed form through the assembled operator") {
  // (-Delta - 1) v = 1 on the 1d ball of radius 1 with v'(0) = 0, v(1) = 0
  // has v = cos(r)/cos(1) - 1.
  const int M = 256;
  const auto grid = make_grid(DomainKind::ball, 1.0, 1.0, M);
  const Eigen::VectorXd zero_b = Eigen::VectorXd::Zero(M + 1);
  const Eigen::VectorXd zero_u = Eigen::VectorXd::Zero(M + 1);
  const Eigen::VectorXd pot = Eigen::VectorXd::Ones(M + 1);
  const LinearizedOperator op = assemble_operator(grid, zero_b, zero_u, pot);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(M);
  const Eigen::VectorXd v = tridiagonal_solve<double>(op.sub, op.diag, op.super, rhs);
  double worst = 0.0;
  for (int i = 0; i < M; ++i) {
    const double exact = std::cos(grid->node(i)) / std::cos(1.0) - 1.0;
    worst = std::max(worst, std::abs(v[i] - exact));
  }
  CHECK(worst < 2e-5); // O(h^2)
}
