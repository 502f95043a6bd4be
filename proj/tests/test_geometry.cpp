#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ryflow/fd.hpp"
#include "ryflow/flows.hpp"
#include "ryflow/geometry.hpp"
#include "ryflow/tensor.hpp"

#include <cmath>
#include <limits>

using namespace ryflow;

namespace {

// Bare conformal half-plane metric g = y^-2 I, no oracles attached, so every
// operation exercises the finite-difference engine.
MetricField bare_half_plane() {
  MetricField g;
  g.dim = 2;
  g.eval = [](double, const Point& p) {
    const double y = p[1];
    if (!(y > 0.0)) throw EvaluationDomainError("y must be positive");
    return SymTensor2::identity(2) * (1.0 / (y * y));
  };
  return g;
}

}  // namespace

TEST_CASE("symmetric tensor storage mirrors off-diagonal writes") {
  SymTensor2 t(3);
  t.set(0, 2, 1.5);
  CHECK(t(2, 0) == 1.5);
  t.add(2, 0, 0.5);
  CHECK(t(0, 2) == 2.0);
  CHECK(t.dim() == 3);

  SymTensor2 id = SymTensor2::identity(2);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
}

TEST_CASE("symmetric tensor algebra, determinant, inverse") {
  SymTensor2 a(2);
  a.set(0, 0, 2.0);
  a.set(0, 1, 1.0);
  a.set(1, 1, 2.0);

  CHECK(a.det() == doctest::Approx(3.0).epsilon(1e-14));

  SymTensor2 inv = a.inverse();
  CHECK(inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(inv(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  // a * inv == identity, checked entrywise
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k) s += a(i, k) * inv(k, j);
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }

  SymTensor2 b = a * 2.0 - a;
  CHECK((b - a).sup_norm() == doctest::Approx(0.0));

  SymTensor2 sum = a + a;
  CHECK(sum(0, 1) == doctest::Approx(2.0));

  SymTensor2 d3(3);
  d3.set(0, 0, 2.0);
  d3.set(1, 1, 3.0);
  d3.set(2, 2, 4.0);
  CHECK(d3.det() == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("eigenvalues come back sorted and rotation-invariant") {
  SymTensor2 a(2);
  a.set(0, 0, 2.0);
  a.set(0, 1, 1.0);
  a.set(1, 1, 2.0);
  auto ev = a.eigenvalues();
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));

  SymTensor2 m(3);
  m.set(0, 0, 2.0);
  m.set(0, 1, 1.0);
  m.set(1, 1, 2.0);
  m.set(2, 2, 5.0);
  auto ev3 = m.eigenvalues();
  REQUIRE(ev3.size() == 3);
  CHECK(ev3[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev3[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ev3[2] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("contract sums against a weight tensor") {
  SymTensor2 t(2);
  t.set(0, 0, 1.0);
  t.set(0, 1, 2.0);
  t.set(1, 1, 3.0);
  SymTensor2 w(2);
  w.set(0, 0, 5.0);
  w.set(0, 1, 7.0);
  w.set(1, 1, 11.0);
  // 1*5 + 2*2*7 + 3*11
  CHECK(t.contract(w) == doctest::Approx(66.0).epsilon(1e-14));
}

TEST_CASE("positive definiteness and the degenerate-metric error") {
  SymTensor2 pd(2);
  pd.set(0, 0, 2.0);
  pd.set(0, 1, 1.0);
  pd.set(1, 1, 2.0);
  CHECK(pd.positive_definite());

  SymTensor2 indef(2);
  indef.set(0, 0, 1.0);
  indef.set(0, 1, 2.0);
  indef.set(1, 1, 1.0);
  CHECK_FALSE(indef.positive_definite());

  SymTensor2 sing(2);
  sing.set(0, 0, 1.0);
  sing.set(0, 1, 1.0);
  sing.set(1, 1, 1.0);
  CHECK_THROWS_AS((void)sing.inverse(), DegenerateMetricError);
}

TEST_CASE("rank-3 array storage and norms") {
  Tensor3 t(2);
  t.at(1, 0, 1) = -4.0;
  CHECK(t(1, 0, 1) == -4.0);
  CHECK(t.sup_norm() == 4.0);
  Tensor3 s = t * 0.5 + t;
  CHECK(s(1, 0, 1) == doctest::Approx(-6.0));
  CHECK((s - t)(1, 0, 1) == doctest::Approx(-2.0));
}

TEST_CASE("differencing spec rejects bad parameters") {
  DiffSpec good{0.01, 4, false};
  CHECK_NOTHROW(good.validate());
  CHECK(good.refined(0.5).step == doctest::Approx(0.005));

  DiffSpec bad_step{0.0, 2, true};
  CHECK_THROWS_AS(bad_step.validate(), PreconditionError);
  DiffSpec bad_order{0.01, 3, true};
  CHECK_THROWS_AS(bad_order.validate(), PreconditionError);
}

TEST_CASE("central stencils are exact on low-degree polynomials") {
  // Representable abscissae so the checks are exact in floating point.
  const double x0 = 1.5, h = 0.25;

  auto quad = [&](double off) { return (x0 + off) * (x0 + off); };
  CHECK(fd::d1(quad, h, 2) == 3.0);   // derivative of x^2 at 1.5
  CHECK(fd::d2(quad, h, 2) == 2.0);

  auto cubic = [](double off) { return off * off * off; };
  CHECK(fd::d1(cubic, h, 4) == 0.0);       // 4th-order stencil kills the h^2 term
  CHECK(fd::d1(cubic, h, 2) == h * h);     // 2nd-order stencil error is exactly h^2
}

TEST_CASE("stencil accuracy on a transcendental function") {
  const double x0 = 0.7;
  auto f = [&](double off) { return std::sin(x0 + off); };
  const double exact = std::cos(x0);

  CHECK(std::abs(fd::d1(f, 1e-3, 2) - exact) < 1e-6);
  CHECK(std::abs(fd::d1(f, 1e-2, 4) - exact) < 1e-8);
  CHECK(std::abs(fd::d2(f, 1e-3, 2) + std::sin(x0)) < 1e-6);

  // whole-evaluation extrapolation upgrades order 2 to order 4
  const double extr = fd::extrapolate([&](double h) { return fd::d1(f, h, 2); }, 1e-2, 2);
  CHECK(std::abs(extr - exact) < 1e-8);

  DiffSpec spec{1e-2, 2, true};
  CHECK(std::abs(fd::evaluate([&](double h) { return fd::d1(f, h, 2); }, spec) - exact) <
        1e-8);
}

TEST_CASE("adaptive quadrature hits tight tolerances") {
  const double pi = std::acos(-1.0);
  CHECK(fd::integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fd::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(fd::integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("observed order recovers the slope of synthetic ladders") {
  std::vector<double> steps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e2, e35;
  for (double h : steps) {
    e2.push_back(7.0 * h * h);
    e35.push_back(3.0 * std::pow(h, 3.5));
  }
  CHECK(fd::observed_order(steps, e2) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fd::observed_order(steps, e35) == doctest::Approx(3.5).epsilon(1e-10));

  // exact zeros carry no slope information and are skipped
  std::vector<double> with_zero{7.0 * 0.16, 0.0, 7.0 * 0.01, 7.0 * 0.0025};
  CHECK(fd::observed_order(steps, with_zero) == doctest::Approx(2.0).epsilon(1e-10));

  std::vector<double> all_zero(4, 0.0);
  CHECK(std::isinf(fd::observed_order(steps, all_zero)));
}

TEST_CASE("flat metric has identically vanishing curvature") {
  const DiffSpec spec{1e-3, 2, true};
  const Point p{0.3, -0.8, 1.1};

  MetricField flat = flat_metric(3);
  CurvatureBundle cb = curvature(flat, 0.0, p, spec);
  CHECK(cb.christoffel.sup_norm() == doctest::Approx(0.0));
  CHECK(cb.ricci.sup_norm() == doctest::Approx(0.0));
  CHECK(cb.scalar == doctest::Approx(0.0));

  // engine path on a bare copy
  MetricField bare{3, flat.eval, nullptr, nullptr};
  CurvatureBundle num = curvature(bare, 0.0, p, spec);
  CHECK(num.christoffel.sup_norm() < 1e-10);
  CHECK(std::abs(num.scalar) < 1e-9);
}

TEST_CASE("half-plane connection matches its closed form") {
  const DiffSpec spec{1e-3, 2, true};
  const Point p{0.3, 0.8};
  const double iy = 1.0 / 0.8;

  MetricField g = bare_half_plane();
  Tensor3 gamma = christoffel(g, 0.0, p, spec);

  CHECK(gamma(0, 0, 1) == doctest::Approx(-iy).epsilon(1e-9));
  CHECK(gamma(0, 1, 0) == doctest::Approx(-iy).epsilon(1e-9));
  CHECK(gamma(1, 0, 0) == doctest::Approx(iy).epsilon(1e-9));
  CHECK(gamma(1, 1, 1) == doctest::Approx(-iy).epsilon(1e-9));
  CHECK(std::abs(gamma(0, 0, 0)) < 1e-9);
  CHECK(std::abs(gamma(1, 0, 1)) < 1e-9);
}

TEST_CASE("half-plane curvature: K = -1, R = -2, Ric = -g") {
  const DiffSpec spec{1e-3, 2, true};
  const Point p{-0.4, 0.7};

  MetricField g = bare_half_plane();
  CurvatureBundle cb = curvature(g, 0.0, p, spec);

  CHECK(cb.scalar == doctest::Approx(-2.0).epsilon(1e-7));
  REQUIRE(cb.gauss.has_value());
  CHECK(*cb.gauss == doctest::Approx(-1.0).epsilon(1e-7));

  const double gyy = 1.0 / (0.7 * 0.7);
  CHECK(cb.ricci(0, 0) == doctest::Approx(-gyy).epsilon(1e-7));
  CHECK(cb.ricci(1, 1) == doctest::Approx(-gyy).epsilon(1e-7));
  CHECK(std::abs(cb.ricci(0, 1)) < 1e-7);

  // library-provided version carries the closed-form oracle
  MetricField oracle = hyperbolic_half_plane();
  CurvatureBundle ocb = curvature(oracle, 0.0, p, spec);
  CHECK(ocb.scalar == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("metric partials of the half-plane metric") {
  const DiffSpec spec{1e-3, 2, true};
  const double y = 0.9;
  MetricField g = bare_half_plane();
  Tensor3 dg = metric_partials(g, 0.0, Point{0.1, y}, spec);
  // d/dy y^-2 = -2 y^-3, d/dx anything = 0
  CHECK(dg(1, 0, 0) == doctest::Approx(-2.0 / (y * y * y)).epsilon(1e-10));
  CHECK(dg(1, 1, 1) == doctest::Approx(-2.0 / (y * y * y)).epsilon(1e-10));
  CHECK(std::abs(dg(0, 0, 0)) < 1e-10);
  CHECK(std::abs(dg(1, 0, 1)) < 1e-10);
}

TEST_CASE("isothermal Gaussian curvature formula on closed-form factors") {
  const DiffSpec spec{1e-3, 2, true};

  // lam = y^-t has K = -(t/2) y^(t-2)
  auto lam_t = [](double t) {
    return [t](double, double v) { return std::pow(v, -t); };
  };
  CHECK(gauss_isothermal(lam_t(1.0), 0.4, 1.0, spec) ==
        doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(gauss_isothermal(lam_t(2.0), 0.2, 0.8, spec) ==
        doctest::Approx(-1.0).epsilon(1e-9));

  // lam = 1/(1+u^2+v^2) has K = 2/(1+u^2+v^2)
  auto cigar = [](double u, double v) { return 1.0 / (1.0 + u * u + v * v); };
  CHECK(gauss_isothermal(cigar, 0.5, 0.5, spec) ==
        doctest::Approx(2.0 / 1.5).epsilon(1e-9));

  // hyperbolic factor y^-2: constant curvature -1
  auto hyp = [](double, double v) { return 1.0 / (v * v); };
  CHECK(gauss_isothermal(hyp, -1.2, 0.6, spec) ==
        doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("Laplace-Beltrami in divergence form") {
  const DiffSpec spec{1e-3, 2, true};
  ScalarPointField rsq = [](const Point& q) { return q[0] * q[0] + q[1] * q[1]; };

  MetricField flat = flat_metric(2);
  CHECK(laplace_beltrami(rsq, flat, 0.0, Point{0.3, -0.6}, spec) ==
        doctest::Approx(4.0).epsilon(1e-9));

  // conformal metric y^-2 I rescales the flat Laplacian by y^2
  MetricField g = bare_half_plane();
  const double y = 0.7;
  CHECK(laplace_beltrami(rsq, g, 0.0, Point{0.3, y}, spec) ==
        doctest::Approx(4.0 * y * y).epsilon(1e-7));

  ScalarPointField lin = [](const Point& q) { return 3.0 * q[0] - 2.0 * q[1]; };
  CHECK(std::abs(laplace_beltrami(lin, flat, 0.0, Point{0.1, 0.2}, spec)) < 1e-10);
}

TEST_CASE("volume density") {
  MetricField g = bare_half_plane();
  CHECK(volume_form(g, 0.0, Point{2.0, 0.7}) ==
        doctest::Approx(1.0 / 0.49).epsilon(1e-13));
  CHECK(volume_form(flat_metric(3), 0.0, Point{1.0, 2.0, 3.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));

  MetricField sphere = constant_curvature_warped(1.0);
  CHECK(volume_form(sphere, 0.0, Point{0.5, 1.0}) ==
        doctest::Approx(std::sin(0.5)).epsilon(1e-12));
}

TEST_CASE("covariant derivative annihilates the metric") {
  const DiffSpec spec{1e-3, 2, true};
  MetricField g = bare_half_plane();
  const Point p{0.2, 0.9};
  Sym2PointField metric_itself = [&](const Point& q) { return g.eval(0.0, q); };
  Tensor3 nabla = covariant_derivative_sym2(metric_itself, g, 0.0, p, spec);
  CHECK(nabla.sup_norm() < 1e-8);
}

TEST_CASE("covariant derivative reduces to partials on a flat background") {
  const DiffSpec spec{1e-3, 2, true};
  MetricField flat = flat_metric(2);
  Sym2PointField t = [](const Point& q) {
    SymTensor2 out(2);
    out.set(0, 0, q[0] * q[0]);
    out.set(1, 1, q[1] * q[1]);
    return out;
  };
  const Point p{1.2, 0.7};
  Tensor3 nabla = covariant_derivative_sym2(t, flat, 0.0, p, spec);
  CHECK(nabla(0, 0, 0) == doctest::Approx(2.4).epsilon(1e-10));
  CHECK(nabla(1, 1, 1) == doctest::Approx(1.4).epsilon(1e-10));
  CHECK(std::abs(nabla(0, 1, 1)) < 1e-10);
  CHECK(std::abs(nabla(1, 0, 0)) < 1e-10);
}

TEST_CASE("rotationally symmetric constant-curvature metrics") {
  const DiffSpec spec{1e-3, 2, true};
  for (double k : {1.0, -1.0}) {
    MetricField g = constant_curvature_warped(k);
    CurvatureBundle cb = curvature(g, 0.0, Point{0.7, 1.3}, spec);
    CHECK(cb.scalar == doctest::Approx(2.0 * k).epsilon(1e-7));
  }
}

TEST_CASE("curvature converges at the scheme order on the half-plane") {
  MetricField g = bare_half_plane();
  const Point p{0.1, 1.1};
  std::vector<double> steps{0.08, 0.04, 0.02};
  std::vector<double> errs;
  for (double h : steps) {
    DiffSpec spec{h, 2, false};
    errs.push_back(std::abs(curvature(g, 0.0, p, spec).scalar + 2.0));
  }
  CHECK(fd::observed_order(steps, errs) > 1.8);
}

TEST_CASE("domain and positivity guards") {
  const DiffSpec spec{1e-3, 2, true};
  MetricField g = hyperbolic_half_plane();
  CHECK_THROWS_AS((void)g.eval(0.0, Point{0.0, -0.5}), EvaluationDomainError);

  MetricField indefinite;
  indefinite.dim = 2;
  indefinite.eval = [](double, const Point&) {
    SymTensor2 m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, -1.0);
    return m;
  };
  CHECK_THROWS_AS((void)volume_form(indefinite, 0.0, Point{0.0, 0.0}),
                  DegenerateMetricError);
  CHECK_THROWS_AS((void)curvature(indefinite, 0.0, Point{0.0, 0.0}, spec),
                  DegenerateMetricError);
}
