#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ryflow/charts.hpp"
#include "ryflow/fd.hpp"
#include "ryflow/grid.hpp"
#include "ryflow/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ryflow;

namespace {

double exact_cigar_h(double sum, double t, double x, double y) {
  return -std::log(std::exp(4.0 * sum * t) + x * x + y * y);
}

// Cartesian grid holding the cigar initial data with exact Dirichlet values.
ConformalGridState cigar_state(int n, double extent, double sum) {
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = n;
  s.d1 = s.d2 = 2.0 * extent / (n - 1);
  s.o1 = s.o2 = -extent;
  s.bc = DirichletBoundary{[sum](double t, double a, double b) {
    return exact_cigar_h(sum, t, a, b);
  }};
  s.h.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      s.at(i, j) = exact_cigar_h(sum, 0.0, s.coord1(i), s.coord2(j));
  return s;
}

double sup_error_vs_cigar(const ConformalGridState& s, double sum) {
  double sup = 0.0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i)
      sup = std::max(sup, std::abs(s.at(i, j) -
                                   exact_cigar_h(sum, s.t, s.coord1(i), s.coord2(j))));
  return sup;
}

ConformalGridState fill(ConformalGridState s,
                        const std::function<double(double, double)>& f) {
  s.h.resize(static_cast<std::size_t>(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) s.at(i, j) = f(s.coord1(i), s.coord2(j));
  return s;
}

// Exact self-similar plane solution as a field with analytic derivatives.
ScalarTimeField exact_cigar_plane_field(double sum) {
  ScalarTimeField f;
  auto denom = [sum](double t, double x, double y) {
    return std::exp(4.0 * sum * t) + x * x + y * y;
  };
  f.value = [denom](double t, double x, double y) { return -std::log(denom(t, x, y)); };
  f.d1 = [denom](double t, double x, double y) { return -2.0 * x / denom(t, x, y); };
  f.d2 = [denom](double t, double x, double y) { return -2.0 * y / denom(t, x, y); };
  f.d11 = [denom](double t, double x, double y) {
    const double s = denom(t, x, y);
    return -2.0 / s + 4.0 * x * x / (s * s);
  };
  f.d22 = [denom](double t, double x, double y) {
    const double s = denom(t, x, y);
    return -2.0 / s + 4.0 * y * y / (s * s);
  };
  f.d12 = [denom](double t, double x, double y) {
    const double s = denom(t, x, y);
    return 4.0 * x * y / (s * s);
  };
  f.dt = [denom, sum](double t, double x, double y) {
    return -4.0 * sum * std::exp(4.0 * sum * t) / denom(t, x, y);
  };
  return f;
}

}  // namespace

TEST_CASE("discrete-harmonic fields are stationary") {
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = 21;
  s.d1 = s.d2 = 0.1;
  s.o1 = s.o2 = -1.0;
  s.bc = DirichletBoundary{[](double, double a, double) { return a; }};
  s = fill(s, [](double a, double) { return a; });

  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.dt = 1e-4;
  cfg.steps = 20;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);
  double sup = 0.0;
  const auto& last = traj.snapshots.back();
  for (std::size_t c = 0; c < last.h.size(); ++c)
    sup = std::max(sup, std::abs(last.h[c] - s.h[c]));
  CHECK(sup < 1e-12);
}

TEST_CASE("constant fields are fixed points, bitwise") {
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = 16;
  s.d1 = s.d2 = 0.25;
  s.o1 = s.o2 = 0.0;
  s.bc = PeriodicBoundary{};
  s = fill(s, [](double, double) { return 0.7; });

  SolverConfig cfg;
  cfg.params = RYParams{0.5, 0.5};
  cfg.dt = 1e-3;
  cfg.steps = 10;
  cfg.scheme = Scheme::ExplicitEuler;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);
  const auto& last = traj.snapshots.back();
  for (std::size_t c = 0; c < last.h.size(); ++c) CHECK(last.h[c] == 0.7);
}

TEST_CASE("zero diffusivity freezes every field") {
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = 17;
  s.d1 = s.d2 = 0.125;
  s.o1 = s.o2 = -1.0;
  s.bc = PeriodicBoundary{};
  s = fill(s, [](double a, double b) { return std::sin(3.0 * a) + b * b; });
  const std::vector<double> before = s.h;

  SolverConfig cfg;
  cfg.params = RYParams{0.5, -0.5};  // alpha + beta = 0
  cfg.dt = 1e-2;
  cfg.steps = 10;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);
  const auto& last = traj.snapshots.back();
  for (std::size_t c = 0; c < last.h.size(); ++c) CHECK(last.h[c] == before[c]);

  // antidiffusive direction is refused outright
  cfg.params = RYParams{-1.0, 0.0};
  CHECK_THROWS_AS((void)run_flow(s, cfg), PreconditionError);
}

TEST_CASE("solver tracks the exact solution at second order in spacing") {
  const double sum = 1.0;
  const double T = 0.05;
  std::vector<double> spacings, errors;
  for (int n : {21, 41, 81}) {
    ConformalGridState s = cigar_state(n, 2.0, sum);
    SolverConfig cfg;
    cfg.params = RYParams{1.0, 0.0};
    cfg.dt = 2.5e-4 * std::pow(s.d1 / 0.1, 2.0);
    cfg.steps = static_cast<long>(std::llround(T / cfg.dt));
    cfg.snapshot_stride = cfg.steps;
    cfg.scheme = Scheme::RK4;
    FlowTrajectory traj = run_flow(s, cfg);
    REQUIRE(traj.status == StopReason::Completed);
    CHECK(traj.last_t == doctest::Approx(T).epsilon(1e-12));
    spacings.push_back(s.d1);
    errors.push_back(sup_error_vs_cigar(traj.snapshots.back(), sum));
  }
  CHECK(errors.back() < 5e-4);
  CHECK(fd::observed_order(spacings, errors) > 1.8);
}

TEST_CASE("all three schemes complete with bounded error") {
  const double sum = 1.0;
  for (Scheme scheme : {Scheme::ExplicitEuler, Scheme::RK4, Scheme::SemiImplicit}) {
    ConformalGridState s = cigar_state(41, 2.0, sum);
    SolverConfig cfg;
    cfg.params = RYParams{1.0, 0.0};
    cfg.scheme = scheme;
    cfg.dt = scheme == Scheme::SemiImplicit ? 4e-3 : 2.5e-4;
    cfg.steps = scheme == Scheme::SemiImplicit ? 10 : 160;
    FlowTrajectory traj = run_flow(s, cfg);
    REQUIRE(traj.status == StopReason::Completed);
    CHECK(sup_error_vs_cigar(traj.snapshots.back(), sum) < 2e-2);
  }
}

TEST_CASE("stability guard scales with the squared spacing and refuses big steps") {
  ConformalGridState s = cigar_state(41, 2.0, 1.0);
  RYParams params{1.0, 0.0};
  const double limit = cfl_limit(s, params);
  CHECK(limit > 0.0);

  ConformalGridState wide = s;
  wide.d1 = wide.d2 = 2.0 * s.d1;
  CHECK(cfl_limit(wide, params) == doctest::Approx(4.0 * limit).epsilon(1e-12));

  CHECK_THROWS_AS((void)cfl_limit(s, RYParams{0.5, -0.5}), PreconditionError);

  SolverConfig cfg;
  cfg.params = params;
  cfg.dt = 2.0 * limit;
  cfg.steps = 5;
  cfg.scheme = Scheme::RK4;
  try {
    (void)run_flow(s, cfg);
    FAIL("expected the stability guard to refuse this step size");
  } catch (const CflError& e) {
    CHECK(e.suggested_dt > 0.0);
    CHECK(e.suggested_dt <= limit);
  }

  // the semi-implicit scheme is not subject to the explicit guard
  cfg.scheme = Scheme::SemiImplicit;
  cfg.steps = 2;
  CHECK_NOTHROW((void)run_flow(s, cfg));
}

TEST_CASE("unguarded oversized steps blow up and are flagged, not thrown") {
  ConformalGridState s = cigar_state(41, 2.0, 1.0);
  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.cfl_guard = false;
  cfg.dt = 0.5;  // far above the stability limit
  cfg.steps = 50;
  cfg.scheme = Scheme::ExplicitEuler;
  FlowTrajectory traj = run_flow(s, cfg);
  CHECK(traj.status == StopReason::BlowUp);
  CHECK(traj.steps_done < 50);

  // a field already outside the representable range trips immediately
  ConformalGridState big;
  big.chart = Chart::Cartesian;
  big.nx = big.ny = 8;
  big.d1 = big.d2 = 0.5;
  big.bc = PeriodicBoundary{};
  big = fill(big, [](double, double) { return 800.0; });
  SolverConfig cfg2;
  cfg2.params = RYParams{1.0, 0.0};
  cfg2.dt = 1e-6;
  cfg2.steps = 3;
  FlowTrajectory t2 = run_flow(big, cfg2);
  CHECK(t2.status == StopReason::BlowUp);
  CHECK(t2.steps_done == 0);
}

TEST_CASE("periodic runs obey the discrete maximum principle") {
  const double pi = std::acos(-1.0);
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = 64;
  s.d1 = s.d2 = 2.0 * pi / 64;
  s.o1 = s.o2 = 0.0;
  s.bc = PeriodicBoundary{};
  s = fill(s, [](double a, double b) {
    return 0.5 * std::sin(a) + 0.4 * std::cos(b);
  });
  const double max0 = *std::max_element(s.h.begin(), s.h.end());
  const double min0 = *std::min_element(s.h.begin(), s.h.end());

  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.dt = 0.5 * cfl_limit(s, cfg.params);
  cfg.steps = 100;
  cfg.snapshot_stride = 20;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);

  for (const auto& snap : traj.snapshots) {
    CHECK(*std::max_element(snap.h.begin(), snap.h.end()) <= max0 + 1e-10);
    CHECK(*std::min_element(snap.h.begin(), snap.h.end()) >= min0 - 1e-10);
  }
}

TEST_CASE("zero steps return the initial state with working probes") {
  ConformalGridState s = cigar_state(21, 2.0, 1.0);
  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.steps = 0;
  FlowTrajectory traj = run_flow(s, cfg, {{0.0, 0.0, 0.0}});
  CHECK(traj.status == StopReason::Completed);
  CHECK(traj.steps_done == 0);
  CHECK(traj.last_t == 0.0);
  REQUIRE(traj.snapshots.size() == 1);
  REQUIRE(traj.probes.size() == 1);
  CHECK(traj.probes[0].h == doctest::Approx(0.0).epsilon(1e-12));  // -ln(1)
}

TEST_CASE("probe rows carry field, curvature, and trace values") {
  ConformalGridState s = cigar_state(41, 2.0, 1.0);
  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.dt = 2e-4;
  cfg.steps = 100;
  cfg.snapshot_stride = 10;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg, {{0.01, 0.0, 0.0}, {0.02, 0.35, -0.2}});
  REQUIRE(traj.status == StopReason::Completed);
  REQUIRE(traj.probes.size() == 2);

  // probe values carry the solver's own O(spacing^2) truncation
  const ProbeRow& origin = traj.probes[0];
  CHECK(origin.t == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(std::abs(origin.h - exact_cigar_h(1.0, 0.01, 0.0, 0.0)) < 5e-4);
  // closed-form curvature at the origin is 2 for every t
  CHECK(origin.gauss == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(std::abs(origin.vol_rate) < 1e-10);

  const ProbeRow& off = traj.probes[1];
  const double f = std::exp(4.0 * 0.02);
  const double k_exact = 2.0 * f / (f + 0.35 * 0.35 + 0.2 * 0.2);
  CHECK(std::abs(off.h - exact_cigar_h(1.0, 0.02, 0.35, -0.2)) < 5e-4);
  CHECK(off.gauss == doctest::Approx(k_exact).epsilon(5e-3));
}

TEST_CASE("discrete curvature includes the parabolic chart factor") {
  // plane cigar data sampled on the parabolic chart at t = 0
  ConformalGridState s;
  s.chart = Chart::ParabolicUV;
  s.nx = 17;
  s.ny = 13;
  s.d1 = s.d2 = 0.05;
  s.o1 = 0.8;
  s.o2 = 0.3;
  s.bc = DirichletBoundary{[](double, double, double) { return 0.0; }};
  s = fill(s, [](double u, double v) {
    const double r2 = 0.25 * (u * u + v * v) * (u * u + v * v);
    return -std::log(1.0 + r2);
  });

  const std::vector<double> k = discrete_gauss(s);
  const int i = 8, j = 6;
  const double u = s.coord1(i), v = s.coord2(j);
  const double r2 = 0.25 * (u * u + v * v) * (u * u + v * v);
  const double expected = 2.0 / (1.0 + r2);
  CHECK(k[static_cast<std::size_t>(j) * s.nx + i] ==
        doctest::Approx(expected).epsilon(2e-3));

  CHECK(gauss_truncation_estimate(s) > 0.0);
  CHECK(gauss_truncation_estimate(s) < 1e-2);

  // Cartesian grids keep the plain five-point formula
  ConformalGridState c = cigar_state(41, 2.0, 1.0);
  const std::vector<double> kc = discrete_gauss(c);
  CHECK(kc[static_cast<std::size_t>(20) * 41 + 20] ==
        doctest::Approx(2.0).epsilon(5e-3));

  // non-conformal charts are rejected
  ConformalGridState polar = s;
  polar.chart = Chart::Polar;
  CHECK_THROWS_AS((void)discrete_gauss(polar), PreconditionError);

  // refinement shrinks the truncation estimate
  ConformalGridState cf = cigar_state(81, 2.0, 1.0);
  CHECK(gauss_truncation_estimate(cf) < gauss_truncation_estimate(c));
}

TEST_CASE("parabolic-chart stepping matches the exact solution") {
  const double sum = 0.5;
  ConformalGridState s;
  s.chart = Chart::ParabolicUV;
  s.nx = s.ny = 25;
  s.d1 = s.d2 = 0.025;
  s.o1 = 0.8;
  s.o2 = 0.3;
  auto exact = [sum](double t, double u, double v) {
    const double r2 = 0.25 * (u * u + v * v) * (u * u + v * v);
    return -std::log(std::exp(4.0 * sum * t) + r2);
  };
  s.bc = DirichletBoundary{exact};
  s = fill(s, [&](double u, double v) { return exact(0.0, u, v); });

  SolverConfig cfg;
  cfg.params = RYParams{sum, 0.0};
  cfg.dt = 0.5 * cfl_limit(s, cfg.params);
  cfg.steps = 200;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);

  const auto& last = traj.snapshots.back();
  double sup = 0.0;
  for (int j = 0; j < last.ny; ++j)
    for (int i = 0; i < last.nx; ++i)
      sup = std::max(sup, std::abs(last.at(i, j) -
                                   exact(last.t, last.coord1(i), last.coord2(j))));
  CHECK(sup < 1e-5);

  // grids touching the coordinate singularity are refused
  ConformalGridState bad = s;
  bad.o1 = -0.2;
  bad.o2 = 0.0;
  CHECK_THROWS_AS((void)run_flow(bad, cfg), PreconditionError);
}

TEST_CASE("chart maps invert and differentiate consistently") {
  for (Chart chart : {Chart::Cartesian, Chart::Polar, Chart::ParabolicUV,
                      Chart::EllipticUV}) {
    ChartMap map{chart, 1.3};
    // forward(inverse(x, y)) is the identity on the chart's image; the
    // elliptic chart covers the open first quadrant, the others all y != 0
    const std::vector<std::pair<double, double>> pts =
        chart == Chart::EllipticUV
            ? std::vector<std::pair<double, double>>{{0.8, 0.6}, {1.5, 0.2}, {0.3, 0.9}}
            : std::vector<std::pair<double, double>>{{0.8, 0.6}, {-0.4, 0.9}, {1.5, -0.2}};
    for (auto [x, y] : pts) {
      const auto ab = map.inverse(x, y);
      const auto xy = map.forward(ab[0], ab[1]);
      CHECK(xy[0] == doctest::Approx(x).epsilon(1e-10));
      CHECK(xy[1] == doctest::Approx(y).epsilon(1e-10));
    }
  }

  // jacobians agree with differencing the forward map
  for (Chart chart : {Chart::Polar, Chart::ParabolicUV, Chart::EllipticUV}) {
    ChartMap map{chart, 1.3};
    const double a = chart == Chart::EllipticUV ? -0.5 : 1.1;
    const double b = chart == Chart::EllipticUV ? 0.3 : 0.7;
    const auto jac = map.jacobian(a, b);
    const double h = 1e-6;
    const auto xp = map.forward(a + h, b), xm = map.forward(a - h, b);
    const auto yp = map.forward(a, b + h), ym = map.forward(a, b - h);
    CHECK(jac[0] == doctest::Approx((xp[0] - xm[0]) / (2 * h)).epsilon(1e-6));
    CHECK(jac[1] == doctest::Approx((yp[0] - ym[0]) / (2 * h)).epsilon(1e-6));
    CHECK(jac[2] == doctest::Approx((xp[1] - xm[1]) / (2 * h)).epsilon(1e-6));
    CHECK(jac[3] == doctest::Approx((yp[1] - ym[1]) / (2 * h)).epsilon(1e-6));
  }

  ChartMap parab{Chart::ParabolicUV, 1.0};
  CHECK_THROWS_AS((void)parab.inverse(-1.0, 0.0), EvaluationDomainError);
  ChartMap polar{Chart::Polar, 1.0};
  CHECK_THROWS_AS((void)polar.forward(-0.5, 0.0), EvaluationDomainError);
}

TEST_CASE("interpolation reproduces polynomials and snaps to nodes") {
  ConformalGridState s;
  s.chart = Chart::Cartesian;
  s.nx = s.ny = 13;
  s.d1 = s.d2 = 0.5;
  s.o1 = s.o2 = -3.0;
  s.bc = DirichletBoundary{};
  auto cubic = [](double a, double b) {
    return a * a * a - 2.0 * a * a * b + b * b * b - 0.5;
  };
  s = fill(s, cubic);

  // node snap is exact
  CHECK(interpolate(s, s.coord1(4), s.coord2(9), 4) == s.at(4, 9));
  // cubic tensor interpolation is exact on cubics
  CHECK(interpolate(s, 0.77, -1.13, 4) ==
        doctest::Approx(cubic(0.77, -1.13)).epsilon(1e-12));
  CHECK(interpolate(s, 0.77, -1.13, 6) ==
        doctest::Approx(cubic(0.77, -1.13)).epsilon(1e-12));
  // linear interpolation is exact on linear data only
  auto lin = [](double a, double b) { return 2.0 * a - 3.0 * b + 0.25; };
  ConformalGridState sl = fill(s, lin);
  CHECK(interpolate(sl, 0.77, -1.13, 2) ==
        doctest::Approx(lin(0.77, -1.13)).epsilon(1e-12));

  CHECK_THROWS_AS((void)interpolate(s, 3.5, 0.0, 4), EvaluationDomainError);

  // periodic grids wrap
  const double pi = std::acos(-1.0);
  ConformalGridState p;
  p.chart = Chart::Cartesian;
  p.nx = p.ny = 32;
  p.d1 = p.d2 = 2.0 * pi / 32;
  p.o1 = p.o2 = 0.0;
  p.bc = PeriodicBoundary{};
  p = fill(p, [](double a, double b) { return std::sin(a) + std::cos(b); });
  CHECK(interpolate(p, 1.3, 0.4, 4) ==
        doctest::Approx(interpolate(p, 1.3 + 2.0 * pi, 0.4, 4)).epsilon(1e-12));
}

TEST_CASE("chart transfer resamples fields faithfully") {
  ConformalGridState src;
  src.chart = Chart::Cartesian;
  src.nx = src.ny = 61;
  src.d1 = src.d2 = 0.1;
  src.o1 = src.o2 = -3.0;
  src.bc = DirichletBoundary{};
  auto radial = [](double x, double y) { return std::exp(-(x * x + y * y) / 4.0); };
  src = fill(src, radial);

  // identity transfer onto the same geometry is bitwise
  TransferResult same = chart_transfer(
      src, Chart::Cartesian, {src.nx, src.ny, src.d1, src.d2, src.o1, src.o2}, 4);
  for (std::size_t c = 0; c < src.h.size(); ++c) CHECK(same.state.h[c] == src.h[c]);

  // parabolic resampling matches the analytic composition
  GridGeometry pg{17, 13, 0.05, 0.05, 0.8, 0.3};
  TransferResult parab = chart_transfer(src, Chart::ParabolicUV, pg, 6);
  CHECK(parab.state.chart == Chart::ParabolicUV);
  ChartMap pmap{Chart::ParabolicUV, 1.0};
  double sup = 0.0;
  for (int j = 0; j < pg.ny; ++j)
    for (int i = 0; i < pg.nx; ++i) {
      const auto xy = pmap.forward(pg.o1 + i * pg.d1, pg.o2 + j * pg.d2);
      sup = std::max(sup, std::abs(parab.state.h[static_cast<std::size_t>(j) * pg.nx + i] -
                                   radial(xy[0], xy[1])));
    }
  CHECK(sup < 1e-6);
  CHECK(parab.interp_error_estimate >= 0.0);
  CHECK(parab.interp_error_estimate < 1e-3);

  // a radial field transferred to the polar chart ignores the angle
  GridGeometry pol{11, 9, 0.2, 0.5, 0.5, -2.0};
  TransferResult polar = chart_transfer(src, Chart::Polar, pol, 6);
  for (int i = 0; i < pol.nx; ++i) {
    const double first = polar.state.h[static_cast<std::size_t>(0) * pol.nx + i];
    for (int j = 1; j < pol.ny; ++j)
      CHECK(polar.state.h[static_cast<std::size_t>(j) * pol.nx + i] ==
            doctest::Approx(first).epsilon(1e-6));
  }

  // targets outside the source footprint are rejected
  GridGeometry outside{9, 9, 0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS((void)chart_transfer(src, Chart::ParabolicUV, outside, 4),
                  EvaluationDomainError);
}

TEST_CASE("trajectory fields interpolate between snapshots") {
  ConformalGridState s = cigar_state(41, 2.0, 1.0);
  SolverConfig cfg;
  cfg.params = RYParams{1.0, 0.0};
  cfg.dt = 2e-4;
  cfg.steps = 100;
  cfg.snapshot_stride = 10;
  cfg.scheme = Scheme::RK4;
  FlowTrajectory traj = run_flow(s, cfg);
  REQUIRE(traj.status == StopReason::Completed);

  ScalarTimeField f = trajectory_field(traj, 6);
  REQUIRE(f.value);
  REQUIRE(f.dt);

  // mid-snapshot time, off-node point
  const double t = 0.0137, x = 0.35, y = -0.2;
  CHECK(f.value(t, x, y) ==
        doctest::Approx(exact_cigar_h(1.0, t, x, y)).epsilon(2e-4));

  const double fd_dt =
      (f.value(t + 1e-3, x, y) - f.value(t - 1e-3, x, y)) / 2e-3;
  CHECK(f.dt(t, x, y) == doctest::Approx(fd_dt).epsilon(1e-4));
}

TEST_CASE("exact solution satisfies the parabolic-chart flow equation") {
  const RYParams params{1.0, 0.0};
  const DiffSpec spec{1e-3, 2, true};
  ScalarTimeField h =
      compose_with_chart(exact_cigar_plane_field(params.sum()), Chart::ParabolicUV);
  for (auto [u, v] : {std::pair{1.2, 0.5}, std::pair{0.9, -0.7}})
    CHECK(std::abs(residual_liouville(h, 0.3, u, v, params, spec)) < 1e-8);
}

TEST_CASE("traveling ansatz equals direct substitution into the chart equation") {
  const DiffSpec spec{1e-3, 2, true};
  const double slope = 2.0;

  // field of (xi, eta) built from the same profile phi(w) = sin(w)
  ScalarTimeField h;
  h.value = [slope](double, double a, double b) { return std::sin(a + slope * b); };
  h.d1 = [slope](double, double a, double b) { return std::cos(a + slope * b); };
  h.d2 = [slope](double, double a, double b) {
    return slope * std::cos(a + slope * b);
  };
  h.d11 = [slope](double, double a, double b) { return -std::sin(a + slope * b); };
  h.d22 = [slope](double, double a, double b) {
    return -slope * slope * std::sin(a + slope * b);
  };
  h.d12 = [slope](double, double a, double b) {
    return -slope * std::sin(a + slope * b);
  };
  h.dt = [](double, double, double) { return 0.0; };

  TravelingWave phi;
  phi.value = [](double, double w) { return std::sin(w); };
  phi.dw = [](double, double w) { return std::cos(w); };
  phi.dww = [](double, double w) { return -std::sin(w); };
  phi.dt = [](double, double) { return 0.0; };

  for (auto [xi, eta] : {std::pair{3.0, 4.0}, std::pair{1.5, -0.8}}) {
    const double direct = residual_parabolic(h, 0.0, xi, eta, spec);
    const double ansatz =
        solitonic_residual(SolitonChart::Parabolic, phi, slope, 0.0, xi, eta, spec);
    CHECK(direct == doctest::Approx(ansatz).epsilon(1e-12));
  }
}
