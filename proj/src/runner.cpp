#include "ryflow/runner.hpp"

#include "ryflow/flows.hpp"
#include "ryflow/geometry.hpp"
#include "ryflow/grid.hpp"
#include "ryflow/residuals.hpp"
#include "ryflow/ry_map.hpp"
#include "ryflow/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace ryflow {
namespace {

constexpr const char* kToolName = "ryflow";
constexpr const char* kToolVersion = "1.0.0";

// pass gates for the verify command's identity records
constexpr double kIdentityResidualTol = 1e-5;
constexpr double kIdentityOrderMin = 1.8;

DiffSpec spec_from(const RunConfig& c) {
  return {c.step, c.order, c.richardson};
}

RYParams params_from(const RunConfig& c) { return {c.alpha, c.beta}; }

TimePotential potential_from(const RunConfig& c) {
  if (c.flow_kind == "cigar" && c.steady)
    return cigar_steady_potential(params_from(c));
  if (c.potential == "exp") return exp_potential(c.rate);
  if (c.potential == "one") return unit_potential();
  return power_potential(c.rate);
}

MetricField base_from(const RunConfig& c) {
  if (c.base == "hyperbolic") return hyperbolic_half_plane();
  if (c.base == "round") return constant_curvature_warped(1.0);
  return flat_metric(2);
}

ScalarProfile2 bump_profile(double amp) {
  ScalarProfile2 E;
  E.value = [amp](double u, double v) {
    return 1.0 + amp * std::exp(-(u * u + v * v));
  };
  E.grad = [amp](double u, double v) -> std::array<double, 2> {
    const double e = amp * std::exp(-(u * u + v * v));
    return {-2.0 * u * e, -2.0 * v * e};
  };
  E.hess = [amp](double u, double v) -> std::array<double, 3> {
    const double e = amp * std::exp(-(u * u + v * v));
    return {(4.0 * u * u - 2.0) * e, 4.0 * u * v * e, (4.0 * v * v - 2.0) * e};
  };
  return E;
}

ScalarProfile1 exp_warp_profile() {
  ScalarProfile1 G;
  G.value = [](double u) { return std::exp(u); };
  G.deriv = G.value;
  G.deriv2 = G.value;
  return G;
}

FlowKind kind_from(const RunConfig& c) {
  if (c.flow_kind == "conformal") return ConformalFlow{potential_from(c), base_from(c)};
  if (c.flow_kind == "cone") return ConeFlow{base_from(c)};
  if (c.flow_kind == "convex") return ConvexEuclideanFlow{bump_profile(c.amp)};
  if (c.flow_kind == "poincare") return PoincareFlow{c.dim};
  if (c.flow_kind == "warped") return WarpedRotSymFlow{potential_from(c), c.warp_k};
  if (c.flow_kind == "warped-general")
    return WarpedGeneralFlow{potential_from(c), exp_warp_profile()};
  return GeneralizedCigarFlow{potential_from(c)};
}

// ---- JSON fragments --------------------------------------------------------

Json sym_json(const SymTensor2& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) row.push(Json::num(m(i, j)));
    rows.push(std::move(row));
  }
  return rows;
}

Json point_json(const Point& p) {
  Json arr = Json::array();
  for (int i = 0; i < p.dim(); ++i) arr.push(Json::num(p[i]));
  return arr;
}

Json params_json(const RYParams& params) {
  Json o = Json::object();
  o.set("alpha", Json::num(params.alpha));
  o.set("beta", Json::num(params.beta));
  return o;
}

const char* signature_name(SignatureKind k) {
  switch (k) {
    case SignatureKind::Riemannian: return "Riemannian";
    case SignatureKind::SemiRiemannian: return "SemiRiemannian";
    case SignatureKind::Degenerate: return "Degenerate";
  }
  return "unknown";
}

const char* character_name(FlowCharacterKind k) {
  switch (k) {
    case FlowCharacterKind::Expanding: return "Expanding";
    case FlowCharacterKind::Steady: return "Steady";
    case FlowCharacterKind::Shrinking: return "Shrinking";
    case FlowCharacterKind::Mixed: return "Mixed";
  }
  return "unknown";
}

Json signature_json(const SignatureClass& s) {
  Json o = Json::object();
  o.set("kind", Json::str(signature_name(s.kind)));
  o.set("min_eigenvalue", Json::num(s.min_eigenvalue));
  o.set("max_eigenvalue", Json::num(s.max_eigenvalue));
  return o;
}

Json base_report(const RunConfig& c) {
  Json r = Json::object();
  r.set("tool", Json::str(kToolName));
  r.set("version", Json::str(kToolVersion));
  r.set("command", Json::str(c.command));
  r.set("config", Json::str(render_config(c)));
  return r;
}

// ---- sample batteries ------------------------------------------------------

Point sample_point(const RunConfig& c, double a, double b) {
  if (c.flow_kind == "poincare" && c.dim > 2) {
    Point p(c.point);
    p[p.dim() - 2] = a;
    p[p.dim() - 1] = b;
    return p;
  }
  return Point{a, b};
}

std::vector<Point> default_points(const RunConfig& c) {
  if (c.flow_kind == "poincare") {
    std::vector<Point> out;
    for (double y : {0.5, 1.0, 2.0}) {
      Point p(c.point);
      p[p.dim() - 1] = y;
      out.push_back(std::move(p));
    }
    return out;
  }
  const bool conf = c.flow_kind == "conformal" || c.flow_kind == "cone";
  if (c.flow_kind == "warped" || c.flow_kind == "warped-general" ||
      (conf && c.base == "round"))
    return {Point{0.4, 0.3}, Point{1.0, 2.0}, Point{2.2, 5.0}};
  if (conf && c.base == "hyperbolic")
    return {Point{0.3, 0.4}, Point{-0.6, 0.7}, Point{1.2, 1.5}};
  return {Point{0.3, 0.4}, Point{-0.5, 0.2}, Point{0.1, -0.7}};
}

std::vector<double> default_times(const RunConfig& c) {
  if (c.flow_kind == "convex") return {0.1, 0.5, 0.9};
  if (c.flow_kind == "cone" || c.potential == "power") return {0.25, 0.5, 1.0};
  return {0.0, 0.5, 1.0};
}

std::vector<FlowSample> classify_samples(const RunConfig& c) {
  std::vector<FlowSample> out;
  if (!c.probes.empty()) {
    for (const auto& pr : c.probes)
      out.emplace_back(pr[0], sample_point(c, pr[1], pr[2]));
    return out;
  }
  for (double t : default_times(c))
    for (const Point& p : default_points(c)) out.emplace_back(t, p);
  return out;
}

std::vector<std::pair<double, Point>> verify_samples(const RunConfig& c) {
  std::vector<std::pair<double, Point>> out;
  if (!c.probes.empty()) {
    for (const auto& pr : c.probes)
      out.emplace_back(pr[0], sample_point(c, pr[1], pr[2]));
    return out;
  }
  for (const Point& p : default_points(c)) out.emplace_back(c.t, p);
  return out;
}

// ---- commands --------------------------------------------------------------

RunResult run_curvature(const RunConfig& c) {
  const FlowKind kind = kind_from(c);
  const MetricField g = make_flow(kind, false);
  const Point p(c.point);
  const DiffSpec spec = spec_from(c);
  const CurvatureBundle bundle = curvature(g, c.t, p, spec);

  Json report = base_report(c);
  report.set("t", Json::num(c.t));
  report.set("point", point_json(p));
  report.set("metric", sym_json(g.eval(c.t, p)));
  Json engine = Json::object();
  engine.set("ricci", sym_json(bundle.ricci));
  engine.set("scalar", Json::num(bundle.scalar));
  if (bundle.gauss) engine.set("gauss", Json::num(*bundle.gauss));
  report.set("engine", std::move(engine));
  if (const auto closed = closed_form_ric_scalar(kind, c.t, p)) {
    Json cf = Json::object();
    cf.set("ricci", sym_json(closed->first));
    cf.set("scalar", Json::num(closed->second));
    report.set("closed_form", std::move(cf));
    report.set("ricci_gap", Json::num((bundle.ricci - closed->first).sup_norm()));
    report.set("scalar_gap", Json::num(std::abs(bundle.scalar - closed->second)));
  } else {
    report.set("closed_form", Json::null());
  }
  report.set("verdict", Json::str("pass"));
  RunResult out;
  out.report = std::move(report);
  return out;
}

RunResult run_ry_eval(const RunConfig& c) {
  const FlowKind kind = kind_from(c);
  const RYParams params = params_from(c);
  const DiffSpec spec = spec_from(c);
  const Point p(c.point);
  const MetricField g = make_flow(kind, false);
  const SymTensor2 engine = ry_eval(g, c.t, p, params, spec);

  Json report = base_report(c);
  report.set("t", Json::num(c.t));
  report.set("point", point_json(p));
  report.set("params", params_json(params));
  report.set("engine_map", sym_json(engine));
  report.set("engine_signature", signature_json(classify_signature(engine, c.tol)));
  try {
    const SymTensor2 tab = closed_form_ry(kind, c.t, p, params);
    report.set("closed_form_map", sym_json(tab));
    report.set("closed_form_signature",
               signature_json(classify_signature(tab, c.tol)));
    report.set("sup_gap", Json::num((engine - tab).sup_norm()));
  } catch (const PreconditionError&) {
    report.set("closed_form_map", Json::null());
  }
  const MetricField fast = make_flow(kind, true);
  report.set("volume_rate",
             Json::num(volume_variation_rate(fast, c.t, p, params, spec)));
  report.set("steady_residual",
             Json::num(steady_residual(fast, c.t, p, params, spec)));
  report.set("verdict", Json::str("pass"));
  RunResult out;
  out.report = std::move(report);
  return out;
}

RunResult run_classify(const RunConfig& c) {
  const FlowKind kind = kind_from(c);
  const RYParams params = params_from(c);
  const DiffSpec spec = spec_from(c);
  const MetricField g = make_flow(kind, true);
  const auto samples = classify_samples(c);
  const FlowCharacter ch = classify_character(g, params, samples, spec, c.tol);

  Json report = base_report(c);
  report.set("params", params_json(params));
  Json rows = Json::array();
  for (const auto& [t, p] : samples) {
    Json o = Json::object();
    o.set("t", Json::num(t));
    o.set("point", point_json(p));
    o.set("rate", Json::num(volume_variation_rate(g, t, p, params, spec)));
    rows.push(std::move(o));
  }
  report.set("samples", std::move(rows));
  Json cj = Json::object();
  cj.set("kind", Json::str(character_name(ch.kind)));
  cj.set("uniform", Json::boolean(ch.uniform));
  cj.set("min_rate", Json::num(ch.min_rate));
  cj.set("max_rate", Json::num(ch.max_rate));
  report.set("character", std::move(cj));
  report.set("discrepancies", discrepancy_json(build_discrepancy_records()));
  report.set("verdict", Json::str("pass"));
  RunResult out;
  out.report = std::move(report);
  return out;
}

const char* identity_tag(const std::string& id) {
  if (id == "connection-variation") return "1.23";
  if (id == "scalar-variation") return "1.24";
  if (id == "gauss-variation") return "1.25";
  if (id == "volume-form-variation") return "1.26";
  if (id == "constant-volume-scalar-variation") return "1.27";
  return "";
}

RunResult run_verify(const RunConfig& c) {
  const FlowKind kind = kind_from(c);
  const RYParams params = params_from(c);
  const DiffSpec spec = spec_from(c);
  const MetricField g = make_flow(kind, true);
  const std::vector<double> ladder{4.0 * c.step, 2.0 * c.step, c.step};

  Json records = Json::array();
  bool all_pass = true;
  const auto add = [&](const IdentityResidual& r, double t, const Point& p) {
    const bool pass = r.flow_verified && r.residual <= kIdentityResidualTol &&
                      r.observed_order >= kIdentityOrderMin;
    all_pass = all_pass && pass;
    Json o = Json::object();
    o.set("id", Json::str(r.id));
    o.set("equation", Json::str(identity_tag(r.id)));
    o.set("provenance", Json::str("engine"));
    o.set("t", Json::num(t));
    o.set("point", point_json(p));
    o.set("lhs_norm", Json::num(r.lhs_norm));
    o.set("rhs_norm", Json::num(r.rhs_norm));
    o.set("residual", Json::num(r.residual));
    o.set("flow_verified", Json::boolean(r.flow_verified));
    o.set("observed_order", Json::num(r.observed_order));
    Json lad = Json::array();
    for (const auto& [h, res] : r.ladder) {
      Json pair = Json::array();
      pair.push(Json::num(h));
      pair.push(Json::num(res));
      lad.push(std::move(pair));
    }
    o.set("ladder", std::move(lad));
    o.set("pass", Json::boolean(pass));
    records.push(std::move(o));
  };

  for (const auto& [t, p] : verify_samples(c)) {
    add(with_refinement(
            [&](const DiffSpec& s) {
              return christoffel_variation_residual(g, t, p, params, s);
            },
            ladder, spec),
        t, p);
    add(with_refinement(
            [&](const DiffSpec& s) {
              return scalar_variation_residual(g, t, p, params, s);
            },
            ladder, spec),
        t, p);
    if (g.dim == 2)
      add(with_refinement(
              [&](const DiffSpec& s) {
                return gauss_variation_residual(g, t, p, params, s);
              },
              ladder, spec),
          t, p);
    add(with_refinement(
            [&](const DiffSpec& s) {
              return volume_form_variation_residual(g, t, p, params, s);
            },
            ladder, spec),
        t, p);
    try {
      add(with_refinement(
              [&](const DiffSpec& s) {
                return constant_volume_scalar_residual(g, t, p, params, s);
              },
              ladder, spec),
          t, p);
    } catch (const PreconditionError&) {
      // not in the volume-preserving regime; nothing to record
    }
  }

  Json report = base_report(c);
  report.set("params", params_json(params));
  report.set("residual_tolerance", Json::num(kIdentityResidualTol));
  report.set("order_minimum", Json::num(kIdentityOrderMin));
  report.set("identities", std::move(records));
  report.set("discrepancies", discrepancy_json(build_discrepancy_records()));
  report.set("verdict", Json::str(all_pass ? "pass" : "fail"));
  RunResult out;
  out.exit_code = all_pass ? 0 : 1;
  out.report = std::move(report);
  return out;
}

// ---- flow-run --------------------------------------------------------------

double plane_r2(Chart chart, double a, double b) {
  if (chart == Chart::ParabolicUV) {
    const double s = 0.5 * (a * a + b * b);
    return s * s;
  }
  return a * a + b * b;
}

ConformalGridState initial_state(const RunConfig& c) {
  ConformalGridState s;
  s.chart = c.chart == "parabolic" ? Chart::ParabolicUV : Chart::Cartesian;
  s.nx = c.nx;
  s.ny = c.ny;
  s.d1 = c.d1;
  s.d2 = c.d2;
  s.o1 = c.o1;
  s.o2 = c.o2;
  s.t = c.t;
  s.h.assign(static_cast<std::size_t>(c.nx) * c.ny, 0.0);
  const double rate4 = 4.0 * params_from(c).sum();
  const Chart chart = s.chart;
  if (c.bc == "periodic")
    s.bc = PeriodicBoundary{};
  else
    s.bc = DirichletBoundary{[rate4, chart](double t, double a, double b) {
      return -std::log(std::exp(rate4 * t) + plane_r2(chart, a, b));
    }};
  for (int j = 0; j < c.ny; ++j)
    for (int i = 0; i < c.nx; ++i) {
      const double a = s.coord1(i), b = s.coord2(j);
      if (c.initial == "cigar")
        s.at(i, j) = -std::log(std::exp(rate4 * s.t) + plane_r2(chart, a, b));
      else if (c.initial == "sine")
        s.at(i, j) = c.amp * (std::sin(a) + 0.8 * std::cos(b));
      else
        s.at(i, j) = c.amp;
    }
  return s;
}

Scheme scheme_from(const RunConfig& c) {
  if (c.scheme == "euler") return Scheme::ExplicitEuler;
  if (c.scheme == "semi-implicit") return Scheme::SemiImplicit;
  return Scheme::RK4;
}

RunResult run_flow_cmd(const RunConfig& c) {
  const RYParams params = params_from(c);
  const ConformalGridState init = initial_state(c);
  SolverConfig sc;
  sc.params = params;
  sc.dt = c.dt;
  sc.steps = c.steps;
  sc.scheme = scheme_from(c);
  sc.cfl_guard = c.cfl_guard;
  sc.snapshot_stride = c.snapshot_stride;
  std::vector<ProbeRequest> requests;
  for (const auto& pr : c.probes) requests.push_back({pr[0], pr[1], pr[2]});

  Json report = base_report(c);
  report.set("params", params_json(params));
  report.set("chart", Json::str(chart_name(init.chart)));
  report.set("cfl_limit", Json::num(cfl_limit(init, params)));

  RunResult out;
  FlowTrajectory traj;
  try {
    traj = run_flow(init, sc, requests);
  } catch (const CflError& e) {
    report.set("verdict", Json::str("refused"));
    report.set("reason", Json::str(e.what()));
    report.set("suggested_dt", Json::num(e.suggested_dt));
    out.exit_code = 2;
    out.report = std::move(report);
    return out;
  }

  const ConformalGridState& last = traj.snapshots.back();
  const auto [mn, mx] = std::minmax_element(last.h.begin(), last.h.end());
  const bool completed = traj.status == StopReason::Completed;
  report.set("status", Json::str(completed ? "completed" : "blow-up"));
  report.set("steps_done", Json::integer(traj.steps_done));
  report.set("last_t", Json::num(traj.last_t));
  report.set("snapshot_count",
             Json::integer(static_cast<long long>(traj.snapshots.size())));
  report.set("h_min", Json::num(*mn));
  report.set("h_max", Json::num(*mx));
  Json probes = Json::array();
  for (const auto& r : traj.probes) {
    Json o = Json::object();
    o.set("t", Json::num(r.t));
    o.set("coord1", Json::num(r.a));
    o.set("coord2", Json::num(r.b));
    o.set("h", Json::num(r.h));
    o.set("gauss", Json::num(r.gauss));
    o.set("vol_rate", Json::num(r.vol_rate));
    probes.push(std::move(o));
  }
  report.set("probes", std::move(probes));
  report.set("verdict", Json::str(completed ? "pass" : "abort"));
  out.exit_code = completed ? 0 : 3;
  out.report = std::move(report);
  out.artifacts.emplace_back("grid_final.csv", grid_csv(last));
  out.artifacts.emplace_back("probes.csv", probe_csv(traj.probes));
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshots/snapshot_%04zu.csv", k);
    out.artifacts.emplace_back(name, grid_csv(traj.snapshots[k]));
  }
  return out;
}

// ---- residuals -------------------------------------------------------------

struct ResidualCheck {
  const char* equation;
  const char* description;
  double expected;
  double actual;
  double tol;
};

ScalarTimeField plane_square_field() {
  ScalarTimeField h;
  h.value = [](double, double a, double b) { return a * a + b * b; };
  h.d1 = [](double, double a, double) { return 2.0 * a; };
  h.d2 = [](double, double, double b) { return 2.0 * b; };
  h.d11 = [](double, double, double) { return 2.0; };
  h.d22 = [](double, double, double) { return 2.0; };
  h.d12 = [](double, double, double) { return 0.0; };
  h.dt = [](double, double, double) { return 0.0; };
  return h;
}

ScalarTimeField first_coordinate_field() {
  ScalarTimeField h;
  h.value = [](double, double a, double) { return a; };
  h.d1 = [](double, double, double) { return 1.0; };
  h.d2 = [](double, double, double) { return 0.0; };
  h.d11 = h.d2;
  h.d22 = h.d2;
  h.d12 = h.d2;
  h.dt = h.d2;
  return h;
}

ScalarTimeField exact_cigar_plane_field(double sum) {
  const double r4 = 4.0 * sum;
  ScalarTimeField h;
  h.value = [r4](double t, double x, double y) {
    return -std::log(std::exp(r4 * t) + x * x + y * y);
  };
  h.d1 = [r4](double t, double x, double y) {
    return -2.0 * x / (std::exp(r4 * t) + x * x + y * y);
  };
  h.d2 = [r4](double t, double x, double y) {
    return -2.0 * y / (std::exp(r4 * t) + x * x + y * y);
  };
  h.d11 = [r4](double t, double x, double y) {
    const double u = std::exp(r4 * t) + x * x + y * y;
    return -2.0 / u + 4.0 * x * x / (u * u);
  };
  h.d22 = [r4](double t, double x, double y) {
    const double u = std::exp(r4 * t) + x * x + y * y;
    return -2.0 / u + 4.0 * y * y / (u * u);
  };
  h.d12 = [r4](double t, double x, double y) {
    const double u = std::exp(r4 * t) + x * x + y * y;
    return 4.0 * x * y / (u * u);
  };
  h.dt = [r4](double t, double x, double y) {
    const double f = std::exp(r4 * t);
    return -r4 * f / (f + x * x + y * y);
  };
  return h;
}

std::vector<ResidualCheck> residual_battery(const DiffSpec& spec,
                                            const RYParams& params) {
  SepFunction sq;
  sq.value = [](double, double s) { return s * s; };
  sq.ds = [](double, double s) { return 2.0 * s; };
  sq.dss = [](double, double) { return 2.0; };
  sq.dt = [](double, double) { return 0.0; };

  SepFunction sq_drift = sq;
  sq_drift.value = [](double t, double s) { return s * s + t; };
  sq_drift.dt = [](double, double) { return 1.0; };

  SepFunction unit;
  unit.value = [](double, double) { return 1.0; };
  unit.ds = [](double, double) { return 0.0; };
  unit.dss = unit.ds;
  unit.dt = unit.ds;

  TravelingWave wave_sq;
  wave_sq.value = [](double, double w) { return w * w; };
  wave_sq.dw = [](double, double w) { return 2.0 * w; };
  wave_sq.dww = [](double, double) { return 2.0; };
  wave_sq.dt = [](double, double) { return 0.0; };

  TravelingWave wave_lin;
  wave_lin.value = [](double, double w) { return w; };
  wave_lin.dw = [](double, double) { return 1.0; };
  wave_lin.dww = [](double, double) { return 0.0; };
  wave_lin.dt = wave_lin.dww;

  const ScalarTimeField rsq = plane_square_field();
  const ScalarTimeField coord = first_coordinate_field();
  const ScalarTimeField cigar =
      compose_with_chart(exact_cigar_plane_field(params.sum()), Chart::ParabolicUV);

  std::vector<ResidualCheck> rows;
  rows.push_back({"3.3", "planar product separation, f=x^2 g=y^2 at (1,2)", -10.0,
                  separable_residual(SepChart::Cartesian, SepMode::Product, sq, sq,
                                     0.0, 1.0, 2.0, spec),
                  1e-10});
  rows.push_back({"3.4", "planar additive separation, f=x^2 g=y^2 at (1,2)", -4.0,
                  separable_residual(SepChart::Cartesian, SepMode::Sum, sq, sq,
                                     0.0, 1.0, 2.0, spec),
                  1e-10});
  rows.push_back({"3.5", "polar flow equation, h=u^2+v^2 at (x,y)=(2,0.7)", 10.0,
                  residual_polar(rsq, 0.0, 2.0, 0.7, spec), 1e-10});
  rows.push_back({"3.5",
                  "polar flow equation with the chain-rule term restored, same field",
                  2.0, residual_polar_full(rsq, 0.0, 2.0, 0.7, spec), 1e-10});
  rows.push_back({"3.6", "polar traveling ansatz, phi=w^2 slope 3 at (2,0)", 74.0,
                  solitonic_residual(SolitonChart::Polar, wave_sq, 3.0, 0.0, 2.0,
                                     0.0, spec),
                  1e-10});
  rows.push_back({"3.7", "polar product separation, f=u^2 g=v^2 at (2,0)", 32.0,
                  separable_residual(SepChart::Polar, SepMode::Product, sq, sq,
                                     0.0, 2.0, 0.0, spec),
                  1e-10});
  rows.push_back({"3.8", "polar additive separation, f=u^2+t g=v^2 at (2,0), t=0",
                  9.0,
                  separable_residual(SepChart::Polar, SepMode::Sum, sq_drift, sq,
                                     0.0, 2.0, 0.0, spec),
                  1e-10});
  rows.push_back({"3.9", "parabolic flow equation, h = sum of squares at (3,4)",
                  40.0, residual_parabolic(rsq, 0.0, 3.0, 4.0, spec), 1e-10});
  rows.push_back({"3.9",
                  "parabolic-plane flow residual on the exact self-similar "
                  "solution at t=0.3, (u,v)=(1.2,0.5)",
                  0.0, residual_liouville(cigar, 0.3, 1.2, 0.5, params, spec),
                  1e-8});
  rows.push_back({"3.10", "parabolic traveling ansatz, phi=w^2 slope 1 at (3,4)",
                  40.0,
                  solitonic_residual(SolitonChart::Parabolic, wave_sq, 1.0, 0.0,
                                     3.0, 4.0, spec),
                  1e-10});
  rows.push_back({"3.11", "parabolic product separation, both factors squares at (3,4)",
                  500.0,
                  separable_residual(SepChart::Parabolic, SepMode::Product, sq, sq,
                                     0.0, 3.0, 4.0, spec),
                  1e-10});
  rows.push_back({"3.12", "parabolic additive separation, both factors squares at (3,4)",
                  40.0,
                  separable_residual(SepChart::Parabolic, SepMode::Sum, sq, sq,
                                     0.0, 3.0, 4.0, spec),
                  1e-10});
  rows.push_back({"3.13",
                  "elliptic flow equation, h = first coordinate at "
                  "(u,v)=(-1,0.5), scale 2",
                  -2.125, residual_elliptic(coord, 0.0, -1.0, 0.5, 2.0, spec),
                  1e-10});
  rows.push_back({"3.15",
                  "elliptic traveling ansatz, phi=w slope 0 at (u,v)=(-1,0.5), "
                  "scale 2",
                  -2.125,
                  solitonic_residual(SolitonChart::Elliptic, wave_lin, 0.0, 0.0,
                                     -1.0, 0.5, spec, 2.0),
                  1e-10});
  rows.push_back({"3.16",
                  "elliptic product separation, f=x^2 g=1 at (u,v)=(-1,0.5), "
                  "scale 2",
                  -10.0,
                  separable_residual(SepChart::Elliptic, SepMode::Product, sq,
                                     unit, 0.0, -1.0, 0.5, spec, 2.0),
                  1e-10});
  rows.push_back({"3.17",
                  "elliptic additive separation, f=x^2 g=y^2 at (u,v)=(-1,0.5), "
                  "scale 2",
                  -19.0,
                  separable_residual(SepChart::Elliptic, SepMode::Sum, sq, sq,
                                     0.0, -1.0, 0.5, spec, 2.0),
                  1e-10});
  return rows;
}

RunResult run_residuals(const RunConfig& c) {
  const DiffSpec spec = spec_from(c);
  const RYParams params = params_from(c);
  const auto rows = residual_battery(spec, params);

  bool all_pass = true;
  Json checks = Json::array();
  for (const auto& r : rows) {
    const double gap = std::abs(r.actual - r.expected);
    const bool pass = gap <= r.tol;
    all_pass = all_pass && pass;
    Json o = Json::object();
    o.set("equation", Json::str(r.equation));
    o.set("provenance", Json::str("printed-form"));
    o.set("description", Json::str(r.description));
    o.set("expected", Json::num(r.expected));
    o.set("actual", Json::num(r.actual));
    o.set("abs_gap", Json::num(gap));
    o.set("tolerance", Json::num(r.tol));
    o.set("pass", Json::boolean(pass));
    checks.push(std::move(o));
  }

  Json report = base_report(c);
  report.set("checks", std::move(checks));
  report.set("discrepancies", discrepancy_json(build_discrepancy_records()));
  report.set("verdict", Json::str(all_pass ? "pass" : "fail"));
  RunResult out;
  out.exit_code = all_pass ? 0 : 1;
  out.report = std::move(report);
  return out;
}

}  // namespace

RunResult execute(const RunConfig& config) {
  validate_config(config);
  RunResult out;
  if (config.command == "curvature") out = run_curvature(config);
  else if (config.command == "ry-eval") out = run_ry_eval(config);
  else if (config.command == "classify") out = run_classify(config);
  else if (config.command == "verify") out = run_verify(config);
  else if (config.command == "flow-run") out = run_flow_cmd(config);
  else out = run_residuals(config);
  out.artifacts.insert(out.artifacts.begin(),
                       {"report.json", out.report.dump()});
  return out;
}

}  // namespace ryflow
