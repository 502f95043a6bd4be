#include "ryflow/ry_map.hpp"

#include "ryflow/fd.hpp"
#include "ryflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ryflow {

namespace detail {

SymTensor2 metric_time_derivative(const MetricField& g, double t, const Point& p) {
  if (g.exact_dt) return g.exact_dt(t, p);
  const double dt = 1e-4;
  return fd::d1([&](double off) { return detail::metric_checked(g, t + off, p); },
                dt, 4);
}

}  // namespace detail

SymTensor2 ry_eval(const MetricField& g, double t, const Point& p,
                   const RYParams& params, const DiffSpec& spec) {
  SymTensor2 dtg = detail::metric_time_derivative(g, t, p);
  CurvatureBundle cb = curvature(g, t, p, spec);
  SymTensor2 m = detail::metric_checked(g, t, p);
  return dtg + cb.ricci * (2.0 * params.alpha) + m * (params.beta * cb.scalar);
}

SymTensor2 ry_eval_2d_conformal(const ConformalFactorField& lam, double t,
                                const Point& p, const RYParams& params,
                                const DiffSpec& spec) {
  if (p.dim() != 2)
    throw PreconditionError("conformal shortcut is two-dimensional");
  const double u = p[0], v = p[1];
  double l = lam.value(t, u, v);
  if (!(l > 0.0)) throw PositivityError("conformal factor must be positive");
  double dl = lam.dt ? lam.dt(t, u, v)
                     : fd::d1([&](double off) { return lam.value(t + off, u, v); },
                              1e-4, 4);
  double K = lam.gauss
                 ? lam.gauss(t, u, v)
                 : gauss_isothermal([&](double a, double b) { return lam.value(t, a, b); },
                                    u, v, spec);
  return SymTensor2::identity(2) * (dl + 2.0 * params.sum() * K * l);
}

SignatureClass classify_signature(const SymTensor2& T, double tol) {
  std::vector<double> ev = T.eigenvalues();
  if (ev.empty()) throw PreconditionError("cannot classify an empty tensor");
  SignatureClass out;
  out.min_eigenvalue = ev.front();
  out.max_eigenvalue = ev.back();
  double radius = 0.0;
  for (double e : ev) radius = std::max(radius, std::fabs(e));
  const double band = tol * (1.0 + radius);
  bool any_zero = false, all_positive = true;
  for (double e : ev) {
    if (std::fabs(e) <= band) any_zero = true;
    if (!(e > band)) all_positive = false;
  }
  if (any_zero)
    out.kind = SignatureKind::Degenerate;
  else if (all_positive)
    out.kind = SignatureKind::Riemannian;
  else
    out.kind = SignatureKind::SemiRiemannian;
  return out;
}

double volume_variation_rate(const MetricField& g, double t, const Point& p,
                             const RYParams& params, const DiffSpec& spec) {
  SymTensor2 ry = ry_eval(g, t, p, params, spec);
  SymTensor2 inv = detail::metric_checked(g, t, p).inverse();
  return ry.contract(inv);
}

FlowCharacter classify_character(const MetricField& g, const RYParams& params,
                                 const std::vector<FlowSample>& samples,
                                 const DiffSpec& spec, double tol) {
  if (samples.empty())
    throw PreconditionError("character classification needs at least one sample");

  FlowCharacter out;
  out.min_rate = std::numeric_limits<double>::infinity();
  out.max_rate = -std::numeric_limits<double>::infinity();

  // group rates by sampled time to measure spatial spread
  std::map<double, std::vector<double>> by_time;
  for (const auto& [t, p] : samples) {
    double r = volume_variation_rate(g, t, p, params, spec);
    by_time[t].push_back(r);
    out.min_rate = std::min(out.min_rate, r);
    out.max_rate = std::max(out.max_rate, r);
  }

  out.uniform = true;
  for (const auto& [t, rates] : by_time) {
    auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= static_cast<double>(rates.size());
    if (*hi - *lo > 1e-6 * (1.0 + std::fabs(mean))) out.uniform = false;
  }

  const bool all_pos = out.min_rate > tol;
  const bool all_neg = out.max_rate < -tol;
  const bool all_zero =
      std::fabs(out.min_rate) <= tol && std::fabs(out.max_rate) <= tol;
  if (all_zero)
    out.kind = FlowCharacterKind::Steady;
  else if (all_pos)
    out.kind = FlowCharacterKind::Expanding;
  else if (all_neg)
    out.kind = FlowCharacterKind::Shrinking;
  else
    out.kind = FlowCharacterKind::Mixed;
  return out;
}

double steady_residual(const MetricField& g, double t, const Point& p,
                       const RYParams& params, const DiffSpec& spec) {
  SymTensor2 dtg = detail::metric_time_derivative(g, t, p);
  SymTensor2 inv = detail::metric_checked(g, t, p).inverse();
  CurvatureBundle cb = curvature(g, t, p, spec);
  return params.mix(g.dim) * cb.scalar + dtg.contract(inv);
}

}  // namespace ryflow
