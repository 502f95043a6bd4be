#pragma once

#include "ryflow/charts.hpp"
#include "ryflow/flows.hpp"
#include "ryflow/grid.hpp"

#include <functional>

namespace ryflow {

/// Time-dependent scalar field of two spatial variables. Exact derivative
/// callbacks are optional; accessors fall back to finite differences on value.
struct ScalarTimeField {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> d1, d2, d11, d22, d12, dt;
};

double field_value(const ScalarTimeField& f, double t, double a, double b);
double field_d1(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);
double field_d2(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);
double field_d11(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);
double field_d22(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);
double field_d12(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);
double field_dt(const ScalarTimeField& f, double t, double a, double b, const DiffSpec& spec);

/// Profile of a traveling-combination ansatz h = phi(t, w).
struct TravelingWave {
  std::function<double(double, double)> value;
  std::function<double(double, double)> dw, dww, dt;
};

/// One factor of a separated ansatz, a function of (t, s).
struct SepFunction {
  std::function<double(double, double)> value;
  std::function<double(double, double)> ds, dss, dt;
};

/// Polar-form flow equation residual in its tabulated form: the second-order
/// coefficient combination minus (e^h)_t, with h a field of (u,v) evaluated
/// at u = x cos y, v = x sin y.
double residual_polar(const ScalarTimeField& h, double t, double x, double y,
                      const DiffSpec& spec);

/// Same equation with the first-order chain-rule term restored, so the
/// spatial side equals the (x,y)-second-derivative sum of the composite
/// h(t, x cos y, x sin y).
double residual_polar_full(const ScalarTimeField& h, double t, double x,
                           double y, const DiffSpec& spec);

/// The restored term -x(h_u cos y + h_v sin y); full = residual_polar + term.
double polar_first_order_term(const ScalarTimeField& h, double t, double x,
                              double y, const DiffSpec& spec);

/// Parabolic-form residual 2 sqrt(xi^2+eta^2)(h_xixi + h_etaeta) - (e^h)_t
/// with h a field of (xi, eta).
double residual_parabolic(const ScalarTimeField& h, double t, double xi,
                          double eta, const DiffSpec& spec);

/// Flow residual in the parabolic (u,v) chart where the plane metric is
/// Liouville: (alpha+beta)(u^2+v^2)^-1 (h_uu+h_vv) - e^h h_t.
double residual_liouville(const ScalarTimeField& h, double t, double u,
                          double v, const RYParams& params,
                          const DiffSpec& spec);

/// Elliptic-form residual (e^h)_t minus the tabulated first- and second-order
/// combination; h is a field of the plane coordinates (x,y), the point is
/// given in chart coordinates (u,v) with scale c.
double residual_elliptic(const ScalarTimeField& h, double t, double u,
                         double v, double c, const DiffSpec& spec);

enum class SolitonChart { Polar, Parabolic, Elliptic };

/// Residual of the tabulated solitonic reduction for h = phi(t, w) with
/// w = first + slope * second (coordinate pairing depends on the chart).
double solitonic_residual(SolitonChart kind, const TravelingWave& phi,
                          double slope, double t, double c1, double c2,
                          const DiffSpec& spec, double scale = 1.0);

enum class SepChart { Cartesian, Polar, Parabolic, Elliptic };
enum class SepMode { Product, Sum };

/// Residual of the tabulated separated reduction (eight equations: four charts
/// times product/sum ansatz), each implemented verbatim.
double separable_residual(SepChart kind, SepMode mode, const SepFunction& f,
                          const SepFunction& g, double t, double c1, double c2,
                          const DiffSpec& spec, double scale = 1.0);

/// Wraps a solver trajectory as a smooth field: tensor-product Lagrange
/// interpolation in space, cubic Lagrange in time with its exact derivative
/// serving as dt.
ScalarTimeField trajectory_field(const FlowTrajectory& traj, int space_order);

/// Precomposes a plane field with a chart map, yielding a field of the chart
/// coordinates.
ScalarTimeField compose_with_chart(const ScalarTimeField& plane_field,
                                   Chart chart, double scale = 1.0);

}  // namespace ryflow
