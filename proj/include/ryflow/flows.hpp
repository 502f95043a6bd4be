#pragma once

#include "ryflow/tensor.hpp"

#include <array>
#include <functional>
#include <optional>
#include <variant>

namespace ryflow {

/// Ricci-Yamabe coefficient pair; the map is dg/dt + 2*alpha*Ric + beta*R*g.
struct RYParams {
  double alpha = 1.0;
  double beta = 0.0;
  double sum() const { return alpha + beta; }
  /// Coefficient (2*alpha + n*beta) that drives volume and scalar identities.
  double mix(int n) const { return 2.0 * alpha + n * beta; }
};

/// Smooth positive time profile f(t) with derivative and optional closed-form
/// antiderivatives of 1/f and 1/sqrt(f) (used by accumulated volume formulas);
/// quadrature fills in when they are absent.
struct TimePotential {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> inv_antideriv;      // F(t) = int_0^t ds/f(s)
  std::function<double(double)> invsqrt_antideriv;  // int_0^t ds/sqrt(f(s))
};

TimePotential exp_potential(double c);    // e^(c t)
TimePotential unit_potential();           // constant 1
TimePotential power_potential(double m);  // t^m on t > 0, antiderivatives from t=1
TimePotential linear_potential(double a, double b);  // a + b t

/// Solution of y'' + k y = 0 with y(0)=0, y'(0)=1 (sin-like for k>0,
/// identity for k=0, sinh-like for k<0); series form near k*u^2 ~ 0.
struct SnK {
  double k = 0.0;
  double value(double u) const;
  double deriv(double u) const;
};

/// Static 2D scalar profile with optional analytic gradient/Hessian
/// (Hessian packed as {d11, d12, d22}).
struct ScalarProfile2 {
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> grad;
  std::function<std::array<double, 3>(double, double)> hess;
};

/// Static 1D warping profile G(u) with two derivatives.
struct ScalarProfile1 {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
};

// ---- flow catalog ---------------------------------------------------------

/// g(t) = f(t) * base, base a fixed metric (time-independent).
struct ConformalFlow {
  TimePotential f;
  MetricField base;
};

/// Conformal flow with f(t) = t on t > 0.
struct ConeFlow {
  MetricField base;
};

/// 2D isothermal interpolation g(t) = ((1-t)E + t) * I on t in [0,1],
/// E a smooth convex-ish profile.
struct ConvexEuclideanFlow {
  ScalarProfile2 E;
};

/// g(t) = (last coordinate)^(-t) * euclidean, on the half-space x_n > 0.
struct PoincareFlow {
  int dim = 2;
};

/// 2D conformal family g(t) = 1/(f(t) + u^2 + v^2) * I.
struct GeneralizedCigarFlow {
  TimePotential f;
};

/// Rotationally symmetric warped product du^2 + f(t) sn_k(u)^2 dv^2.
struct WarpedRotSymFlow {
  TimePotential f;
  double k = 0.0;
};

/// Warped product du^2 + f(t) G(u) dv^2 with a general positive profile G.
struct WarpedGeneralFlow {
  TimePotential f;
  ScalarProfile1 G;
};

using FlowKind =
    std::variant<ConformalFlow, ConeFlow, ConvexEuclideanFlow, PoincareFlow,
                 GeneralizedCigarFlow, WarpedRotSymFlow, WarpedGeneralFlow>;

/// Builds the time-dependent metric with the analytic time derivative
/// attached. When with_curvature_oracle is set, also attaches the closed-form
/// connection/curvature (available for every catalog entry whose base data
/// carries enough derivatives).
MetricField make_flow(const FlowKind& kind, bool with_curvature_oracle = false);

// ---- ready-made base metrics ----------------------------------------------

/// Euclidean metric, curvature oracle attached (everything vanishes).
MetricField flat_metric(int n);

/// g = y^(-2) (dx^2 + dy^2) on y > 0; K = -1, R = -2.
MetricField hyperbolic_half_plane();

/// Static du^2 + sn_k(u)^2 dv^2; constant curvature k (round sphere for k=1).
MetricField constant_curvature_warped(double k);

// ---- closed-form catalog ----------------------------------------------------

/// Closed-form Ricci tensor and scalar curvature of the flow metric at (t,p);
/// available for the conformal and half-space families only.
std::optional<std::pair<SymTensor2, double>> closed_form_ric_scalar(
    const FlowKind& kind, double t, const Point& p);

/// Tabulated closed-form Ricci-Yamabe map at (t, p). Throws PreconditionError
/// when the entry needs base curvature data that was not supplied.
SymTensor2 closed_form_ry(const FlowKind& kind, double t, const Point& p,
                          const RYParams& params);

/// Ricci-Yamabe map of the warped families evaluated directly from their
/// curvature (dg/dt + 2(alpha+beta)K g with K = -(sqrt G)''/sqrt G), kept
/// separate from closed_form_ry because the two disagree; see the discrepancy
/// records.
SymTensor2 warped_ry_direct(const FlowKind& kind, double t, const Point& p,
                            const RYParams& params);

struct VolumeVariation {
  double rate = 0.0;                    // tabulated d/dt of the volume functional
  std::optional<double> accumulated;    // tabulated antiderivative when given
};

/// Tabulated volume-variation data for the catalog entry at (t, p).
VolumeVariation closed_form_volume_variation(const FlowKind& kind, double t,
                                             const Point& p,
                                             const RYParams& params);

/// The potential making the generalized cigar a steady Ricci-Yamabe flow:
/// f(t) = exp(4 (alpha+beta) t).
TimePotential cigar_steady_potential(const RYParams& params);

}  // namespace ryflow
