#pragma once

#include "ryflow/flows.hpp"
#include "ryflow/tensor.hpp"

#include <utility>
#include <vector>

namespace ryflow {

/// Pointwise evaluation of dg/dt + 2*alpha*Ric + beta*R*g.
///
/// The time derivative uses the attached analytic form when present and
/// falls back to 4th-order central differencing with dt = 1e-4; curvature
/// comes from the attached oracle or from the finite-difference engine.
SymTensor2 ry_eval(const MetricField& g, double t, const Point& p,
                   const RYParams& params, const DiffSpec& spec);

/// Time-dependent 2D conformal factor lam(t,u,v) with optional analytic
/// time derivative and Gaussian curvature.
struct ConformalFactorField {
  std::function<double(double t, double u, double v)> value;
  std::function<double(double, double, double)> dt;
  std::function<double(double, double, double)> gauss;
};

/// 2D shortcut for g = lam * I: the map collapses to
/// (d lam/dt + 2 (alpha+beta) K lam) * I.
SymTensor2 ry_eval_2d_conformal(const ConformalFactorField& lam, double t,
                                const Point& p, const RYParams& params,
                                const DiffSpec& spec);

enum class SignatureKind { Riemannian, SemiRiemannian, Degenerate };

struct SignatureClass {
  SignatureKind kind = SignatureKind::Degenerate;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Eigenvalue-sign classification with a spectral-radius-relative zero band
/// |eig| <= tol * (1 + max |eig|).
SignatureClass classify_signature(const SymTensor2& T, double tol = 1e-9);

/// Trace of the Ricci-Yamabe map against the metric, g^ij RY_ij; the
/// pointwise volume variation rate.
double volume_variation_rate(const MetricField& g, double t, const Point& p,
                             const RYParams& params, const DiffSpec& spec);

enum class FlowCharacterKind { Expanding, Steady, Shrinking, Mixed };

struct FlowCharacter {
  FlowCharacterKind kind = FlowCharacterKind::Mixed;
  bool uniform = false;  // rate spatially constant at every sampled time
  double min_rate = 0.0;
  double max_rate = 0.0;
};

using FlowSample = std::pair<double, Point>;

/// Signs the volume variation rate over a sample set; |rate| <= tol counts as
/// steady, and `uniform` requires the spatial spread at each sampled time to
/// stay below 1e-6 * (1 + |mean rate|).
FlowCharacter classify_character(const MetricField& g, const RYParams& params,
                                 const std::vector<FlowSample>& samples,
                                 const DiffSpec& spec, double tol = 1e-9);

/// Steadiness functional (2*alpha + n*beta) R + Tr_g(dg/dt); zero exactly on
/// steady flows (it equals the volume variation rate identically).
double steady_residual(const MetricField& g, double t, const Point& p,
                       const RYParams& params, const DiffSpec& spec);

namespace detail {
/// dg/dt via the attached oracle or 4th-order central differencing.
SymTensor2 metric_time_derivative(const MetricField& g, double t, const Point& p);
}

}  // namespace ryflow
