#pragma once

#include "ryflow/fd.hpp"
#include "ryflow/geometry.hpp"
#include "ryflow/grid.hpp"
#include "ryflow/ry_map.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ryflow {

/// Outcome of checking one evolution identity at a point: both sides are
/// evaluated by finite differencing the metric in space and time, so the
/// residual shrinks with the step at the scheme order when the identity holds.
struct IdentityResidual {
  std::string id;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double residual = 0.0;
  bool flow_verified = false;
  std::vector<std::pair<double, double>> ladder;  // (step, residual)
  double observed_order = 0.0;
};

/// Residual of d/dt Gamma^k_ij against its curvature expression.
IdentityResidual christoffel_variation_residual(const MetricField& g, double t,
                                                const Point& p,
                                                const RYParams& params,
                                                const DiffSpec& spec);

/// Residual of d/dt R against the reaction-diffusion expression in R.
IdentityResidual scalar_variation_residual(const MetricField& g, double t,
                                           const Point& p, const RYParams& params,
                                           const DiffSpec& spec);

/// Surface case: residual of d/dt K against (alpha+beta)(lap K + 2K^2).
IdentityResidual gauss_variation_residual(const MetricField& g, double t,
                                          const Point& p, const RYParams& params,
                                          const DiffSpec& spec);

/// Residual of d/dt sqrt(det g) against -(alpha + n beta/2) R sqrt(det g).
IdentityResidual volume_form_variation_residual(const MetricField& g, double t,
                                                const Point& p,
                                                const RYParams& params,
                                                const DiffSpec& spec);

/// Volume-normalized case 2 alpha + n beta = 0: residual of (1/alpha) dR/dt
/// against ((2-n)/n) lap R + 2|Ric|^2 - (2/n) R^2.
IdentityResidual constant_volume_scalar_residual(const MetricField& g, double t,
                                                 const Point& p,
                                                 const RYParams& params,
                                                 const DiffSpec& spec);

/// Reruns an identity on a sequence of coarsening steps and reports the
/// observed convergence order alongside the finest-step residual.
template <typename Op>
IdentityResidual with_refinement(Op&& op, const std::vector<double>& steps,
                                 DiffSpec spec) {
  if (steps.size() < 2)
    throw PreconditionError("refinement needs at least two step sizes");
  IdentityResidual finest;
  std::vector<double> errs;
  std::vector<std::pair<double, double>> ladder;
  for (double h : steps) {
    spec.step = h;
    IdentityResidual r = op(spec);
    ladder.emplace_back(h, r.residual);
    errs.push_back(r.residual);
    finest = std::move(r);
  }
  finest.ladder = std::move(ladder);
  finest.observed_order = fd::observed_order(steps, errs);
  return finest;
}

/// Covariant-constancy defect of the Ricci tensor against a candidate
/// recurrence one-form eta: sup |grad_l Ric_ij - eta_l Ric_ij|.
struct RecurrenceForm {
  enum class Source { Derived, Supplied };
  Source source = Source::Derived;
  std::function<std::vector<double>(double, const Point&)> eta;
};

/// Builds eta = d(log K) for a surface with positive curvature.
RecurrenceForm recurrent_eta(const MetricField& g, const DiffSpec& spec);

double recurrence_residual(const MetricField& g, const RecurrenceForm& form,
                           double t, const Point& p, const DiffSpec& spec);

/// Connection and scalar variation identities rewritten through eta; throws
/// when the recurrence defect is too large for the rewrite to apply.
std::pair<IdentityResidual, IdentityResidual> recurrent_variation_residuals(
    const MetricField& g, const RecurrenceForm& form, double t, const Point& p,
    const RYParams& params, const DiffSpec& spec);

struct BoundCheckRecord {
  double t = 0.0;
  double min_gauss = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct BoundCheckReport {
  std::vector<BoundCheckRecord> records;
  bool all_pass = true;
};

/// Checks min K(t) >= -1/(2(alpha+beta)t) on every positive-time snapshot,
/// with slack tol_factor times the spatial truncation estimate.
BoundCheckReport curvature_lower_bound_check(const FlowTrajectory& traj,
                                             const RYParams& params,
                                             double tol_factor = 10.0);

}  // namespace ryflow
