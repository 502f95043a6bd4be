#pragma once

#include "ryflow/flows.hpp"
#include "ryflow/tensor.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace ryflow {

enum class Chart { Cartesian, Polar, ParabolicUV, EllipticUV };

struct PeriodicBoundary {};

/// Prescribed boundary values as a function of (t, coord1, coord2).
struct DirichletBoundary {
  std::function<double(double, double, double)> value;
};

using BoundaryCondition = std::variant<PeriodicBoundary, DirichletBoundary>;

/// Uniform rectangular grid carrying the conformal exponent h (g = e^h * I in
/// the plane); values stored row-major, index j*nx + i with i along coord1.
struct ConformalGridState {
  Chart chart = Chart::Cartesian;
  int nx = 0, ny = 0;
  double d1 = 0.0, d2 = 0.0;
  double o1 = 0.0, o2 = 0.0;
  double t = 0.0;
  std::vector<double> h;
  BoundaryCondition bc;

  double coord1(int i) const { return o1 + i * d1; }
  double coord2(int j) const { return o2 + j * d2; }
  double at(int i, int j) const { return h[static_cast<std::size_t>(j) * nx + i]; }
  double& at(int i, int j) { return h[static_cast<std::size_t>(j) * nx + i]; }
  bool periodic() const { return std::holds_alternative<PeriodicBoundary>(bc); }
};

enum class Scheme { ExplicitEuler, RK4, SemiImplicit };

struct SolverConfig {
  RYParams params;
  double dt = 1e-4;
  long steps = 0;
  Scheme scheme = Scheme::RK4;
  bool cfl_guard = true;
  long snapshot_stride = 1;
};

/// Refusal raised by the diffusive stability guard; carries a usable dt.
struct CflError : PreconditionError {
  explicit CflError(const std::string& msg, double suggestion)
      : PreconditionError(msg), suggested_dt(suggestion) {}
  double suggested_dt;
};

/// Raised when the evolved field leaves the representable range.
struct BlowUpError : std::runtime_error {
  explicit BlowUpError(const std::string& msg, double t)
      : std::runtime_error(msg), last_t(t) {}
  double last_t;
};

/// Largest explicit step the guard accepts for this state.
double cfl_limit(const ConformalGridState& s, const RYParams& params);

/// One step of (e^h)_t = (alpha+beta) * laplacian(h) on a Cartesian grid.
ConformalGridState step_cartesian(const ConformalGridState& s,
                                  const SolverConfig& config);

/// Same flow written in the parabolic (u,v) chart, where the plane equation
/// picks up the Liouville factor: h_t = (alpha+beta) e^-h (u^2+v^2)^-1 lap(h).
ConformalGridState step_liouville(const ConformalGridState& s,
                                  const SolverConfig& config);

enum class StopReason { Completed, BlowUp };

struct ProbeRequest {
  double t = 0.0;
  double a = 0.0, b = 0.0;
};

/// Probe values reported at the snapshot closest to the requested time.
struct ProbeRow {
  double t = 0.0;
  double a = 0.0, b = 0.0;
  double h = 0.0;
  double gauss = 0.0;
  double vol_rate = 0.0;
};

struct FlowTrajectory {
  std::vector<ConformalGridState> snapshots;
  StopReason status = StopReason::Completed;
  double last_t = 0.0;
  long steps_done = 0;
  std::vector<ProbeRow> probes;
};

/// Marches the flow, collecting snapshots every snapshot_stride steps plus the
/// final state; a blow-up stops the run and flags the trajectory instead of
/// propagating.
FlowTrajectory run_flow(const ConformalGridState& initial,
                        const SolverConfig& config,
                        const std::vector<ProbeRequest>& probes = {});

/// Discrete Gaussian curvature K = -e^-h * lap5(h) / 2 node-wise, with the
/// extra 1/(u^2+v^2) conformal factor on the parabolic chart; Dirichlet
/// boundary rows copy their nearest interior value. Conformal charts only.
std::vector<double> discrete_gauss(const ConformalGridState& s);

/// Max over interior nodes of |K(h) - K(2h)|/3, a spatial truncation estimate
/// for the discrete curvature.
double gauss_truncation_estimate(const ConformalGridState& s);

/// Tensor-product Lagrange interpolation of the stored field; order is the
/// number of points per axis (2 = linear, 4 = cubic, 6 = quintic).
double interpolate(const ConformalGridState& s, double a, double b, int order);

}  // namespace ryflow
