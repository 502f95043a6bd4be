#pragma once

#include "ryflow/grid.hpp"

#include <array>

namespace ryflow {

/// Coordinate map between a chart and the plane. Forward sends chart
/// coordinates (a,b) to plane coordinates (x,y); inverse picks the principal
/// branch (u >= 0 parabolic, u < 0 < v < 1 elliptic, theta in (-pi, pi]).
struct ChartMap {
  Chart chart = Chart::Cartesian;
  double elliptic_scale = 1.0;

  std::array<double, 2> forward(double a, double b) const;
  std::array<double, 2> inverse(double x, double y) const;
  /// Row-major d(x,y)/d(a,b).
  std::array<double, 4> jacobian(double a, double b) const;
};

struct GridGeometry {
  int nx = 0, ny = 0;
  double d1 = 0.0, d2 = 0.0;
  double o1 = 0.0, o2 = 0.0;
};

struct TransferResult {
  ConformalGridState state;
  /// Max gap between the used interpolant and one two orders lower.
  double interp_error_estimate = 0.0;
};

/// Resamples a stored field onto a grid in another chart, matching plane
/// points; throws EvaluationDomainError when a target node leaves the source
/// grid's footprint.
TransferResult chart_transfer(const ConformalGridState& src, Chart target,
                              const GridGeometry& geom, int interp_order,
                              double elliptic_scale = 1.0);

}  // namespace ryflow
