#include "ryflow/charts.hpp"

#include <cmath>

namespace ryflow {

std::array<double, 2> ChartMap::forward(double a, double b) const {
  switch (chart) {
    case Chart::Cartesian:
      return {a, b};
    case Chart::Polar:
      if (a < 0.0) throw EvaluationDomainError("polar radius must be nonnegative");
      return {a * std::cos(b), a * std::sin(b)};
    case Chart::ParabolicUV:
      return {0.5 * (a * a - b * b), a * b};
    case Chart::EllipticUV: {
      const double c2 = elliptic_scale * elliptic_scale;
      const double x2 = c2 * (a - 1.0) * (b - 1.0);
      const double y2 = -c2 * a * b;
      if (x2 < 0.0 || y2 < 0.0)
        throw EvaluationDomainError("elliptic chart needs u < 0 and 0 < v < 1");
      return {std::sqrt(x2), std::sqrt(y2)};
    }
  }
  throw PreconditionError("unknown chart");
}

std::array<double, 2> ChartMap::inverse(double x, double y) const {
  switch (chart) {
    case Chart::Cartesian:
      return {x, y};
    case Chart::Polar:
      return {std::hypot(x, y), std::atan2(y, x)};
    case Chart::ParabolicUV: {
      const double r = std::hypot(x, y);
      const double u = std::sqrt(r + x);
      if (u == 0.0)
        throw EvaluationDomainError("parabolic inverse is singular on the ray y=0, x<=0");
      return {u, y / u};
    }
    case Chart::EllipticUV: {
      const double c2 = elliptic_scale * elliptic_scale;
      const double p = x * x / c2, q = y * y / c2;
      // u and v are the roots of z^2 - (1-p-q) z - q = 0
      const double s = 1.0 - p - q;
      const double disc = std::sqrt(s * s + 4.0 * q);
      const double v = 0.5 * (s + disc);
      const double u = 0.5 * (s - disc);
      return {u, v};
    }
  }
  throw PreconditionError("unknown chart");
}

std::array<double, 4> ChartMap::jacobian(double a, double b) const {
  switch (chart) {
    case Chart::Cartesian:
      return {1.0, 0.0, 0.0, 1.0};
    case Chart::Polar:
      return {std::cos(b), -a * std::sin(b), std::sin(b), a * std::cos(b)};
    case Chart::ParabolicUV:
      return {a, -b, b, a};
    case Chart::EllipticUV: {
      const auto xy = forward(a, b);
      if (xy[0] == 0.0 || xy[1] == 0.0)
        throw EvaluationDomainError("elliptic jacobian is singular on the axes");
      const double c2 = elliptic_scale * elliptic_scale;
      return {0.5 * c2 * (b - 1.0) / xy[0], 0.5 * c2 * (a - 1.0) / xy[0],
              -0.5 * c2 * b / xy[1], -0.5 * c2 * a / xy[1]};
    }
  }
  throw PreconditionError("unknown chart");
}

TransferResult chart_transfer(const ConformalGridState& src, Chart target,
                              const GridGeometry& geom, int interp_order,
                              double elliptic_scale) {
  if (geom.nx < 2 || geom.ny < 2)
    throw PreconditionError("target geometry needs at least 2 nodes per axis");
  const ChartMap src_map{src.chart, elliptic_scale};
  const ChartMap dst_map{target, elliptic_scale};

  TransferResult out;
  out.state.chart = target;
  out.state.nx = geom.nx;
  out.state.ny = geom.ny;
  out.state.d1 = geom.d1;
  out.state.d2 = geom.d2;
  out.state.o1 = geom.o1;
  out.state.o2 = geom.o2;
  out.state.t = src.t;
  out.state.bc = DirichletBoundary{};
  out.state.h.resize(static_cast<std::size_t>(geom.nx) * geom.ny);

  const int low_order = interp_order > 3 ? interp_order - 2 : interp_order;
  for (int j = 0; j < geom.ny; ++j)
    for (int i = 0; i < geom.nx; ++i) {
      const double a = geom.o1 + i * geom.d1;
      const double b = geom.o2 + j * geom.d2;
      const auto plane = dst_map.forward(a, b);
      const auto sc = src_map.inverse(plane[0], plane[1]);
      const double value = interpolate(src, sc[0], sc[1], interp_order);
      out.state.h[static_cast<std::size_t>(j) * geom.nx + i] = value;
      if (low_order != interp_order) {
        const double rough = interpolate(src, sc[0], sc[1], low_order);
        out.interp_error_estimate =
            std::max(out.interp_error_estimate, std::abs(value - rough));
      }
    }
  return out;
}

}  // namespace ryflow
