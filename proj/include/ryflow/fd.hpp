#pragma once

#include "ryflow/tensor.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace ryflow::fd {

// Central stencils with purely even error expansions, so a single Richardson
// pass over the whole evaluation cancels the leading term exactly.

/// First derivative at offset 0 of a callable f(double offset).
template <class F>
auto d1(F&& f, double h, int order) {
  if (order == 2) return (f(h) - f(-h)) * (1.0 / (2.0 * h));
  return (f(-2.0 * h) - f(2.0 * h) + (f(h) - f(-h)) * 8.0) * (1.0 / (12.0 * h));
}

/// Second derivative at offset 0 of a callable f(double offset).
template <class F>
auto d2(F&& f, double h, int order) {
  if (order == 2) return (f(h) + f(-h) - f(0.0) * 2.0) * (1.0 / (h * h));
  return (f(h) * 16.0 + f(-h) * 16.0 - f(2.0 * h) - f(-2.0 * h) - f(0.0) * 30.0) *
         (1.0 / (12.0 * h * h));
}

/// Richardson extrapolation of a whole evaluation: eval(h) must have an even
/// error expansion with leading power `order`.
template <class F>
auto extrapolate(F&& eval, double h, int order) {
  auto coarse = eval(h);
  auto fine = eval(h * 0.5);
  const double w = (order == 2) ? 4.0 : 16.0;
  return (fine * w - coarse) * (1.0 / (w - 1.0));
}

/// Runs eval(h) at the configured step, with Richardson extrapolation when
/// the DiffSpec enables it.
template <class F>
auto evaluate(F&& eval, const DiffSpec& spec) {
  spec.validate();
  if (spec.richardson) return extrapolate(eval, spec.step, spec.order);
  return eval(spec.step);
}

/// Least-squares slope of log(err) against log(step); the observed order of a
/// refinement ladder.
inline double observed_order(const std::vector<double>& steps,
                             const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(errs[i] > 0.0)) continue;  // exact zeros carry no slope information
    double lx = std::log(steps[i]), ly = std::log(errs[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Adaptive Simpson quadrature (tolerance on the absolute error).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

}  // namespace ryflow::fd
