#include "ryflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ryflow {
namespace {

std::size_t idx(const ConformalGridState& s, int i, int j) {
  return static_cast<std::size_t>(j) * s.nx + i;
}

int wrap(int k, int n) {
  k %= n;
  return k < 0 ? k + n : k;
}

void require_grid(const ConformalGridState& s) {
  if (s.nx < 3 || s.ny < 3)
    throw PreconditionError("grid needs at least 3 nodes per axis");
  if (!(s.d1 > 0.0) || !(s.d2 > 0.0))
    throw PreconditionError("grid spacings must be positive");
  if (s.h.size() != static_cast<std::size_t>(s.nx) * s.ny)
    throw PreconditionError("grid value count does not match nx*ny");
}

std::vector<double> liouville_factors(const ConformalGridState& s) {
  std::vector<double> fac(s.h.size());
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      const double u = s.coord1(i), v = s.coord2(j);
      const double r2 = u * u + v * v;
      if (!(r2 > 0.0))
        throw PreconditionError(
            "parabolic chart stepping: grid touches the origin singularity");
      fac[idx(s, i, j)] = 1.0 / r2;
    }
  return fac;
}

void check_field(const std::vector<double>& h, double t) {
  for (double v : h)
    if (!std::isfinite(v) || std::abs(v) > 700.0)
      throw BlowUpError("conformal exponent left the representable range", t);
}

void set_boundary(ConformalGridState& s, double t) {
  const auto* dir = std::get_if<DirichletBoundary>(&s.bc);
  if (!dir) return;
  if (!dir->value) throw PreconditionError("Dirichlet boundary has no value function");
  for (int i = 0; i < s.nx; ++i) {
    s.at(i, 0) = dir->value(t, s.coord1(i), s.coord2(0));
    s.at(i, s.ny - 1) = dir->value(t, s.coord1(i), s.coord2(s.ny - 1));
  }
  for (int j = 0; j < s.ny; ++j) {
    s.at(0, j) = dir->value(t, s.coord1(0), s.coord2(j));
    s.at(s.nx - 1, j) = dir->value(t, s.coord1(s.nx - 1), s.coord2(j));
  }
}

// h_t = sum * e^-h * fac * five-point laplacian; boundary entries stay zero
// under Dirichlet conditions.
void rhs_into(const ConformalGridState& s, const std::vector<double>& h,
              const std::vector<double>& fac, double sum,
              std::vector<double>& out) {
  const int nx = s.nx, ny = s.ny;
  const double i1 = 1.0 / (s.d1 * s.d1), i2 = 1.0 / (s.d2 * s.d2);
  const bool per = s.periodic();
  out.assign(h.size(), 0.0);
  const int jlo = per ? 0 : 1, jhi = per ? ny : ny - 1;
  const int ilo = per ? 0 : 1, ihi = per ? nx : nx - 1;
  for (int j = jlo; j < jhi; ++j) {
    const int jm = per ? wrap(j - 1, ny) : j - 1;
    const int jp = per ? wrap(j + 1, ny) : j + 1;
    for (int i = ilo; i < ihi; ++i) {
      const int im = per ? wrap(i - 1, nx) : i - 1;
      const int ip = per ? wrap(i + 1, nx) : i + 1;
      const std::size_t c = idx(s, i, j);
      const double lap = (h[idx(s, ip, j)] + h[idx(s, im, j)] - 2.0 * h[c]) * i1 +
                         (h[idx(s, i, jp)] + h[idx(s, i, jm)] - 2.0 * h[c]) * i2;
      const double f = fac.empty() ? 1.0 : fac[c];
      out[c] = sum * std::exp(-h[c]) * f * lap;
    }
  }
}

double stability_limit(const ConformalGridState& s, const std::vector<double>& fac,
                       double sum) {
  double min_h = s.h[0], max_f = fac.empty() ? 1.0 : fac[0];
  for (std::size_t k = 0; k < s.h.size(); ++k) {
    min_h = std::min(min_h, s.h[k]);
    if (!fac.empty()) max_f = std::max(max_f, fac[k]);
  }
  const double dx = std::min(s.d1, s.d2);
  return 0.25 * dx * dx * std::exp(min_h) / (sum * max_f);
}

ConformalGridState advance(const ConformalGridState& s, const SolverConfig& config,
                           const std::vector<double>& fac) {
  require_grid(s);
  const double sum = config.params.sum();
  if (sum < 0.0)
    throw PreconditionError("alpha+beta < 0 makes the flow antidiffusive");
  if (!(config.dt > 0.0)) throw PreconditionError("dt must be positive");

  if (config.cfl_guard && config.scheme != Scheme::SemiImplicit && sum > 0.0) {
    const double limit = stability_limit(s, fac, sum);
    if (config.dt > limit)
      throw CflError("dt " + std::to_string(config.dt) +
                         " exceeds the diffusive stability limit " +
                         std::to_string(limit),
                     0.9 * limit);
  }

  const double dt = config.dt;
  ConformalGridState next = s;
  next.t = s.t + dt;

  const auto interior_update = [&](const std::vector<double>& delta) {
    const bool per = s.periodic();
    const int jlo = per ? 0 : 1, jhi = per ? s.ny : s.ny - 1;
    const int ilo = per ? 0 : 1, ihi = per ? s.nx : s.nx - 1;
    for (int j = jlo; j < jhi; ++j)
      for (int i = ilo; i < ihi; ++i) {
        const std::size_t c = idx(s, i, j);
        next.h[c] = s.h[c] + delta[c];
      }
  };

  switch (config.scheme) {
    case Scheme::ExplicitEuler: {
      std::vector<double> k1;
      rhs_into(s, s.h, fac, sum, k1);
      for (double& v : k1) v *= dt;
      interior_update(k1);
      set_boundary(next, next.t);
      break;
    }
    case Scheme::RK4: {
      std::vector<double> k1, k2, k3, k4, stage;
      rhs_into(s, s.h, fac, sum, k1);

      ConformalGridState half = s;
      half.t = s.t + 0.5 * dt;
      stage = s.h;
      for (std::size_t c = 0; c < stage.size(); ++c) stage[c] += 0.5 * dt * k1[c];
      half.h = stage;
      set_boundary(half, half.t);
      rhs_into(half, half.h, fac, sum, k2);

      stage = s.h;
      for (std::size_t c = 0; c < stage.size(); ++c) stage[c] += 0.5 * dt * k2[c];
      half.h = stage;
      set_boundary(half, half.t);
      rhs_into(half, half.h, fac, sum, k3);

      ConformalGridState full = s;
      full.t = s.t + dt;
      stage = s.h;
      for (std::size_t c = 0; c < stage.size(); ++c) stage[c] += dt * k3[c];
      full.h = stage;
      set_boundary(full, full.t);
      rhs_into(full, full.h, fac, sum, k4);

      std::vector<double> delta(s.h.size());
      for (std::size_t c = 0; c < delta.size(); ++c)
        delta[c] = dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      interior_update(delta);
      set_boundary(next, next.t);
      break;
    }
    case Scheme::SemiImplicit: {
      // Linearized backward Euler: freeze the diffusivity at the current
      // field and solve (I - dt*D*lap) h_new = h_old by red-black sweeps.
      std::vector<double> diff(s.h.size());
      for (std::size_t c = 0; c < diff.size(); ++c)
        diff[c] = sum * std::exp(-s.h[c]) * (fac.empty() ? 1.0 : fac[c]);

      set_boundary(next, next.t);
      const int nx = s.nx, ny = s.ny;
      const double i1 = 1.0 / (s.d1 * s.d1), i2 = 1.0 / (s.d2 * s.d2);
      const bool per = s.periodic();
      const int jlo = per ? 0 : 1, jhi = per ? ny : ny - 1;
      const int ilo = per ? 0 : 1, ihi = per ? nx : nx - 1;
      double scale = 1.0;
      for (double v : s.h) scale = std::max(scale, std::abs(v));
      for (long iter = 0; iter < 200000; ++iter) {
        double change = 0.0;
        for (int color = 0; color < 2; ++color)
          for (int j = jlo; j < jhi; ++j) {
            const int jm = per ? wrap(j - 1, ny) : j - 1;
            const int jp = per ? wrap(j + 1, ny) : j + 1;
            for (int i = ilo; i < ihi; ++i) {
              if (((i + j) & 1) != color) continue;
              const int im = per ? wrap(i - 1, nx) : i - 1;
              const int ip = per ? wrap(i + 1, nx) : i + 1;
              const std::size_t c = idx(s, i, j);
              const double a = dt * diff[c];
              const double nb = i1 * (next.h[idx(s, ip, j)] + next.h[idx(s, im, j)]) +
                                i2 * (next.h[idx(s, i, jp)] + next.h[idx(s, i, jm)]);
              const double fresh = (s.h[c] + a * nb) / (1.0 + 2.0 * a * (i1 + i2));
              change = std::max(change, std::abs(fresh - next.h[c]));
              next.h[c] = fresh;
            }
          }
        if (change <= 1e-13 * scale) break;
      }
      break;
    }
  }

  check_field(next.h, next.t);
  return next;
}

}  // namespace

double cfl_limit(const ConformalGridState& s, const RYParams& params) {
  require_grid(s);
  const double sum = params.sum();
  if (!(sum > 0.0)) throw PreconditionError("stability limit needs alpha+beta > 0");
  std::vector<double> fac;
  if (s.chart == Chart::ParabolicUV) fac = liouville_factors(s);
  return stability_limit(s, fac, sum);
}

ConformalGridState step_cartesian(const ConformalGridState& s,
                                  const SolverConfig& config) {
  if (s.chart != Chart::Cartesian)
    throw PreconditionError("step_cartesian expects a Cartesian grid");
  return advance(s, config, {});
}

ConformalGridState step_liouville(const ConformalGridState& s,
                                  const SolverConfig& config) {
  if (s.chart != Chart::ParabolicUV)
    throw PreconditionError("step_liouville expects a parabolic-chart grid");
  return advance(s, config, liouville_factors(s));
}

FlowTrajectory run_flow(const ConformalGridState& initial,
                        const SolverConfig& config,
                        const std::vector<ProbeRequest>& probes) {
  require_grid(initial);
  if (initial.chart != Chart::Cartesian && initial.chart != Chart::ParabolicUV)
    throw PreconditionError("time stepping covers Cartesian and parabolic charts");
  std::vector<double> fac;
  if (initial.chart == Chart::ParabolicUV) fac = liouville_factors(initial);

  FlowTrajectory out;
  ConformalGridState cur = initial;
  out.snapshots.push_back(cur);
  const long stride = std::max<long>(1, config.snapshot_stride);
  for (long k = 0; k < config.steps; ++k) {
    try {
      cur = advance(cur, config, fac);
    } catch (const BlowUpError&) {
      out.status = StopReason::BlowUp;
      break;
    }
    ++out.steps_done;
    if ((k + 1) % stride == 0 || k + 1 == config.steps)
      if (out.snapshots.back().t != cur.t) out.snapshots.push_back(cur);
  }
  out.last_t = out.snapshots.back().t;

  const double sum = config.params.sum();
  for (const auto& req : probes) {
    const ConformalGridState* best = &out.snapshots.front();
    for (const auto& snap : out.snapshots)
      if (std::abs(snap.t - req.t) < std::abs(best->t - req.t)) best = &snap;

    ProbeRow row;
    row.t = best->t;
    row.a = req.a;
    row.b = req.b;
    row.h = interpolate(*best, req.a, req.b, 4);

    ConformalGridState kgrid = *best;
    kgrid.h = discrete_gauss(*best);
    row.gauss = interpolate(kgrid, req.a, req.b, 4);

    ConformalGridState rgrid = *best;
    rhs_into(*best, best->h, fac, sum, rgrid.h);
    row.vol_rate = 2.0 * interpolate(rgrid, req.a, req.b, 4) + 4.0 * sum * row.gauss;
    out.probes.push_back(row);
  }
  return out;
}

std::vector<double> discrete_gauss(const ConformalGridState& s) {
  require_grid(s);
  if (s.chart != Chart::Cartesian && s.chart != Chart::ParabolicUV)
    throw PreconditionError("discrete curvature covers the conformal charts only");
  const int nx = s.nx, ny = s.ny;
  const double i1 = 1.0 / (s.d1 * s.d1), i2 = 1.0 / (s.d2 * s.d2);
  const bool per = s.periodic();
  std::vector<double> fac;
  if (s.chart == Chart::ParabolicUV) fac = liouville_factors(s);
  std::vector<double> k(s.h.size(), 0.0);
  const int jlo = per ? 0 : 1, jhi = per ? ny : ny - 1;
  const int ilo = per ? 0 : 1, ihi = per ? nx : nx - 1;
  for (int j = jlo; j < jhi; ++j) {
    const int jm = per ? wrap(j - 1, ny) : j - 1;
    const int jp = per ? wrap(j + 1, ny) : j + 1;
    for (int i = ilo; i < ihi; ++i) {
      const int im = per ? wrap(i - 1, nx) : i - 1;
      const int ip = per ? wrap(i + 1, nx) : i + 1;
      const std::size_t c = idx(s, i, j);
      const double lap = (s.h[idx(s, ip, j)] + s.h[idx(s, im, j)] - 2.0 * s.h[c]) * i1 +
                         (s.h[idx(s, i, jp)] + s.h[idx(s, i, jm)] - 2.0 * s.h[c]) * i2;
      k[c] = -0.5 * std::exp(-s.h[c]) * lap * (fac.empty() ? 1.0 : fac[c]);
    }
  }
  if (!per) {
    for (int i = 0; i < nx; ++i) {
      const int ic = std::clamp(i, 1, nx - 2);
      k[idx(s, i, 0)] = k[idx(s, ic, 1)];
      k[idx(s, i, ny - 1)] = k[idx(s, ic, ny - 2)];
    }
    for (int j = 0; j < ny; ++j) {
      const int jc = std::clamp(j, 1, ny - 2);
      k[idx(s, 0, j)] = k[idx(s, 1, jc)];
      k[idx(s, nx - 1, j)] = k[idx(s, nx - 2, jc)];
    }
  }
  return k;
}

double gauss_truncation_estimate(const ConformalGridState& s) {
  require_grid(s);
  const int nx = s.nx, ny = s.ny;
  const double i1 = 1.0 / (4.0 * s.d1 * s.d1), i2 = 1.0 / (4.0 * s.d2 * s.d2);
  const bool per = s.periodic();
  const std::vector<double> fine = discrete_gauss(s);
  std::vector<double> fac;
  if (s.chart == Chart::ParabolicUV) fac = liouville_factors(s);
  double est = 0.0;
  const int jlo = per ? 0 : 2, jhi = per ? ny : ny - 2;
  const int ilo = per ? 0 : 2, ihi = per ? nx : nx - 2;
  for (int j = jlo; j < jhi; ++j) {
    const int jm = per ? wrap(j - 2, ny) : j - 2;
    const int jp = per ? wrap(j + 2, ny) : j + 2;
    for (int i = ilo; i < ihi; ++i) {
      const int im = per ? wrap(i - 2, nx) : i - 2;
      const int ip = per ? wrap(i + 2, nx) : i + 2;
      const std::size_t c = idx(s, i, j);
      const double lap = (s.h[idx(s, ip, j)] + s.h[idx(s, im, j)] - 2.0 * s.h[c]) * i1 +
                         (s.h[idx(s, i, jp)] + s.h[idx(s, i, jm)] - 2.0 * s.h[c]) * i2;
      const double coarse =
          -0.5 * std::exp(-s.h[c]) * lap * (fac.empty() ? 1.0 : fac[c]);
      est = std::max(est, std::abs(fine[c] - coarse) / 3.0);
    }
  }
  return est;
}

namespace {

struct AxisPlan {
  std::vector<int> index;
  std::vector<double> weight;
};

AxisPlan plan_axis(double coord, double origin, double spacing, int n, int p,
                   bool periodic) {
  double srel = (coord - origin) / spacing;
  if (periodic) {
    srel = std::fmod(srel, static_cast<double>(n));
    if (srel < 0.0) srel += n;
  }
  const double r = std::round(srel);
  if (std::abs(srel - r) <= 1e-9) {
    int k = static_cast<int>(r);
    if (periodic)
      k = wrap(k, n);
    else if (k < 0 || k >= n)
      throw EvaluationDomainError("interpolation point outside the grid");
    return {{k}, {1.0}};
  }
  if (!periodic && (srel < 0.0 || srel > n - 1))
    throw EvaluationDomainError("interpolation point outside the grid");

  int base = static_cast<int>(std::floor(srel)) - (p / 2 - 1);
  if (!periodic) base = std::clamp(base, 0, n - p);
  AxisPlan plan;
  plan.index.resize(p);
  plan.weight.resize(p);
  for (int m = 0; m < p; ++m) {
    const int node = base + m;
    plan.index[m] = periodic ? wrap(node, n) : node;
    double w = 1.0;
    for (int l = 0; l < p; ++l)
      if (l != m) w *= (srel - (base + l)) / static_cast<double>(m - l);
    plan.weight[m] = w;
  }
  return plan;
}

}  // namespace

double interpolate(const ConformalGridState& s, double a, double b, int order) {
  require_grid(s);
  if (order < 2 || order > s.nx || order > s.ny)
    throw PreconditionError("interpolation order must fit inside the grid");
  const bool per = s.periodic();
  const AxisPlan pa = plan_axis(a, s.o1, s.d1, s.nx, order, per);
  const AxisPlan pb = plan_axis(b, s.o2, s.d2, s.ny, order, per);
  if (pa.index.size() == 1 && pb.index.size() == 1)
    return s.at(pa.index[0], pb.index[0]);
  double acc = 0.0;
  for (std::size_t jj = 0; jj < pb.index.size(); ++jj) {
    double rowacc = 0.0;
    for (std::size_t ii = 0; ii < pa.index.size(); ++ii)
      rowacc += pa.weight[ii] * s.at(pa.index[ii], pb.index[jj]);
    acc += pb.weight[jj] * rowacc;
  }
  return acc;
}

}  // namespace ryflow
