#include "ryflow/variation.hpp"

#include "ryflow/fd.hpp"

#include <cmath>
#include <utility>

namespace ryflow {
namespace {

using detail::christoffel_raw;
using detail::curvature_raw;
using detail::metric_checked;

// Evaluates a (lhs, rhs) pair at one step, optionally combining two steps by
// Richardson extrapolation the same way fd::evaluate does for single values.
template <typename Raw>
auto eval_pair(Raw&& raw, const DiffSpec& spec) {
  spec.validate();
  auto coarse = raw(spec.step);
  if (!spec.richardson) return coarse;
  auto fine = raw(spec.step / 2.0);
  const double w = spec.order == 2 ? 4.0 : 16.0;
  const double a = w / (w - 1.0), b = -1.0 / (w - 1.0);
  return std::pair{fine.first * a + coarse.first * b,
                   fine.second * a + coarse.second * b};
}

bool ry_flow_holds(const MetricField& g, double t, const Point& p,
                   const RYParams& params) {
  const DiffSpec probe{};
  const SymTensor2 ry = ry_eval(g, t, p, params, probe);
  const SymTensor2 m = metric_checked(g, t, p);
  return ry.sup_norm() <= 1e-5 * (1.0 + m.sup_norm());
}

double ricci_norm_squared(const SymTensor2& ric, const SymTensor2& inv) {
  const int n = ric.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc += inv(i, k) * inv(j, l) * ric(i, j) * ric(k, l);
  return acc;
}

// grad_l Ric_ij at step h, all inner derivatives sharing the same step.
Tensor3 ricci_gradient(const MetricField& g, double t, const Point& p,
                       const Tensor3& gamma, int order, double h) {
  const int n = p.dim();
  const SymTensor2 ric0 = curvature_raw(g, t, p, h, order).ricci;
  Tensor3 grad(n);
  for (int l = 0; l < n; ++l) {
    const SymTensor2 dric = fd::d1(
        [&](double off) { return curvature_raw(g, t, p.shifted(l, off), h, order).ricci; },
        h, order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = dric(i, j);
        for (int m = 0; m < n; ++m)
          v -= gamma(m, l, i) * ric0(m, j) + gamma(m, l, j) * ric0(i, m);
        grad.at(l, i, j) = v;
      }
  }
  return grad;
}

IdentityResidual make_result(std::string id, const MetricField& g, double t,
                             const Point& p, const RYParams& params,
                             double lhs_norm, double rhs_norm, double residual) {
  IdentityResidual out;
  out.id = std::move(id);
  out.lhs_norm = lhs_norm;
  out.rhs_norm = rhs_norm;
  out.residual = residual;
  out.flow_verified = ry_flow_holds(g, t, p, params);
  return out;
}

}  // namespace

IdentityResidual christoffel_variation_residual(const MetricField& g, double t,
                                                const Point& p,
                                                const RYParams& params,
                                                const DiffSpec& spec) {
  const int n = p.dim();
  auto raw = [&](double h) {
    const Tensor3 lhs = fd::d1(
        [&](double off) { return christoffel_raw(g, t + off, p, h, spec.order); },
        h, spec.order);

    const CurvatureBundle cb = curvature_raw(g, t, p, h, spec.order);
    const SymTensor2 m = metric_checked(g, t, p);
    const SymTensor2 inv = m.inverse();
    const Tensor3 grad = ricci_gradient(g, t, p, cb.christoffel, spec.order, h);

    std::vector<double> dR(n);
    for (int l = 0; l < n; ++l)
      dR[l] = fd::d1(
          [&](double off) { return curvature_raw(g, t, p.shifted(l, off), h, spec.order).scalar; },
          h, spec.order);
    std::vector<double> dR_up(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) dR_up[k] += inv(k, l) * dR[l];

    Tensor3 rhs(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double a = 0.0;
          for (int l = 0; l < n; ++l)
            a += inv(k, l) * (grad(l, i, j) - grad(i, j, l) - grad(j, i, l));
          double b = (i == k ? dR[j] : 0.0) + (j == k ? dR[i] : 0.0) -
                     dR_up[k] * m(i, j);
          rhs.at(k, i, j) = params.alpha * a - 0.5 * params.beta * b;
        }
    return std::pair{lhs, rhs};
  };

  const auto [lhs, rhs] = eval_pair(raw, spec);
  return make_result("connection-variation", g, t, p, params, lhs.sup_norm(),
                     rhs.sup_norm(), (lhs - rhs).sup_norm());
}

IdentityResidual scalar_variation_residual(const MetricField& g, double t,
                                           const Point& p, const RYParams& params,
                                           const DiffSpec& spec) {
  const int n = p.dim();
  auto raw = [&](double h) {
    const double lhs = fd::d1(
        [&](double off) { return curvature_raw(g, t + off, p, h, spec.order).scalar; },
        h, spec.order);

    const CurvatureBundle cb = curvature_raw(g, t, p, h, spec.order);
    const SymTensor2 inv = metric_checked(g, t, p).inverse();
    const DiffSpec inner{h, spec.order, false};
    const double lap = laplace_beltrami(
        [&](const Point& q) { return curvature_raw(g, t, q, h, spec.order).scalar; },
        g, t, p, inner);
    const double rhs = (params.alpha + (n - 1) * params.beta) * lap +
                       2.0 * params.alpha * ricci_norm_squared(cb.ricci, inv) +
                       params.beta * cb.scalar * cb.scalar;
    return std::pair{lhs, rhs};
  };

  const auto [lhs, rhs] = eval_pair(raw, spec);
  return make_result("scalar-variation", g, t, p, params, std::abs(lhs),
                     std::abs(rhs), std::abs(lhs - rhs));
}

IdentityResidual gauss_variation_residual(const MetricField& g, double t,
                                          const Point& p, const RYParams& params,
                                          const DiffSpec& spec) {
  if (p.dim() != 2)
    throw PreconditionError("Gauss curvature identity applies to surfaces only");
  auto raw = [&](double h) {
    const double lhs = fd::d1(
        [&](double off) { return 0.5 * curvature_raw(g, t + off, p, h, spec.order).scalar; },
        h, spec.order);
    const double k0 = 0.5 * curvature_raw(g, t, p, h, spec.order).scalar;
    const DiffSpec inner{h, spec.order, false};
    const double lap = laplace_beltrami(
        [&](const Point& q) { return 0.5 * curvature_raw(g, t, q, h, spec.order).scalar; },
        g, t, p, inner);
    const double rhs = params.sum() * (lap + 2.0 * k0 * k0);
    return std::pair{lhs, rhs};
  };

  const auto [lhs, rhs] = eval_pair(raw, spec);
  return make_result("gauss-variation", g, t, p, params, std::abs(lhs),
                     std::abs(rhs), std::abs(lhs - rhs));
}

IdentityResidual volume_form_variation_residual(const MetricField& g, double t,
                                                const Point& p,
                                                const RYParams& params,
                                                const DiffSpec& spec) {
  const int n = p.dim();
  auto raw = [&](double h) {
    const double lhs = fd::d1(
        [&](double off) { return volume_form(g, t + off, p); }, h, spec.order);
    const double scal = curvature_raw(g, t, p, h, spec.order).scalar;
    const double rhs = -(params.alpha + 0.5 * n * params.beta) * scal *
                       volume_form(g, t, p);
    return std::pair{lhs, rhs};
  };

  const auto [lhs, rhs] = eval_pair(raw, spec);
  return make_result("volume-form-variation", g, t, p, params, std::abs(lhs),
                     std::abs(rhs), std::abs(lhs - rhs));
}

IdentityResidual constant_volume_scalar_residual(const MetricField& g, double t,
                                                 const Point& p,
                                                 const RYParams& params,
                                                 const DiffSpec& spec) {
  const int n = p.dim();
  if (std::abs(params.mix(n)) > 1e-12 * (1.0 + std::abs(params.alpha) + std::abs(params.beta)))
    throw PreconditionError("constant-volume identity needs 2*alpha + n*beta = 0");
  if (params.alpha == 0.0)
    throw PreconditionError("constant-volume identity needs alpha != 0");

  auto raw = [&](double h) {
    const double lhs = fd::d1(
        [&](double off) { return curvature_raw(g, t + off, p, h, spec.order).scalar; },
        h, spec.order) / params.alpha;
    const CurvatureBundle cb = curvature_raw(g, t, p, h, spec.order);
    const SymTensor2 inv = metric_checked(g, t, p).inverse();
    const DiffSpec inner{h, spec.order, false};
    const double lap = laplace_beltrami(
        [&](const Point& q) { return curvature_raw(g, t, q, h, spec.order).scalar; },
        g, t, p, inner);
    const double rhs = (2.0 - n) / n * lap +
                       2.0 * ricci_norm_squared(cb.ricci, inv) -
                       2.0 / n * cb.scalar * cb.scalar;
    return std::pair{lhs, rhs};
  };

  const auto [lhs, rhs] = eval_pair(raw, spec);
  return make_result("constant-volume-scalar-variation", g, t, p, params,
                     std::abs(lhs), std::abs(rhs), std::abs(lhs - rhs));
}

RecurrenceForm recurrent_eta(const MetricField& g, const DiffSpec& spec) {
  RecurrenceForm form;
  form.source = RecurrenceForm::Source::Derived;
  form.eta = [g, spec](double t, const Point& p) {
    auto log_gauss = [&](const Point& q) {
      const CurvatureBundle cb = curvature(g, t, q, spec);
      if (!cb.gauss)
        throw PreconditionError("recurrence form is defined on surfaces only");
      if (!(*cb.gauss > 0.0))
        throw PositivityError("recurrence form needs positive curvature");
      return std::log(*cb.gauss);
    };
    std::vector<double> eta(p.dim());
    for (int l = 0; l < p.dim(); ++l)
      eta[l] = fd::evaluate(
          [&](double h) {
            return fd::d1([&](double off) { return log_gauss(p.shifted(l, off)); },
                          h, spec.order);
          },
          spec);
    return eta;
  };
  return form;
}

double recurrence_residual(const MetricField& g, const RecurrenceForm& form,
                           double t, const Point& p, const DiffSpec& spec) {
  if (!form.eta) throw PreconditionError("recurrence form has no one-form");
  const int n = p.dim();
  const Tensor3 grad = covariant_derivative_sym2(
      [&](const Point& q) { return curvature(g, t, q, spec).ricci; }, g, t, p,
      spec);
  const SymTensor2 ric = curvature(g, t, p, spec).ricci;
  const std::vector<double> eta = form.eta(t, p);
  double sup = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sup = std::max(sup, std::abs(grad(l, i, j) - eta[l] * ric(i, j)));
  return sup;
}

std::pair<IdentityResidual, IdentityResidual> recurrent_variation_residuals(
    const MetricField& g, const RecurrenceForm& form, double t, const Point& p,
    const RYParams& params, const DiffSpec& spec) {
  const int n = p.dim();
  const double defect = recurrence_residual(g, form, t, p, spec);
  const SymTensor2 ric0 = curvature(g, t, p, spec).ricci;
  if (defect > 1e-3 * (1.0 + ric0.sup_norm()))
    throw PreconditionError(
        "one-form fails the Ricci recurrence check, defect " + std::to_string(defect));

  const std::vector<double> eta = form.eta(t, p);

  auto raw_conn = [&](double h) {
    const Tensor3 lhs = fd::d1(
        [&](double off) { return christoffel_raw(g, t + off, p, h, spec.order); },
        h, spec.order);
    const CurvatureBundle cb = curvature_raw(g, t, p, h, spec.order);
    const SymTensor2 m = metric_checked(g, t, p);
    const SymTensor2 inv = m.inverse();
    std::vector<double> eta_up(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) eta_up[k] += inv(k, l) * eta[l];
    std::vector<double> mixed(static_cast<std::size_t>(n) * n, 0.0);  // Ric^k_j
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          mixed[static_cast<std::size_t>(k) * n + j] += inv(k, l) * cb.ricci(l, j);
    Tensor3 rhs(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double a = eta_up[k] * cb.ricci(i, j) -
                           eta[i] * mixed[static_cast<std::size_t>(k) * n + j] -
                           eta[j] * mixed[static_cast<std::size_t>(k) * n + i];
          const double b = (i == k ? eta[j] : 0.0) + (j == k ? eta[i] : 0.0) -
                           m(i, j) * eta_up[k];
          rhs.at(k, i, j) = params.alpha * a - 0.5 * params.beta * b * cb.scalar;
        }
    return std::pair{lhs, rhs};
  };
  const auto [clhs, crhs] = eval_pair(raw_conn, spec);
  IdentityResidual conn =
      make_result("connection-variation-recurrent", g, t, p, params,
                  clhs.sup_norm(), crhs.sup_norm(), (clhs - crhs).sup_norm());

  IdentityResidual scal;
  if (n == 2) {
    auto raw = [&](double h) {
      const double lhs = fd::d1(
          [&](double off) { return 0.5 * curvature_raw(g, t + off, p, h, spec.order).scalar; },
          h, spec.order);
      const double k0 = 0.5 * curvature_raw(g, t, p, h, spec.order).scalar;
      if (!(k0 > 0.0))
        throw PositivityError("recurrent scalar identity needs positive curvature");
      const DiffSpec inner{h, spec.order, false};
      const double lap = laplace_beltrami(
          [&](const Point& q) {
            const double kq = 0.5 * curvature_raw(g, t, q, h, spec.order).scalar;
            if (!(kq > 0.0))
              throw PositivityError("recurrent scalar identity needs positive curvature");
            return std::log(kq);
          },
          g, t, p, inner);
      const SymTensor2 inv = metric_checked(g, t, p).inverse();
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) norm2 += inv(i, j) * eta[i] * eta[j];
      const double rhs = params.sum() * ((lap + norm2) * k0 + 2.0 * k0 * k0);
      return std::pair{lhs, rhs};
    };
    const auto [lhs, rhs] = eval_pair(raw, spec);
    scal = make_result("gauss-variation-recurrent", g, t, p, params,
                       std::abs(lhs), std::abs(rhs), std::abs(lhs - rhs));
  } else {
    auto raw = [&](double h) {
      const double lhs = fd::d1(
          [&](double off) { return curvature_raw(g, t + off, p, h, spec.order).scalar; },
          h, spec.order);
      const double scal0 = curvature_raw(g, t, p, h, spec.order).scalar;
      const SymTensor2 inv = metric_checked(g, t, p).inverse();
      // divergence of eta in flux form
      double div = 0.0;
      for (int i = 0; i < n; ++i)
        div += fd::d1(
            [&](double off) {
              const Point q = p.shifted(i, off);
              const SymTensor2 minv = metric_checked(g, t, q).inverse();
              const std::vector<double> e = form.eta(t, q);
              double up = 0.0;
              for (int j = 0; j < n; ++j) up += minv(i, j) * e[j];
              return volume_form(g, t, q) * up;
            },
            h, spec.order);
      div /= volume_form(g, t, p);
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) norm2 += inv(i, j) * eta[i] * eta[j];
      const double rhs = params.sum() * ((div + norm2) * scal0 + scal0 * scal0);
      return std::pair{lhs, rhs};
    };
    const auto [lhs, rhs] = eval_pair(raw, spec);
    scal = make_result("scalar-variation-recurrent", g, t, p, params,
                       std::abs(lhs), std::abs(rhs), std::abs(lhs - rhs));
  }
  return {std::move(conn), std::move(scal)};
}

BoundCheckReport curvature_lower_bound_check(const FlowTrajectory& traj,
                                             const RYParams& params,
                                             double tol_factor) {
  if (params.sum() < 1.0)
    throw PreconditionError("curvature lower bound assumes alpha+beta >= 1");
  BoundCheckReport report;
  for (const auto& snap : traj.snapshots) {
    if (!(snap.t > 0.0)) continue;
    const std::vector<double> gauss = discrete_gauss(snap);
    double min_gauss = gauss[0];
    for (double v : gauss) min_gauss = std::min(min_gauss, v);
    BoundCheckRecord rec;
    rec.t = snap.t;
    rec.min_gauss = min_gauss;
    rec.bound = -1.0 / (2.0 * params.sum() * snap.t);
    rec.tolerance = tol_factor * gauss_truncation_estimate(snap);
    rec.pass = min_gauss >= rec.bound - rec.tolerance;
    report.all_pass = report.all_pass && rec.pass;
    report.records.push_back(rec);
  }
  if (report.records.empty())
    throw PreconditionError("trajectory has no positive-time snapshots");
  return report;
}

}  // namespace ryflow
