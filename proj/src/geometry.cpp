#include "ryflow/geometry.hpp"

#include "ryflow/fd.hpp"

#include <cmath>

namespace ryflow {

namespace detail {

SymTensor2 metric_checked(const MetricField& g, double t, const Point& p) {
  if (!g.eval) throw PreconditionError("MetricField has no eval callback");
  if (p.dim() != g.dim)
    throw PreconditionError("point dimension does not match metric dimension");
  SymTensor2 m = g.eval(t, p);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j)
      if (!std::isfinite(m(i, j)))
        throw EvaluationDomainError("metric evaluation produced non-finite entry");
  return m;
}

static Tensor3 metric_partials_raw(const MetricField& g, double t, const Point& p,
                                   double h, int order) {
  const int n = g.dim;
  Tensor3 dg(n);
  for (int k = 0; k < n; ++k) {
    SymTensor2 d = fd::d1(
        [&](double off) { return metric_checked(g, t, p.shifted(k, off)); }, h, order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg.at(k, i, j) = d(i, j);
  }
  return dg;
}

Tensor3 christoffel_raw(const MetricField& g, double t, const Point& p,
                        double h, int order) {
  const int n = g.dim;
  SymTensor2 m = metric_checked(g, t, p);
  if (m.det() <= 0.0)
    throw DegenerateMetricError("metric not positive definite at evaluation point");
  SymTensor2 inv = m.inverse();
  Tensor3 dg = metric_partials_raw(g, t, p, h, order);
  Tensor3 gam(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gam.at(k, i, j) = 0.5 * s;
        gam.at(k, j, i) = 0.5 * s;
      }
  return gam;
}

CurvatureBundle curvature_raw(const MetricField& g, double t, const Point& p,
                              double h, int order) {
  const int n = g.dim;
  Tensor3 gam = christoffel_raw(g, t, p, h, order);

  // dgam[i](k,j,l) = partial_i Gamma^k_jl, nested differences of the
  // connection itself rather than one wide stencil on the metric.
  std::vector<Tensor3> dgam(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    dgam[static_cast<std::size_t>(i)] = fd::d1(
        [&](double off) { return christoffel_raw(g, t, p.shifted(i, off), h, order); },
        h, order);

  SymTensor2 m = metric_checked(g, t, p);
  SymTensor2 inv = m.inverse();

  // Ric_ij = sum_m R^m_(m i j); symmetrized to absorb stencil noise.
  SymTensor2 ric(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int mm = 0; mm < n; ++mm) {
        double term = dgam[static_cast<std::size_t>(mm)](mm, i, j) -
                      dgam[static_cast<std::size_t>(i)](mm, mm, j);
        for (int a = 0; a < n; ++a)
          term += gam(mm, mm, a) * gam(a, i, j) - gam(mm, i, a) * gam(a, mm, j);
        s += term;
      }
      double sT = 0.0;
      for (int mm = 0; mm < n; ++mm) {
        double term = dgam[static_cast<std::size_t>(mm)](mm, j, i) -
                      dgam[static_cast<std::size_t>(j)](mm, mm, i);
        for (int a = 0; a < n; ++a)
          term += gam(mm, mm, a) * gam(a, j, i) - gam(mm, j, a) * gam(a, mm, i);
        sT += term;
      }
      double v = 0.5 * (s + sT);
      ric.set(i, j, v);
    }

  CurvatureBundle out;
  out.christoffel = gam;
  out.ricci = ric;
  out.scalar = ric.contract(inv);
  if (n == 2) out.gauss = 0.5 * out.scalar;
  return out;
}

}  // namespace detail

Tensor3 metric_partials(const MetricField& g, double t, const Point& p,
                        const DiffSpec& spec) {
  return fd::evaluate(
      [&](double h) { return detail::metric_partials_raw(g, t, p, h, spec.order); },
      spec);
}

Tensor3 christoffel(const MetricField& g, double t, const Point& p,
                    const DiffSpec& spec) {
  return fd::evaluate(
      [&](double h) { return detail::christoffel_raw(g, t, p, h, spec.order); }, spec);
}

CurvatureBundle curvature(const MetricField& g, double t, const Point& p,
                          const DiffSpec& spec) {
  spec.validate();
  if (g.exact_curvature) return g.exact_curvature(t, p);
  if (!spec.richardson) return detail::curvature_raw(g, t, p, spec.step, spec.order);
  CurvatureBundle c = detail::curvature_raw(g, t, p, spec.step, spec.order);
  CurvatureBundle f = detail::curvature_raw(g, t, p, spec.step * 0.5, spec.order);
  const double w = (spec.order == 2) ? 4.0 : 16.0;
  const double a = w / (w - 1.0), b = -1.0 / (w - 1.0);
  CurvatureBundle out;
  out.christoffel = f.christoffel * a + c.christoffel * b;
  out.ricci = f.ricci * a + c.ricci * b;
  out.scalar = a * f.scalar + b * c.scalar;
  if (g.dim == 2) out.gauss = 0.5 * out.scalar;
  return out;
}

double gauss_isothermal(const std::function<double(double, double)>& lam,
                        double u, double v, const DiffSpec& spec) {
  double l0 = lam(u, v);
  if (!(l0 > 0.0)) throw PositivityError("conformal factor must be positive");
  auto eval = [&](double h) {
    auto loglam_u = [&](double off) {
      double l = lam(u + off, v);
      if (!(l > 0.0)) throw PositivityError("conformal factor must be positive");
      return std::log(l);
    };
    auto loglam_v = [&](double off) {
      double l = lam(u, v + off);
      if (!(l > 0.0)) throw PositivityError("conformal factor must be positive");
      return std::log(l);
    };
    return fd::d2(loglam_u, h, spec.order) + fd::d2(loglam_v, h, spec.order);
  };
  double lap = fd::evaluate(eval, spec);
  return -lap / (2.0 * l0);
}

double laplace_beltrami(const ScalarPointField& f, const MetricField& g,
                        double t, const Point& p, const DiffSpec& spec) {
  const int n = g.dim;
  // flux_i(q) = sqrt(det g) g^ij d_j f at q, with the inner derivative taken
  // at the same stencil spacing as the outer divergence
  auto eval = [&](double h) {
    auto flux = [&](int i, const Point& q) {
      SymTensor2 m = detail::metric_checked(g, t, q);
      double d = m.det();
      if (d <= 0.0) throw DegenerateMetricError("metric not positive definite");
      SymTensor2 inv = m.inverse();
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += inv(i, j) * fd::d1([&](double off) { return f(q.shifted(j, off)); }, h,
                                spec.order);
      return std::sqrt(d) * s;
    };
    double div = 0.0;
    for (int i = 0; i < n; ++i)
      div += fd::d1([&](double off) { return flux(i, p.shifted(i, off)); }, h,
                    spec.order);
    return div;
  };
  double div = fd::evaluate(eval, spec);
  return div / volume_form(g, t, p);
}

double volume_form(const MetricField& g, double t, const Point& p) {
  double d = detail::metric_checked(g, t, p).det();
  if (d <= 0.0)
    throw DegenerateMetricError("metric not positive definite at evaluation point");
  return std::sqrt(d);
}

Tensor3 covariant_derivative_sym2(const Sym2PointField& T, const MetricField& g,
                                  double t, const Point& p, const DiffSpec& spec) {
  const int n = g.dim;
  auto eval = [&](double h) {
    Tensor3 gam = detail::christoffel_raw(g, t, p, h, spec.order);
    SymTensor2 T0 = T(p);
    Tensor3 out(n);
    for (int l = 0; l < n; ++l) {
      SymTensor2 dT =
          fd::d1([&](double off) { return T(p.shifted(l, off)); }, h, spec.order);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dT(i, j);
          for (int m = 0; m < n; ++m)
            s -= gam(m, l, i) * T0(m, j) + gam(m, l, j) * T0(i, m);
          out.at(l, i, j) = s;
        }
    }
    return out;
  };
  return fd::evaluate(eval, spec);
}

namespace fd {

namespace {
double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace fd

}  // namespace ryflow
