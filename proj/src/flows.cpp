#include "ryflow/flows.hpp"

#include "ryflow/fd.hpp"

#include <cmath>

namespace ryflow {

// ---- time potentials --------------------------------------------------------

TimePotential exp_potential(double c) {
  TimePotential p;
  p.value = [c](double t) { return std::exp(c * t); };
  p.deriv = [c](double t) { return c * std::exp(c * t); };
  p.inv_antideriv = [c](double t) {
    return c == 0.0 ? t : (1.0 - std::exp(-c * t)) / c;
  };
  p.invsqrt_antideriv = [c](double t) {
    return c == 0.0 ? t : 2.0 * (1.0 - std::exp(-0.5 * c * t)) / c;
  };
  return p;
}

TimePotential unit_potential() {
  TimePotential p;
  p.value = [](double) { return 1.0; };
  p.deriv = [](double) { return 0.0; };
  p.inv_antideriv = [](double t) { return t; };
  p.invsqrt_antideriv = [](double t) { return t; };
  return p;
}

TimePotential power_potential(double m) {
  TimePotential p;
  p.value = [m](double t) {
    if (!(t > 0.0)) throw EvaluationDomainError("power potential needs t > 0");
    return std::pow(t, m);
  };
  p.deriv = [m](double t) {
    if (!(t > 0.0)) throw EvaluationDomainError("power potential needs t > 0");
    return m * std::pow(t, m - 1.0);
  };
  // antiderivatives anchored at t = 1 (the profile is singular at t = 0)
  p.inv_antideriv = [m](double t) {
    if (!(t > 0.0)) throw EvaluationDomainError("power potential needs t > 0");
    return m == 1.0 ? std::log(t) : (std::pow(t, 1.0 - m) - 1.0) / (1.0 - m);
  };
  p.invsqrt_antideriv = [m](double t) {
    if (!(t > 0.0)) throw EvaluationDomainError("power potential needs t > 0");
    return m == 2.0 ? std::log(t)
                    : (std::pow(t, 1.0 - 0.5 * m) - 1.0) / (1.0 - 0.5 * m);
  };
  return p;
}

TimePotential linear_potential(double a, double b) {
  TimePotential p;
  p.value = [a, b](double t) { return a + b * t; };
  p.deriv = [b](double) { return b; };
  p.inv_antideriv = [a, b](double t) {
    return b == 0.0 ? t / a : std::log((a + b * t) / a) / b;
  };
  p.invsqrt_antideriv = [a, b](double t) {
    return b == 0.0 ? t / std::sqrt(a)
                    : 2.0 * (std::sqrt(a + b * t) - std::sqrt(a)) / b;
  };
  return p;
}

// ---- sn_k -------------------------------------------------------------------

double SnK::value(double u) const {
  double z = k * u * u;
  if (std::fabs(z) < 1e-4)
    return u * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0);
  if (k > 0.0) {
    double s = std::sqrt(k);
    return std::sin(s * u) / s;
  }
  double s = std::sqrt(-k);
  return std::sinh(s * u) / s;
}

double SnK::deriv(double u) const {
  double z = k * u * u;
  if (std::fabs(z) < 1e-4)
    return 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
  if (k > 0.0) return std::cos(std::sqrt(k) * u);
  return std::cosh(std::sqrt(-k) * u);
}

// ---- metric constructors ----------------------------------------------------

namespace {

// 2D conformal connection for g = lam * I, phi = ln(lam)/2:
// Gamma^1_11 = phi_1, Gamma^1_12 = phi_2, Gamma^1_22 = -phi_1, and symmetric.
Tensor3 conformal_connection_2d(double phi1, double phi2) {
  Tensor3 gam(2);
  gam.at(0, 0, 0) = phi1;
  gam.at(0, 0, 1) = phi2;
  gam.at(0, 1, 0) = phi2;
  gam.at(0, 1, 1) = -phi1;
  gam.at(1, 0, 0) = -phi2;
  gam.at(1, 0, 1) = phi1;
  gam.at(1, 1, 0) = phi1;
  gam.at(1, 1, 1) = phi2;
  return gam;
}

CurvatureBundle bundle_2d_conformal(double lam, double phi1, double phi2,
                                    double gauss) {
  CurvatureBundle b;
  b.christoffel = conformal_connection_2d(phi1, phi2);
  b.ricci = SymTensor2(2);
  b.ricci.set(0, 0, gauss * lam);
  b.ricci.set(1, 1, gauss * lam);
  b.scalar = 2.0 * gauss;
  b.gauss = gauss;
  return b;
}

double cigar_denominator(const TimePotential& f, double t, const Point& p) {
  return f.value(t) + p[0] * p[0] + p[1] * p[1];
}

double poincare_height(const PoincareFlow& fl, const Point& p) {
  double y = p[fl.dim - 1];
  if (!(y > 0.0))
    throw EvaluationDomainError("half-space flow needs last coordinate > 0");
  return y;
}

double warped_profile(const WarpedRotSymFlow& fl, double u) {
  SnK sn{fl.k};
  double s = sn.value(u);
  if (s * s <= 0.0)
    throw EvaluationDomainError("warped profile vanishes at this point");
  return s;
}

MetricField make_conformal(const TimePotential& f, const MetricField& base,
                           bool oracle) {
  MetricField out;
  out.dim = base.dim;
  auto baseEval = base.eval;
  out.eval = [f, baseEval](double t, const Point& p) {
    return baseEval(0.0, p) * f.value(t);
  };
  out.exact_dt = [f, baseEval](double t, const Point& p) {
    return baseEval(0.0, p) * f.deriv(t);
  };
  if (oracle) {
    if (!base.exact_curvature)
      throw PreconditionError(
          "conformal curvature oracle needs base curvature data");
    auto baseCurv = base.exact_curvature;
    int n = base.dim;
    out.exact_curvature = [f, baseCurv, n](double t, const Point& p) {
      CurvatureBundle b = baseCurv(0.0, p);
      b.scalar /= f.value(t);  // connection and Ricci are scale-invariant
      if (n == 2) b.gauss = 0.5 * b.scalar;
      return b;
    };
  }
  return out;
}

}  // namespace

MetricField flat_metric(int n) {
  MetricField m;
  m.dim = n;
  m.eval = [n](double, const Point&) { return SymTensor2::identity(n); };
  m.exact_dt = [n](double, const Point&) { return SymTensor2(n); };
  m.exact_curvature = [n](double, const Point&) {
    CurvatureBundle b;
    b.christoffel = Tensor3(n);
    b.ricci = SymTensor2(n);
    b.scalar = 0.0;
    if (n == 2) b.gauss = 0.0;
    return b;
  };
  return m;
}

MetricField hyperbolic_half_plane() {
  MetricField m;
  m.dim = 2;
  m.eval = [](double, const Point& p) {
    double y = p[1];
    if (!(y > 0.0)) throw EvaluationDomainError("half-plane metric needs y > 0");
    SymTensor2 g(2);
    g.set(0, 0, 1.0 / (y * y));
    g.set(1, 1, 1.0 / (y * y));
    return g;
  };
  m.exact_dt = [](double, const Point&) { return SymTensor2(2); };
  m.exact_curvature = [](double, const Point& p) {
    double y = p[1];
    if (!(y > 0.0)) throw EvaluationDomainError("half-plane metric needs y > 0");
    double lam = 1.0 / (y * y);
    return bundle_2d_conformal(lam, 0.0, -1.0 / y, -1.0);
  };
  return m;
}

MetricField constant_curvature_warped(double k) {
  return make_flow(WarpedRotSymFlow{unit_potential(), k}, true);
}

MetricField make_flow(const FlowKind& kind, bool with_curvature_oracle) {
  const bool oracle = with_curvature_oracle;
  return std::visit(
      [&](const auto& fl) -> MetricField {
        using T = std::decay_t<decltype(fl)>;

        if constexpr (std::is_same_v<T, ConformalFlow>) {
          return make_conformal(fl.f, fl.base, oracle);
        } else if constexpr (std::is_same_v<T, ConeFlow>) {
          return make_conformal(power_potential(1.0), fl.base, oracle);
        } else if constexpr (std::is_same_v<T, ConvexEuclideanFlow>) {
          MetricField out;
          out.dim = 2;
          auto E = fl.E;
          auto lam = [E](double t, const Point& p) {
            double e = E.value(p[0], p[1]);
            double l = (1.0 - t) * e + t;
            if (!(l > 0.0))
              throw PositivityError("interpolated conformal factor not positive");
            return l;
          };
          out.eval = [lam](double t, const Point& p) {
            return SymTensor2::identity(2) * lam(t, p);
          };
          out.exact_dt = [E](double, const Point& p) {
            return SymTensor2::identity(2) * (1.0 - E.value(p[0], p[1]));
          };
          if (oracle) {
            if (!E.grad || !E.hess)
              throw PreconditionError(
                  "convex interpolation oracle needs gradient and Hessian of E");
            out.exact_curvature = [E, lam](double t, const Point& p) {
              double l = lam(t, p);
              auto gr = E.grad(p[0], p[1]);
              auto he = E.hess(p[0], p[1]);
              double lu = (1.0 - t) * gr[0], lv = (1.0 - t) * gr[1];
              double dl = (1.0 - t) * (he[0] + he[2]);
              // laplacian of ln(lam) = (lam*Delta lam - |grad lam|^2)/lam^2
              double loglap = (l * dl - (lu * lu + lv * lv)) / (l * l);
              double K = -loglap / (2.0 * l);
              return bundle_2d_conformal(l, lu / (2.0 * l), lv / (2.0 * l), K);
            };
          }
          return out;
        } else if constexpr (std::is_same_v<T, PoincareFlow>) {
          MetricField out;
          const int n = fl.dim;
          if (n < 2) throw PreconditionError("half-space flow needs dim >= 2");
          out.dim = n;
          auto flc = fl;
          out.eval = [flc, n](double t, const Point& p) {
            double y = poincare_height(flc, p);
            return SymTensor2::identity(n) * std::pow(y, -t);
          };
          out.exact_dt = [flc, n](double t, const Point& p) {
            double y = poincare_height(flc, p);
            return SymTensor2::identity(n) * (-std::log(y) * std::pow(y, -t));
          };
          if (oracle) {
            out.exact_curvature = [flc, n](double t, const Point& p) {
              double y = poincare_height(flc, p);
              CurvatureBundle b;
              b.christoffel = Tensor3(n);
              // conformal-to-flat connection, phi = -(t/2) ln(y)
              double phin = -t / (2.0 * y);
              int last = n - 1;
              for (int i = 0; i < n; ++i) {
                b.christoffel.at(i, i, last) += phin;
                b.christoffel.at(i, last, i) += phin;
                b.christoffel.at(last, i, i) -= phin;
              }
              b.ricci = SymTensor2(n);
              double diag = ((2.0 - n) * t * t - 2.0 * t) / (4.0 * y * y);
              for (int i = 0; i + 1 < n; ++i) b.ricci.set(i, i, diag);
              b.ricci.set(last, last, (1.0 - n) * t / (2.0 * y * y));
              b.scalar = (1.0 - n) * std::pow(y, t - 2.0) *
                         (t + (n - 2.0) * t * t / 4.0);
              if (n == 2) b.gauss = 0.5 * b.scalar;
              return b;
            };
          }
          return out;
        } else if constexpr (std::is_same_v<T, GeneralizedCigarFlow>) {
          MetricField out;
          out.dim = 2;
          auto f = fl.f;
          out.eval = [f](double t, const Point& p) {
            double s = cigar_denominator(f, t, p);
            if (!(s > 0.0))
              throw PositivityError("cigar conformal factor not positive");
            return SymTensor2::identity(2) * (1.0 / s);
          };
          out.exact_dt = [f](double t, const Point& p) {
            double s = cigar_denominator(f, t, p);
            return SymTensor2::identity(2) * (-f.deriv(t) / (s * s));
          };
          if (oracle) {
            out.exact_curvature = [f](double t, const Point& p) {
              double s = cigar_denominator(f, t, p);
              double K = 2.0 * f.value(t) / s;
              return bundle_2d_conformal(1.0 / s, -p[0] / s, -p[1] / s, K);
            };
          }
          return out;
        } else if constexpr (std::is_same_v<T, WarpedRotSymFlow>) {
          MetricField out;
          out.dim = 2;
          auto flc = fl;
          out.eval = [flc](double t, const Point& p) {
            double s = warped_profile(flc, p[0]);
            SymTensor2 g(2);
            g.set(0, 0, 1.0);
            g.set(1, 1, flc.f.value(t) * s * s);
            return g;
          };
          out.exact_dt = [flc](double t, const Point& p) {
            double s = warped_profile(flc, p[0]);
            SymTensor2 d(2);
            d.set(1, 1, flc.f.deriv(t) * s * s);
            return d;
          };
          if (oracle) {
            out.exact_curvature = [flc](double t, const Point& p) {
              SnK sn{flc.k};
              double s = warped_profile(flc, p[0]);
              double sp = sn.deriv(p[0]);
              double fv = flc.f.value(t);
              CurvatureBundle b;
              b.christoffel = Tensor3(2);
              b.christoffel.at(0, 1, 1) = -fv * s * sp;
              b.christoffel.at(1, 0, 1) = sp / s;
              b.christoffel.at(1, 1, 0) = sp / s;
              double K = flc.k;
              b.ricci = SymTensor2(2);
              b.ricci.set(0, 0, K);
              b.ricci.set(1, 1, K * fv * s * s);
              b.scalar = 2.0 * K;
              b.gauss = K;
              return b;
            };
          }
          return out;
        } else {
          static_assert(std::is_same_v<T, WarpedGeneralFlow>);
          MetricField out;
          out.dim = 2;
          auto flc = fl;
          out.eval = [flc](double t, const Point& p) {
            double G = flc.G.value(p[0]);
            if (!(G > 0.0))
              throw EvaluationDomainError("warping profile must be positive");
            SymTensor2 g(2);
            g.set(0, 0, 1.0);
            g.set(1, 1, flc.f.value(t) * G);
            return g;
          };
          out.exact_dt = [flc](double t, const Point& p) {
            SymTensor2 d(2);
            d.set(1, 1, flc.f.deriv(t) * flc.G.value(p[0]));
            return d;
          };
          if (oracle) {
            if (!flc.G.deriv || !flc.G.deriv2)
              throw PreconditionError(
                  "warped curvature oracle needs two profile derivatives");
            out.exact_curvature = [flc](double t, const Point& p) {
              double G = flc.G.value(p[0]);
              double Gp = flc.G.deriv(p[0]);
              double Gpp = flc.G.deriv2(p[0]);
              double fv = flc.f.value(t);
              // K = -(sqrt G)'' / sqrt G
              double K = -(Gpp / (2.0 * G) - Gp * Gp / (4.0 * G * G));
              CurvatureBundle b;
              b.christoffel = Tensor3(2);
              b.christoffel.at(0, 1, 1) = -0.5 * fv * Gp;
              b.christoffel.at(1, 0, 1) = Gp / (2.0 * G);
              b.christoffel.at(1, 1, 0) = Gp / (2.0 * G);
              b.ricci = SymTensor2(2);
              b.ricci.set(0, 0, K);
              b.ricci.set(1, 1, K * fv * G);
              b.scalar = 2.0 * K;
              b.gauss = K;
              return b;
            };
          }
          return out;
        }
      },
      kind);
}

// ---- closed-form catalog ------------------------------------------------------

namespace {

const TimePotential& conformal_potential(const FlowKind& kind,
                                         TimePotential& storage) {
  if (const auto* c = std::get_if<ConformalFlow>(&kind)) return c->f;
  storage = power_potential(1.0);
  return storage;
}

const MetricField& conformal_base(const FlowKind& kind) {
  if (const auto* c = std::get_if<ConformalFlow>(&kind)) return c->base;
  return std::get<ConeFlow>(kind).base;
}

CurvatureBundle base_curvature_or_throw(const MetricField& base, const Point& p) {
  if (!base.exact_curvature)
    throw PreconditionError("closed form needs base curvature data");
  return base.exact_curvature(0.0, p);
}

double antideriv_inv(const TimePotential& f, double t) {
  if (f.inv_antideriv) return f.inv_antideriv(t);
  return fd::integrate([&](double s) { return 1.0 / f.value(s); }, 0.0, t);
}

double antideriv_invsqrt(const TimePotential& f, double t) {
  if (f.invsqrt_antideriv) return f.invsqrt_antideriv(t);
  return fd::integrate([&](double s) { return 1.0 / std::sqrt(f.value(s)); }, 0.0, t);
}

}  // namespace

std::optional<std::pair<SymTensor2, double>> closed_form_ric_scalar(const FlowKind& kind,
                                                              double t,
                                                              const Point& p) {
  if (std::holds_alternative<ConformalFlow>(kind) ||
      std::holds_alternative<ConeFlow>(kind)) {
    TimePotential storage;
    const TimePotential& f = conformal_potential(kind, storage);
    const MetricField& base = conformal_base(kind);
    CurvatureBundle b = base_curvature_or_throw(base, p);
    return std::make_pair(b.ricci, b.scalar / f.value(t));
  }
  if (const auto* fl = std::get_if<PoincareFlow>(&kind)) {
    const int n = fl->dim;
    double y = poincare_height(*fl, p);
    SymTensor2 ric(n);
    double diag = ((2.0 - n) * t * t - 2.0 * t) / (4.0 * y * y);
    for (int i = 0; i + 1 < n; ++i) ric.set(i, i, diag);
    ric.set(n - 1, n - 1, (1.0 - n) * t / (2.0 * y * y));
    double scal =
        (1.0 - n) * std::pow(y, t - 2.0) * (t + (n - 2.0) * t * t / 4.0);
    return std::make_pair(ric, scal);
  }
  return std::nullopt;
}

SymTensor2 closed_form_ry(const FlowKind& kind, double t, const Point& p,
                    const RYParams& params) {
  const double a = params.alpha, b = params.beta;
  return std::visit(
      [&](const auto& fl) -> SymTensor2 {
        using T = std::decay_t<decltype(fl)>;

        if constexpr (std::is_same_v<T, ConformalFlow> ||
                      std::is_same_v<T, ConeFlow>) {
          TimePotential storage;
          const TimePotential& f = conformal_potential(kind, storage);
          const MetricField& base = conformal_base(kind);
          CurvatureBundle cb = base_curvature_or_throw(base, p);
          SymTensor2 g0 = base.eval(0.0, p);
          return g0 * (f.deriv(t) + b * cb.scalar) + cb.ricci * (2.0 * a);
        } else if constexpr (std::is_same_v<T, ConvexEuclideanFlow>) {
          if (!fl.E.grad || !fl.E.hess)
            throw PreconditionError(
                "closed form needs gradient and Hessian of E");
          double e = fl.E.value(p[0], p[1]);
          auto gr = fl.E.grad(p[0], p[1]);
          auto he = fl.E.hess(p[0], p[1]);
          double l = (1.0 - t) * e + t;
          double lu = (1.0 - t) * gr[0], lv = (1.0 - t) * gr[1];
          double dl = (1.0 - t) * (he[0] + he[2]);
          double loglap = (l * dl - (lu * lu + lv * lv)) / (l * l);
          return SymTensor2::identity(2) * (1.0 - e - (a + b) * loglap);
        } else if constexpr (std::is_same_v<T, PoincareFlow>) {
          const int n = fl.dim;
          double y = poincare_height(fl, p);
          double y2 = y * y;
          double A = (1.0 - n) * b * (t + (n - 2.0) * t * t / 4.0) -
                     std::pow(y, 2.0 - t) * std::log(y);
          double B = ((1.0 - 0.5 * n) * t * t - t) * a;
          double C = (1.0 - n) * a * t;
          SymTensor2 ry(n);
          for (int i = 0; i + 1 < n; ++i) ry.set(i, i, (A + B) / y2);
          ry.set(n - 1, n - 1, (A + C) / y2);
          return ry;
        } else if constexpr (std::is_same_v<T, GeneralizedCigarFlow>) {
          double s = cigar_denominator(fl.f, t, p);
          double coef = (4.0 * (a + b) * fl.f.value(t) - fl.f.deriv(t)) / (s * s);
          return SymTensor2::identity(2) * coef;
        } else if constexpr (std::is_same_v<T, WarpedRotSymFlow>) {
          SnK sn{fl.k};
          double s = sn.value(p[0]);
          double fv = fl.f.value(t);
          double c1 = 2.0 * fl.k * (a + b) / std::sqrt(fv);
          SymTensor2 ry(2);
          ry.set(0, 0, -c1);
          ry.set(1, 1, fl.f.deriv(t) * s * s - c1 * fv * s * s);
          return ry;
        } else {
          static_assert(std::is_same_v<T, WarpedGeneralFlow>);
          double G = fl.G.value(p[0]);
          if (!fl.G.deriv || !fl.G.deriv2)
            throw PreconditionError("closed form needs two profile derivatives");
          double Gp = fl.G.deriv(p[0]);
          double Gpp = fl.G.deriv2(p[0]);
          double fv = fl.f.value(t);
          // Delta ln G read as the plain second
          // u-derivative of ln G
          double loglap = Gpp / G - (Gp / G) * (Gp / G);
          double c1 = (a + b) * loglap / std::sqrt(fv * G);
          SymTensor2 ry(2);
          ry.set(0, 0, -c1);
          ry.set(1, 1, fl.f.deriv(t) * G - c1 * fv * G);
          return ry;
        }
      },
      kind);
}

SymTensor2 warped_ry_direct(const FlowKind& kind, double t, const Point& p,
                             const RYParams& params) {
  const double s2 = 2.0 * params.sum();
  if (const auto* fl = std::get_if<WarpedRotSymFlow>(&kind)) {
    SnK sn{fl->k};
    double s = sn.value(p[0]);
    double fv = fl->f.value(t);
    double K = fl->k;
    SymTensor2 ry(2);
    ry.set(0, 0, s2 * K);
    ry.set(1, 1, fl->f.deriv(t) * s * s + s2 * K * fv * s * s);
    return ry;
  }
  if (const auto* fl = std::get_if<WarpedGeneralFlow>(&kind)) {
    if (!fl->G.deriv || !fl->G.deriv2)
      throw PreconditionError("derived form needs two profile derivatives");
    double G = fl->G.value(p[0]);
    double Gp = fl->G.deriv(p[0]);
    double Gpp = fl->G.deriv2(p[0]);
    double fv = fl->f.value(t);
    double K = -(Gpp / (2.0 * G) - Gp * Gp / (4.0 * G * G));
    SymTensor2 ry(2);
    ry.set(0, 0, s2 * K);
    ry.set(1, 1, fl->f.deriv(t) * G + s2 * K * fv * G);
    return ry;
  }
  throw PreconditionError("derived form only covers the warped families");
}

VolumeVariation closed_form_volume_variation(const FlowKind& kind, double t,
                                       const Point& p, const RYParams& params) {
  const double a = params.alpha, b = params.beta;
  VolumeVariation out;

  if (std::holds_alternative<ConformalFlow>(kind) ||
      std::holds_alternative<ConeFlow>(kind)) {
    TimePotential storage;
    const TimePotential& f = conformal_potential(kind, storage);
    const MetricField& base = conformal_base(kind);
    const int n = base.dim;
    CurvatureBundle cb = base_curvature_or_throw(base, p);
    double fv = f.value(t);
    double mix = params.mix(n);
    out.rate = (n * f.deriv(t) + mix * cb.scalar) / fv;
    out.accumulated = n * std::log(fv) + mix * cb.scalar * antideriv_inv(f, t);
    return out;
  }
  if (const auto* fl = std::get_if<PoincareFlow>(&kind)) {
    if (fl->dim != 2)
      throw PreconditionError("tabulated volume variation covers the 2D case only");
    double y = poincare_height(*fl, p);
    out.rate = -(a + b) * t - std::pow(y, 2.0 - t) * std::log(y);
    out.accumulated = -(a + b) * t * t / 2.0 + std::pow(y, 2.0 - t);
    return out;
  }
  if (const auto* fl = std::get_if<GeneralizedCigarFlow>(&kind)) {
    double s = cigar_denominator(fl->f, t, p);
    out.rate = (4.0 * (a + b) * fl->f.value(t) - fl->f.deriv(t)) / s;
    return out;
  }
  if (const auto* fl = std::get_if<WarpedRotSymFlow>(&kind)) {
    double fv = fl->f.value(t);
    out.rate = fl->f.deriv(t) / fv - 4.0 * fl->k * (a + b) / std::sqrt(fv);
    out.accumulated =
        std::log(fv) - 4.0 * fl->k * (a + b) * antideriv_invsqrt(fl->f, t);
    return out;
  }
  throw PreconditionError("no tabulated volume variation for this flow");
}

TimePotential cigar_steady_potential(const RYParams& params) {
  return exp_potential(4.0 * params.sum());
}

}  // namespace ryflow
