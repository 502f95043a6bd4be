#pragma once

#include "ryflow/tensor.hpp"

#include <functional>

namespace ryflow {

using ScalarPointField = std::function<double(const Point&)>;
using Sym2PointField = std::function<SymTensor2(const Point&)>;

/// dg[k](i,j) = partial_k g_ij at (t, p) by central differences.
Tensor3 metric_partials(const MetricField& g, double t, const Point& p,
                        const DiffSpec& spec);

/// Levi-Civita connection coefficients Gamma^k_ij, stored as (k,i,j).
Tensor3 christoffel(const MetricField& g, double t, const Point& p,
                    const DiffSpec& spec);

/// Connection, Ricci tensor and scalar curvature from nested differencing.
///
/// Curvature convention is fixed by the contraction Ric_ij = R^m_(m i j) of
/// R^l_(ijk) = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
///           - Gamma^l_jm Gamma^m_ik,
/// which makes the standard hyperbolic half-plane come out at R = -2.
CurvatureBundle curvature(const MetricField& g, double t, const Point& p,
                          const DiffSpec& spec);

/// Gaussian curvature of the 2D isothermal metric lam*(du^2+dv^2):
/// K = -(1/(2 lam)) * flat-Laplacian of ln(lam).
double gauss_isothermal(const std::function<double(double, double)>& lam,
                        double u, double v, const DiffSpec& spec);

/// Laplace-Beltrami of a scalar field in divergence form,
/// (1/sqrt det g) d_i(sqrt det g g^ij d_j f).
double laplace_beltrami(const ScalarPointField& f, const MetricField& g,
                        double t, const Point& p, const DiffSpec& spec);

/// Riemannian volume density sqrt(det g).
double volume_form(const MetricField& g, double t, const Point& p);

/// Covariant derivative of a symmetric 2-tensor field:
/// out[l](i,j) = d_l T_ij - Gamma^m_li T_mj - Gamma^m_lj T_im.
Tensor3 covariant_derivative_sym2(const Sym2PointField& T, const MetricField& g,
                                  double t, const Point& p, const DiffSpec& spec);

namespace detail {
// Single-step (no extrapolation) variants reused by composite evaluations.
Tensor3 christoffel_raw(const MetricField& g, double t, const Point& p,
                        double h, int order);
CurvatureBundle curvature_raw(const MetricField& g, double t, const Point& p,
                              double h, int order);
SymTensor2 metric_checked(const MetricField& g, double t, const Point& p);
}  // namespace detail

}  // namespace ryflow
