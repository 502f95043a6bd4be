#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ryflow {

/// Coordinate tuple on a chart domain.
struct Point {
  std::vector<double> x;

  Point() = default;
  Point(std::initializer_list<double> v) : x(v) {}
  explicit Point(std::vector<double> v) : x(std::move(v)) {}

  int dim() const { return static_cast<int>(x.size()); }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

  /// Copy with coordinate k displaced by delta.
  Point shifted(int k, double delta) const {
    Point q = *this;
    q[k] += delta;
    return q;
  }
};

/// Raised on evaluation outside a field's chart domain (or non-finite values).
struct EvaluationDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a metric fails positive-definiteness / invertibility checks.
struct DegenerateMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a positivity precondition (conformal factor, curvature) fails.
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's structural precondition is not met.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symmetric rank-2 tensor (dense storage, writes mirrored so T(i,j) == T(j,i) exactly).
class SymTensor2 {
 public:
  SymTensor2() = default;
  explicit SymTensor2(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  static SymTensor2 identity(int n) {
    SymTensor2 t(n);
    for (int i = 0; i < n; ++i) t.set(i, i, 1.0);
    return t;
  }

  int dim() const { return n_; }

  double operator()(int i, int j) const { return a_[idx(i, j)]; }

  /// Sets both (i,j) and (j,i).
  void set(int i, int j, double v) {
    a_[idx(i, j)] = v;
    a_[idx(j, i)] = v;
  }

  void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

  SymTensor2 operator+(const SymTensor2& o) const;
  SymTensor2 operator-(const SymTensor2& o) const;
  SymTensor2 operator*(double s) const;
  SymTensor2& operator+=(const SymTensor2& o);

  /// Largest absolute entry.
  double sup_norm() const;

  double det() const;
  SymTensor2 inverse() const;  // throws DegenerateMetricError when singular

  /// Eigenvalues by cyclic Jacobi rotations, ascending order.
  std::vector<double> eigenvalues() const;

  /// Sum_ij w(i,j) * T(i,j); with w the inverse metric this is the metric trace.
  double contract(const SymTensor2& w) const;

  bool positive_definite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> a_;
};

inline SymTensor2 operator*(double s, const SymTensor2& t) { return t * s; }

/// Rank-3 array T[i][j][k], i,j,k < n (Christoffel symbols, metric partials).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n)
      : n_(n), a_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }

  double operator()(int i, int j, int k) const { return a_[idx(i, j, k)]; }
  double& at(int i, int j, int k) { return a_[idx(i, j, k)]; }

  Tensor3 operator+(const Tensor3& o) const;
  Tensor3 operator-(const Tensor3& o) const;
  Tensor3 operator*(double s) const;

  double sup_norm() const;

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> a_;
};

inline Tensor3 operator*(double s, const Tensor3& t) { return t * s; }

/// Finite-difference controls shared by all pointwise geometric operations.
///
/// `step` is the stencil spacing, `order` the base accuracy order (2 or 4).
/// With `richardson` set, the whole evaluation is repeated at step/2 and
/// extrapolated, which raises the observed order of composite quantities
/// (curvature, covariant derivatives) by two.
struct DiffSpec {
  double step = 1e-3;
  int order = 2;
  bool richardson = true;

  void validate() const {
    if (!(step > 0.0)) throw PreconditionError("DiffSpec: step must be positive");
    if (order != 2 && order != 4)
      throw PreconditionError("DiffSpec: order must be 2 or 4");
  }

  DiffSpec refined(double factor) const { return {step * factor, order, richardson}; }
};

/// Christoffel symbols plus Ricci data at a single (t, point).
struct CurvatureBundle {
  Tensor3 christoffel;   // Gamma^k_ij stored as (k,i,j)
  SymTensor2 ricci;
  double scalar = 0.0;
  std::optional<double> gauss;  // scalar/2, set when dim == 2
};

/// Time-dependent metric on a coordinate chart.
///
/// `eval` must return a positive-definite symmetric tensor of size `dim`.
/// The optional oracles short-circuit finite differencing where an analytic
/// form is known; operations fall back to numerics when they are absent.
struct MetricField {
  int dim = 0;
  std::function<SymTensor2(double t, const Point&)> eval;
  std::function<SymTensor2(double t, const Point&)> exact_dt;
  std::function<CurvatureBundle(double t, const Point&)> exact_curvature;
};

}  // namespace ryflow
