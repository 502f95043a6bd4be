#include "ryflow/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace ryflow {

SymTensor2 SymTensor2::operator+(const SymTensor2& o) const {
  SymTensor2 r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

SymTensor2 SymTensor2::operator-(const SymTensor2& o) const {
  SymTensor2 r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

SymTensor2 SymTensor2::operator*(double s) const {
  SymTensor2 r = *this;
  for (double& v : r.a_) v *= s;
  return r;
}

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

double SymTensor2::sup_norm() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

// LU decomposition with partial pivoting on a dense copy; returns false when
// the matrix is numerically singular.
bool lu_decompose(std::vector<double>& m, int n, std::vector<int>& piv, double& detsign) {
  detsign = 1.0;
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double bestv = std::fabs(m[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::fabs(m[static_cast<std::size_t>(r) * n + col]);
      if (v > bestv) {
        bestv = v;
        best = r;
      }
    }
    if (bestv == 0.0) return false;
    if (best != col) {
      for (int c = 0; c < n; ++c)
        std::swap(m[static_cast<std::size_t>(best) * n + c],
                  m[static_cast<std::size_t>(col) * n + c]);
      std::swap(piv[best], piv[col]);
      detsign = -detsign;
    }
    double d = m[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = m[static_cast<std::size_t>(r) * n + col] / d;
      m[static_cast<std::size_t>(r) * n + col] = f;
      for (int c = col + 1; c < n; ++c)
        m[static_cast<std::size_t>(r) * n + c] -= f * m[static_cast<std::size_t>(col) * n + c];
    }
  }
  return true;
}

}  // namespace

double SymTensor2::det() const {
  if (n_ == 1) return (*this)(0, 0);
  if (n_ == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(0, 1);
  std::vector<double> m(a_);
  std::vector<int> piv(static_cast<std::size_t>(n_));
  double sign;
  if (!lu_decompose(m, n_, piv, sign)) return 0.0;
  double d = sign;
  for (int i = 0; i < n_; ++i) d *= m[static_cast<std::size_t>(i) * n_ + i];
  return d;
}

SymTensor2 SymTensor2::inverse() const {
  SymTensor2 inv(n_);
  if (n_ == 1) {
    double d = (*this)(0, 0);
    if (d == 0.0) throw DegenerateMetricError("singular 1x1 tensor");
    inv.set(0, 0, 1.0 / d);
    return inv;
  }
  if (n_ == 2) {
    double d = det();
    if (d == 0.0) throw DegenerateMetricError("singular 2x2 tensor");
    inv.set(0, 0, (*this)(1, 1) / d);
    inv.set(1, 1, (*this)(0, 0) / d);
    inv.set(0, 1, -(*this)(0, 1) / d);
    return inv;
  }
  std::vector<double> m(a_);
  std::vector<int> piv(static_cast<std::size_t>(n_));
  double sign;
  if (!lu_decompose(m, n_, piv, sign))
    throw DegenerateMetricError("singular tensor in inverse()");
  // solve for each unit vector, then symmetrize against rounding
  std::vector<double> full(static_cast<std::size_t>(n_) * n_, 0.0);
  std::vector<double> y(static_cast<std::size_t>(n_));
  for (int col = 0; col < n_; ++col) {
    for (int i = 0; i < n_; ++i) {
      double s = (piv[i] == col) ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) s -= m[static_cast<std::size_t>(i) * n_ + j] * y[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = y[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n_; ++j)
        s -= m[static_cast<std::size_t>(i) * n_ + j] * full[static_cast<std::size_t>(j) * n_ + col];
      full[static_cast<std::size_t>(i) * n_ + col] = s / m[static_cast<std::size_t>(i) * n_ + i];
    }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      inv.set(i, j, 0.5 * (full[static_cast<std::size_t>(i) * n_ + j] +
                           full[static_cast<std::size_t>(j) * n_ + i]));
  return inv;
}

std::vector<double> SymTensor2::eigenvalues() const {
  const int n = n_;
  std::vector<double> m(a_);
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n + j]; };

  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::fabs(at(i, j)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (std::fabs(apq) <= 1e-18 * scale) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double tau = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(tau * tau + 1.0);
        double s = tau * c;
        for (int k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double SymTensor2::contract(const SymTensor2& w) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += w(i, j) * (*this)(i, j);
  return s;
}

bool SymTensor2::positive_definite() const {
  for (double e : eigenvalues())
    if (!(e > 0.0)) return false;
  return true;
}

Tensor3 Tensor3::operator+(const Tensor3& o) const {
  Tensor3 r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Tensor3 Tensor3::operator-(const Tensor3& o) const {
  Tensor3 r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Tensor3 Tensor3::operator*(double s) const {
  Tensor3 r = *this;
  for (double& v : r.a_) v *= s;
  return r;
}

double Tensor3::sup_norm() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace ryflow
