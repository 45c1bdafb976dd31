#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "levikit/common.hpp"

namespace levikit {

/// Dense row-major complex matrix; sizes here are tiny (n <= 8), so no
/// attempt is made at blocking or expression templates.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  CMatrix adjoint() const {
    CMatrix a(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  CMatrix operator*(const CMatrix& o) const {
    CMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        cplx a = (*this)(i, k);
        if (a == cplx(0.0)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  CMatrix operator-(const CMatrix& o) const {
    CMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  CMatrix operator+(const CMatrix& o) const {
    CMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
  }

  CMatrix operator*(cplx s) const {
    CMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
  }

  std::vector<cplx> operator*(const std::vector<cplx>& v) const {
    std::vector<cplx> r(rows_, cplx(0.0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  double frobenius() const {
    double s = 0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double hermitian_residual() const {
    double r = 0;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r = std::max(r, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return r;
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

inline double vec_norm(const std::vector<cplx>& v) {
  double s = 0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline cplx vec_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  // Hermitian inner product <a, b> = sum a_k conj(b_k)
  cplx s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

/// Determinant via complex LU with partial pivoting.
inline cplx lu_det(CMatrix a) {
  int n = a.rows();
  if (n == 0) return cplx(1.0);
  cplx det(1.0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    if (best == 0.0) return cplx(0.0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      cplx f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

enum class SweepOrder { RowMajor, ColumnMajor };

struct SymmetricEig {
  std::vector<double> values;            // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th eigenvector
  int sweeps = 0;
};

/// Cyclic Jacobi for a real symmetric matrix. The sweep order is
/// deterministic; `order` selects between the two cyclic orderings so that
/// callers can cross-check invariance of derived quantities.
inline SymmetricEig jacobi_symmetric(std::vector<std::vector<double>> a,
                                     SweepOrder order = SweepOrder::RowMajor,
                                     int max_sweeps = 60) {
  int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  double norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += a[i][j] * a[i][j];
  norm = std::sqrt(norm);
  const double stop = 1e-14 * (norm > 0 ? norm : 1.0);

  auto off = [&]() {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2 * a[i][j] * a[i][j];
    return std::sqrt(s);
  };

  auto rotate = [&](int p, int q) {
    double apq = a[p][q];
    if (apq == 0.0) return;
    double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    double c = 1.0 / std::sqrt(t * t + 1.0);
    double s = t * c;
    for (int k = 0; k < n; ++k) {
      double akp = a[k][p], akq = a[k][q];
      a[k][p] = c * akp - s * akq;
      a[k][q] = s * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
      double apk = a[p][k], aqk = a[q][k];
      a[p][k] = c * apk - s * aqk;
      a[q][k] = s * apk + c * aqk;
    }
    for (int k = 0; k < n; ++k) {
      double vkp = v[k][p], vkq = v[k][q];
      v[k][p] = c * vkp - s * vkq;
      v[k][q] = s * vkp + c * vkq;
    }
  };

  int sweeps = 0;
  while (off() > stop && sweeps < max_sweeps) {
    if (order == SweepOrder::RowMajor) {
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) rotate(p, q);
    } else {
      for (int q = 1; q < n; ++q)
        for (int p = 0; p < q; ++p) rotate(p, q);
    }
    ++sweeps;
  }
  if (off() > stop) throw NumericError("jacobi_symmetric: no convergence after max sweeps");

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });

  SymmetricEig out;
  out.sweeps = sweeps;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    out.values[k] = a[idx[k]][idx[k]];
    for (int i = 0; i < n; ++i) out.vectors[k][i] = v[i][idx[k]];
  }
  return out;
}

struct HermitianEig {
  std::vector<double> values;          // ascending
  std::vector<std::vector<cplx>> vectors;  // orthonormal, phase-fixed
};

/// Multiply an eigenvector by a unit phase so that its first component of
/// non-negligible modulus is real and positive. Makes output deterministic.
inline void fix_phase(std::vector<cplx>& v) {
  double mx = 0;
  for (const cplx& z : v) mx = std::max(mx, std::abs(z));
  if (mx == 0) return;
  for (const cplx& z : v) {
    if (std::abs(z) > 1e-8 * mx) {
      cplx phase = z / std::abs(z);
      for (cplx& w : v) w /= phase;
      break;
    }
  }
}

/// Hermitian eigensystem via the real-symmetric embedding
/// [[X, -Y], [Y, X]] of H = X + iY, diagonalized by cyclic Jacobi.
/// Embedding eigenvalues come in duplicate pairs; every second sorted value
/// is kept. Eigenvectors are recovered per near-equal group by complex
/// Gram-Schmidt over the images u + i w of the embedding vectors [u; w].
inline HermitianEig hermitian_eigensystem(const CMatrix& h,
                                          SweepOrder order = SweepOrder::RowMajor) {
  int n = h.rows();
  if (n == 0) return {};
  if (h.hermitian_residual() > 1e-10 * (1.0 + h.frobenius()))
    throw NumericError("hermitian_eigensystem: input is not Hermitian");

  std::vector<std::vector<double>> e(2 * n, std::vector<double>(2 * n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = 0.5 * (h(i, j).real() + h(j, i).real());
      double y = 0.5 * (h(i, j).imag() - h(j, i).imag());
      e[i][j] = x;
      e[n + i][n + j] = x;
      e[i][n + j] = -y;
      e[n + i][j] = y;
    }

  SymmetricEig se = jacobi_symmetric(std::move(e), order);

  double scale = 0;
  for (double d : se.values) scale = std::max(scale, std::abs(d));
  const double group_tol = 1e-8 * (1.0 + scale);

  HermitianEig out;
  out.values.reserve(n);
  for (int k = 0; k < 2 * n; k += 2) out.values.push_back(0.5 * (se.values[k] + se.values[k + 1]));

  auto to_complex = [&](const std::vector<double>& w) {
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(w[i], w[n + i]);
    return v;
  };

  // Walk groups of (embedding-)equal eigenvalues and extract an orthonormal
  // complex basis of half the group size from the embedded eigenvectors.
  int k = 0;
  while (k < 2 * n) {
    int k2 = k + 1;
    while (k2 < 2 * n && se.values[k2] - se.values[k2 - 1] <= group_tol) ++k2;
    int want = (k2 - k) / 2;
    std::vector<std::vector<cplx>> basis;
    for (int m = k; m < k2 && static_cast<int>(basis.size()) < want; ++m) {
      std::vector<cplx> v = to_complex(se.vectors[m]);
      for (const auto& b : basis) {
        cplx proj = vec_dot(v, b);
        for (int i = 0; i < n; ++i) v[i] -= proj * b[i];
      }
      double nv = vec_norm(v);
      if (nv > 0.3) {
        for (cplx& z : v) z /= nv;
        fix_phase(v);
        basis.push_back(std::move(v));
      }
    }
    if (static_cast<int>(basis.size()) != want)
      throw NumericError("hermitian_eigensystem: eigenvector recovery failed in a degenerate group");
    for (auto& b : basis) out.vectors.push_back(std::move(b));
    k = k2;
  }
  if (static_cast<int>(out.vectors.size()) != n)
    throw NumericError("hermitian_eigensystem: eigenvector count mismatch");
  return out;
}

}  // namespace levikit
