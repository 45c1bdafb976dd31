#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "levikit/expr.hpp"
#include "levikit/linalg.hpp"

namespace levikit::levi {

using expr::DefiningFunction;
using expr::Jet2;
using expr::ParamMap;

struct BoundaryPoint {
  std::vector<cplx> coordinates;
  double residual = 0.0;  // |rho| there
  Jet2 jet;
};

/// Newton projection of a seed onto {rho = 0} along the real gradient ray,
/// falling back to bisection when a full step overshoots past a sign change.
inline BoundaryPoint project_to_boundary(const DefiningFunction& f, std::vector<cplx> point,
                                         const ParamMap& overrides = {},
                                         const Tolerances& tol = {}) {
  int n = f.n;
  Jet2 jet = expr::eval_jet2(f, point, overrides);
  for (int iter = 0; iter < tol.newton_max_iter; ++iter) {
    double rho = jet.value;
    double grad = jet.grad_norm();
    if (std::abs(rho) <= tol.boundary * (1.0 + grad)) {
      BoundaryPoint p;
      p.coordinates = std::move(point);
      p.residual = std::abs(rho);
      p.jet = std::move(jet);
      return p;
    }
    if (grad < tol.degenerate_grad)
      throw NumericError("project_to_boundary: degenerate gradient |grad rho| = " +
                         std::to_string(grad));
    // Real gradient from Wirtinger data: rho_x = 2 Re dz, rho_y = -2 Im dz.
    // Euclidean step length -rho/|D rho|^2 with |D rho|^2 = 4 |dbar rho|^2.
    double d2 = 0;
    for (const cplx& z : jet.dz) d2 += std::norm(z);
    d2 *= 4.0;
    double step = -rho / d2;
    std::vector<cplx> trial(n);
    double factor = 1.0;
    bool accepted = false;
    for (int cut = 0; cut < 60 && !accepted; ++cut) {
      for (int j = 0; j < n; ++j) {
        double dx = 2.0 * jet.dz[j].real();
        double dy = -2.0 * jet.dz[j].imag();
        trial[j] = point[j] + factor * step * cplx(dx, dy);
      }
      Jet2 jt = expr::eval_jet2(f, trial, overrides);
      // Accept when the residual shrank; otherwise the step overshot (sign
      // change past the zero set), so bisect along the ray.
      if (std::abs(jt.value) < std::abs(rho)) {
        point.swap(trial);
        jet = std::move(jt);
        accepted = true;
      } else {
        factor *= 0.5;
      }
    }
    if (!accepted)
      throw NumericError("project_to_boundary: no residual decrease along the gradient ray");
  }
  throw NumericError("project_to_boundary: no convergence after " +
                     std::to_string(tol.newton_max_iter) + " iterations; last residual " +
                     std::to_string(jet.value));
}

/// Orthonormal basis {L_1..L_n} of (1,0) vector fields with the first n-1
/// tangential; row j holds the coefficients of L_j in the d/dz basis.
struct Frame {
  CMatrix rows;  // n x n, unitary
  int pivot = 0; // coordinate index that plays the role of z_n

  std::vector<cplx> row(int j) const {
    std::vector<cplx> r(rows.cols());
    for (int k = 0; k < rows.cols(); ++k) r[k] = rows(j, k);
    return r;
  }
};

/// Frame construction. The coordinate with the largest |drho/dz_j| is
/// permuted into the z_n slot so the normal coefficient never vanishes; the
/// permutation is undone in the returned coefficients.
inline Frame tangential_frame(const Jet2& jet, const Tolerances& tol = {}) {
  int n = jet.dimension();
  double dbar = jet.dbar_norm();
  if (dbar < tol.degenerate_grad) throw NumericError("tangential_frame: zero gradient");

  int pivot = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(jet.dz[j]) > std::abs(jet.dz[pivot])) pivot = j;

  // perm maps permuted slot -> original coordinate; slot n-1 is the pivot.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[n - 1], perm[pivot]);

  std::vector<cplx> dz(n), dzbar(n);
  for (int s = 0; s < n; ++s) {
    dz[s] = jet.dz[perm[s]];
    dzbar[s] = std::conj(dz[s]);
  }

  double pn = std::abs(dz[n - 1]);
  std::vector<cplx> a(n), b(n);
  for (int j = 0; j < n; ++j) a[j] = dzbar[j] / dbar;
  for (int j = 0; j < n - 1; ++j) b[j] = dzbar[j] / (dbar + pn);
  b[n - 1] = dzbar[n - 1] / pn;

  CMatrix rows(n, n);
  for (int j = 0; j < n - 1; ++j) {
    rows(j, perm[j]) += 1.0;
    cplx c = std::conj(a[j]);
    for (int k = 0; k < n; ++k) rows(j, perm[k]) -= c * b[k];
  }
  for (int k = 0; k < n; ++k) rows(n - 1, perm[k]) = a[k];

  Frame fr;
  fr.rows = std::move(rows);
  fr.pivot = pivot;
  return fr;
}

/// Levi form in the tangential frame:
/// entry(j,k) = sum_{a,b} (L_j)_a rho_{a bbar} conj((L_k)_b), 0 <= j,k < n-1.
inline CMatrix levi_matrix(const Jet2& jet, const Frame& frame) {
  int n = jet.dimension();
  CMatrix m(n - 1, n - 1);
  for (int j = 0; j < n - 1; ++j)
    for (int k = 0; k < n - 1; ++k) {
      cplx s = 0;
      for (int p = 0; p < n; ++p) {
        if (frame.rows(j, p) == cplx(0.0)) continue;
        for (int q = 0; q < n; ++q)
          s += frame.rows(j, p) * jet.dzdzbar(p, q) * std::conj(frame.rows(k, q));
      }
      m(j, k) = s;
    }
  // Exact Hermitian symmetrization (construction guarantees it up to rounding).
  for (int j = 0; j < n - 1; ++j) {
    m(j, j) = m(j, j).real();
    for (int k = j + 1; k < n - 1; ++k) {
      cplx avg = 0.5 * (m(j, k) + std::conj(m(k, j)));
      m(j, k) = avg;
      m(k, j) = std::conj(avg);
    }
  }
  return m;
}

struct LeviSpectrum {
  std::vector<double> eigenvalues;           // ascending, size n-1
  std::vector<std::vector<cplx>> eigenvectors;  // in the frame basis
  double scale = 0.0;                        // max |lambda|

  int count() const { return static_cast<int>(eigenvalues.size()); }
  double sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }
  double product() const {
    double p = 1;
    for (double v : eigenvalues) p *= v;
    return p;
  }
};

inline LeviSpectrum levi_spectrum(const CMatrix& m, SweepOrder order = SweepOrder::RowMajor) {
  if (m.hermitian_residual() > 1e-10 * (1.0 + m.frobenius()))
    throw NumericError("levi_spectrum: matrix is not Hermitian");
  HermitianEig eig = hermitian_eigensystem(m, order);
  LeviSpectrum s;
  s.eigenvalues = eig.values;
  s.eigenvectors = eig.vectors;
  for (double v : s.eigenvalues) s.scale = std::max(s.scale, std::abs(v));
  return s;
}

/// Trace of the Levi form directly from the jet, no frame needed:
/// sum_j rho_{j jbar} - |drho|^{-2} sum_{k,l} rho_{kbar} rho_{k lbar} rho_l.
inline double levi_trace_formula(const Jet2& jet) {
  int n = jet.dimension();
  double dbar2 = 0;
  for (const cplx& z : jet.dz) dbar2 += std::norm(z);
  if (dbar2 <= 0) throw NumericError("levi_trace_formula: zero gradient");
  cplx full = 0, proj = 0;
  for (int j = 0; j < n; ++j) full += jet.dzdzbar(j, j);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) proj += std::conj(jet.dz[k]) * jet.dzdzbar(k, l) * jet.dz[l];
  return full.real() - proj.real() / dbar2;
}

/// Determinant of the Levi form from the non-orthonormal basis
/// L_j = d/dz_j - (rho_n)^{-1} rho_j d/dz_n (after pivot permutation):
/// |rho_n|^2 |drho|^{-2} det(Hess(L_j, Lbar_k) rho).
inline double levi_det_formula(const Jet2& jet, const Tolerances& tol = {}) {
  int n = jet.dimension();
  int pivot = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(jet.dz[j]) > std::abs(jet.dz[pivot])) pivot = j;
  if (std::abs(jet.dz[pivot]) < tol.degenerate_grad)
    throw NumericError("levi_det_formula: vanishing pivot derivative");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[n - 1], perm[pivot]);

  cplx rho_n = jet.dz[perm[n - 1]];
  double dbar2 = 0;
  for (const cplx& z : jet.dz) dbar2 += std::norm(z);

  CMatrix h(n - 1, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    cplx cj = jet.dz[perm[j]] / rho_n;
    for (int k = 0; k < n - 1; ++k) {
      cplx ck = jet.dz[perm[k]] / rho_n;
      cplx s = jet.dzdzbar(perm[j], perm[k]) - cj * jet.dzdzbar(perm[n - 1], perm[k]) -
               std::conj(ck) * jet.dzdzbar(perm[j], perm[n - 1]) +
               cj * std::conj(ck) * jet.dzdzbar(perm[n - 1], perm[n - 1]);
      h(j, k) = s;
    }
  }
  cplx det = lu_det(h);
  return std::norm(rho_n) / dbar2 * det.real();
}

struct PointAnalysis {
  BoundaryPoint point;
  Frame frame;
  CMatrix levi;
  LeviSpectrum spectrum;
  double trace_formula = 0.0;
  double det_formula = 0.0;
};

/// Projection followed by the full frame/spectrum pipeline at one point.
inline PointAnalysis analyze_point(const DefiningFunction& f, const std::vector<cplx>& seed,
                                   const ParamMap& overrides = {}, const Tolerances& tol = {}) {
  PointAnalysis a;
  a.point = project_to_boundary(f, seed, overrides, tol);
  a.frame = tangential_frame(a.point.jet, tol);
  a.levi = levi_matrix(a.point.jet, a.frame);
  a.spectrum = levi_spectrum(a.levi);
  a.trace_formula = levi_trace_formula(a.point.jet);
  a.det_formula = levi_det_formula(a.point.jet, tol);
  return a;
}

}  // namespace levikit::levi
