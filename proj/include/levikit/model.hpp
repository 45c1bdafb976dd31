#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "levikit/conditions.hpp"
#include "levikit/levi.hpp"
#include "levikit/quadrature.hpp"

namespace levikit::model {

using conditions::VerdictKind;
using expr::Jet2;

/// Levi data of the quadric model at an anchor point.
struct ModelData {
  std::vector<double> lambda;  // ascending
  int q = 1;
  double A_candidate = 0.0;
};

/// Product-Gaussian profile exp(-sum_j s_j |w_j|^2) standing in for the
/// compactly supported test factor.
struct GaussianProfile {
  std::vector<double> s;
  double truncation_radius = 0.0;  // 0 -> choose automatically
  int nodes = 96;
};

inline double default_truncation_radius(double sigma) {
  double r = 6.0 / std::sqrt(2.0 * sigma);
  return std::clamp(r, 1e-3, 1e3);
}

/// One-variable ratio
///   int |d/dwbar e^{-s|w|^2}|^2 e^{-2 lambda |w|^2} / int e^{-2 s|w|^2} e^{-2 lambda |w|^2}
/// by radial Gauss-Legendre quadrature on [0, R]. Closed form (used as the
/// test oracle, not here): s^2 / (2 (s + lambda)).
inline double gaussian_ratio(double lambda, double s, double R = 0.0, int nodes = 96) {
  double sigma = s + lambda;
  if (lambda < 0 && !(sigma > 0))
    throw NumericError("gaussian_ratio: non-integrable combination s + lambda <= 0");
  if (s < 0 || (s == 0 && lambda == 0))
    throw NumericError("gaussian_ratio: need s >= 0 and s + lambda > 0");
  if (s == 0) return 0.0;
  if (R <= 0) R = default_truncation_radius(sigma);
  double num = integrate([&](double r) { return s * s * r * r * r * std::exp(-2.0 * sigma * r * r); },
                         0.0, R, nodes);
  double den = integrate([&](double r) { return r * std::exp(-2.0 * sigma * r * r); }, 0.0, R, nodes);
  return num / den;
}

struct RatioMinimum {
  double value = 0.0;
  std::vector<double> s;  // minimizing profile
};

/// Minimize sum_j gaussian_ratio(lambda_j, s_j) over per-coordinate grids
/// with golden-section refinement. The sum separates, so each coordinate is
/// handled independently.
inline RatioMinimum min_ratio_sum(const std::vector<double>& lambda, int coarse = 48,
                                  int nodes = 96) {
  RatioMinimum out;
  out.s.resize(lambda.size());
  for (size_t j = 0; j < lambda.size(); ++j) {
    double l = lambda[j];
    double lo = l < 0 ? -l * (1.0 + 1e-9) : 1e-9;
    double hi = std::max(8.0 * std::abs(l), 8.0) + lo;
    // Coarse geometric grid to bracket the minimum, then golden section.
    double best_s = lo, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= coarse; ++k) {
      double s = lo * std::pow(hi / lo, static_cast<double>(k) / coarse);
      double v = gaussian_ratio(l, s, 0.0, nodes);
      if (v < best_v) {
        best_v = v;
        best_s = s;
      }
    }
    double a = std::max(lo, best_s / 3.0), b = std::min(hi, best_s * 3.0);
    double s_star = golden_section_min(
        [&](double s) { return gaussian_ratio(l, s, 0.0, nodes); }, a, b, 120, 1e-12 * (b - a));
    double v_star = gaussian_ratio(l, s_star, 0.0, nodes);
    if (v_star > best_v) {
      s_star = best_s;
      v_star = best_v;
    }
    out.s[j] = s_star;
    out.value += v_star;
  }
  return out;
}

struct CertifyResult {
  VerdictKind kind = VerdictKind::TriviallySatisfied;
  double A_lb = 0.0;               // meaningful when kind == Holds
  GaussianProfile witness;         // profile realizing the critical violation
  double ratio_min = 0.0;          // minimized sum of per-variable ratios
};

/// Largest A~ for which some Gaussian profile violates
///   2 (sum_{lambda>0} lambda - A~ sum_{j<=q} lambda_j) <= (A~-1) sum_j ratio_j.
/// Rearranged per profile, the critical value is
///   (2 sum_{lambda>0} lambda + rho) / (2 sum_{j<=q} lambda_j + rho)
/// with rho the ratio sum, so the supremum is reached at the minimized rho.
/// A nonpositive denominator means every A~ is violated (no finite A);
/// a supremum <= 1 means no A~ > 1 is ever violated.
inline CertifyResult certify_A_lower_bound(const ModelData& m, int coarse = 48, int nodes = 96) {
  int count = static_cast<int>(m.lambda.size());
  conditions::require_q(m.q, count + 1);
  double scale = 0, abs_mass = 0;
  for (double l : m.lambda) {
    scale = std::max(scale, std::abs(l));
    abs_mass += std::abs(l);
  }
  if (abs_mass <= 0) throw NumericError("certify_A_lower_bound: degenerate spectrum");

  RatioMinimum rm = min_ratio_sum(m.lambda, coarse, nodes);
  double pos = 0, first_q = 0;
  for (int j = 0; j < count; ++j) {
    if (m.lambda[j] > 0) pos += m.lambda[j];
    if (j < m.q) first_q += m.lambda[j];
  }

  CertifyResult res;
  res.ratio_min = rm.value;
  res.witness.s = rm.s;
  double num = 2.0 * pos + rm.value;
  double den = 2.0 * first_q + rm.value;
  if (den <= 1e-12 * (1.0 + scale)) {
    res.kind = VerdictKind::Infeasible;  // violated for every A~
    return res;
  }
  double a_lb = num / den;
  if (a_lb <= 1.0 + 1e-12) {
    res.kind = VerdictKind::TriviallySatisfied;  // no violation for any A~ > 1
    res.A_lb = 1.0;
    return res;
  }
  res.kind = VerdictKind::Holds;
  res.A_lb = a_lb;
  return res;
}

struct TauNormEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double acceptance = 0.0;   // fraction of proposals landing inside Omega
  double limit_oracle = 0.0; // closed-form model limit for the same profile
  bool converged = true;     // standard-error sanity flag
};

/// Monte Carlo estimate of tau^{2n+1} || u^tau ||^2_{L^2(Omega)} for the
/// rescaled test form anchored at a boundary point: the anchor frame is
/// rotated so the complex normal is the last coordinate, rho is scaled so
/// its normal derivative is i/2, and the holomorphic quadratic f is read off
/// the dzdz block there. psi_2 is replaced by a unit-L^2-mass Gaussian in
/// re z_n. Sampling uses seeded substreams and importance densities that
/// match |psi_1|^2 and the e^{-2v} vertical factor exactly.
inline TauNormEstimate finite_tau_norm(const expr::DefiningFunction& f,
                                       const levi::BoundaryPoint& p, double tau,
                                       const GaussianProfile& profile, int samples,
                                       std::uint64_t seed, const expr::ParamMap& overrides = {},
                                       const Tolerances& tol = {}) {
  if (!(tau > 0)) throw NumericError("finite_tau_norm: tau must be positive");
  int n = f.n;
  if (static_cast<int>(profile.s.size()) != n - 1)
    throw NumericError("finite_tau_norm: profile needs n-1 decay rates");

  const Jet2& jet = p.jet;
  levi::Frame frame = levi::tangential_frame(jet, tol);
  CMatrix lmat = levi::levi_matrix(jet, frame);
  levi::LeviSpectrum spec = levi::levi_spectrum(lmat);

  double dbar = jet.dbar_norm();
  double c = 1.0 / (2.0 * dbar);  // rho-hat = c * rho so that L_n rho-hat = 1/2

  // Adapted rows: Levi-eigenvector combinations of the tangential frame
  // rows, then i * (normal row) so the normal derivative becomes i/2.
  CMatrix rows(n, n);
  for (int l = 0; l < n - 1; ++l)
    for (int k = 0; k < n; ++k) {
      cplx s = 0;
      for (int mth = 0; mth < n - 1; ++mth) s += spec.eigenvectors[l][mth] * frame.rows(mth, k);
      rows(l, k) = s;
    }
  for (int k = 0; k < n; ++k) rows(n - 1, k) = cplx(0, 1) * frame.rows(n - 1, k);

  std::vector<double> lambda_hat(n - 1);
  for (int l = 0; l < n - 1; ++l) lambda_hat[l] = c * spec.eigenvalues[l];
  for (int l = 0; l < n - 1; ++l)
    if (!(profile.s[l] + lambda_hat[l] > 0))
      throw NumericError("finite_tau_norm: profile violates s_j + lambda_j > 0");

  // Quadratic f coefficients in adapted coordinates: C = R * dzdz * R^T.
  CMatrix dzdz_hat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dzdz_hat(i, j) = c * jet.dzdz(i, j);
  CMatrix rt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rt(i, j) = rows(j, i);
  CMatrix fquad = rows * dzdz_hat * rt;

  // z = p + R^T w maps adapted displacements back to ambient coordinates.
  auto to_ambient = [&](const std::vector<cplx>& w) {
    std::vector<cplx> z(p.coordinates);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) z[k] += rows(j, k) * w[j];
    return z;
  };

  auto quad_f = [&](const std::vector<cplx>& w) {
    cplx s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += fquad(i, j) * w[i] * w[j];
    return s;
  };

  auto lcal = [&](const std::vector<cplx>& w) {
    double s = 0;
    for (int l = 0; l < n - 1; ++l) s += lambda_hat[l] * std::norm(w[l]);
    return s;
  };

  // Pre-pass: conservative lower bound v0 for the vertical coordinate.
  double v0 = -1.0;
  {
    Rng rng = Rng::substream(seed, 0);
    for (int i = 0; i < 512; ++i) {
      std::vector<cplx> w(n, cplx(0));
      for (int l = 0; l < n - 1; ++l) w[l] = rng.gaussian_complex(0.5 / std::sqrt(profile.s[l]));
      double u = 0.5 * rng.gaussian();
      w[n - 1] = cplx(u, 0.0);
      double b = lcal(w) + quad_f(w).real();
      v0 = std::min(v0, b - 3.0);
    }
  }

  double K = 0.5 * std::exp(-2.0 * v0);
  for (int l = 0; l < n - 1; ++l) K *= M_PI / (2.0 * profile.s[l]);

  double sum = 0, sum2 = 0;
  long accepted = 0;
  Rng rng = Rng::substream(seed, 1);
  for (int i = 0; i < samples; ++i) {
    std::vector<cplx> w(n);
    for (int l = 0; l < n - 1; ++l) w[l] = rng.gaussian_complex(0.5 / std::sqrt(profile.s[l]));
    double u = 0.5 * rng.gaussian();
    double v = v0 - 0.5 * std::log(rng.uniform_pos());
    w[n - 1] = cplx(u, v / tau);

    // Ambient point of the rescaled displacement (w'/tau, u/tau + i v/tau^2).
    std::vector<cplx> delta(n);
    for (int l = 0; l < n - 1; ++l) delta[l] = w[l] / tau;
    delta[n - 1] = cplx(u / tau, v / (tau * tau));
    std::vector<cplx> z = to_ambient(delta);

    double x = 0.0;
    double rho = expr::eval_value(f, z, overrides);
    if (rho < 0) {
      ++accepted;
      // tau^2 Re f(delta) = Re f(w', u + i v/tau) by homogeneity.
      x = K * std::exp(2.0 * quad_f(w).real());
    }
    sum += x;
    sum2 += x * x;
  }
  TauNormEstimate est;
  est.value = sum / samples;
  double var = std::max(0.0, sum2 / samples - est.value * est.value);
  est.std_error = std::sqrt(var / samples);
  est.acceptance = static_cast<double>(accepted) / samples;
  est.converged = std::isfinite(est.std_error) && (est.value <= 0 || est.std_error < est.value);

  est.limit_oracle = 0.5;
  for (int l = 0; l < n - 1; ++l)
    est.limit_oracle *= M_PI / (2.0 * (profile.s[l] + lambda_hat[l]));
  return est;
}

}  // namespace levikit::model
