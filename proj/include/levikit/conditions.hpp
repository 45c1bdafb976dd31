#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "levikit/levi.hpp"

namespace levikit::conditions {

using levi::BoundaryPoint;
using levi::LeviSpectrum;

struct SignCounts {
  int negative = 0;
  int zero = 0;
  int positive = 0;
  double tolerance = 0.0;  // effective threshold actually used
};

/// lambda counts as negative below -tau, positive above +tau, zero between,
/// with tau = tau_sign*(1+scale) floored at 1e-13.
inline SignCounts classify_signs(const LeviSpectrum& spec, double tau_sign) {
  if (tau_sign <= 0) throw NumericError("classify_signs: tau_sign must be positive");
  SignCounts c;
  c.tolerance = sign_tolerance(tau_sign, spec.scale);
  for (double l : spec.eigenvalues) {
    if (l < -c.tolerance)
      ++c.negative;
    else if (l > c.tolerance)
      ++c.positive;
    else
      ++c.zero;
  }
  return c;
}

enum class VerdictKind { Holds, Fails, TriviallySatisfied, Infeasible };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "holds";
    case VerdictKind::Fails: return "fails";
    case VerdictKind::TriviallySatisfied: return "trivial";
    case VerdictKind::Infeasible: return "infeasible";
  }
  return "?";
}

struct Witness {
  std::vector<double> eigenvalues;
  SignCounts counts;
};

struct ConditionVerdict {
  VerdictKind kind = VerdictKind::TriviallySatisfied;
  std::optional<double> value;      // A_min or epsilon; present iff Holds
  std::optional<Witness> witness;   // present iff Fails

  bool ok() const { return kind != VerdictKind::Fails && kind != VerdictKind::Infeasible; }
};

inline ConditionVerdict holds(double value) {
  ConditionVerdict v;
  v.kind = VerdictKind::Holds;
  v.value = value;
  return v;
}
inline ConditionVerdict trivially_satisfied() { return {}; }
inline ConditionVerdict infeasible() {
  ConditionVerdict v;
  v.kind = VerdictKind::Infeasible;
  return v;
}
inline ConditionVerdict fails(const LeviSpectrum& spec, const SignCounts& c) {
  ConditionVerdict v;
  v.kind = VerdictKind::Fails;
  v.witness = Witness{spec.eigenvalues, c};
  return v;
}

inline void require_q(int q, int n) {
  if (q < 1 || q > n - 1)
    throw NumericError("q = " + std::to_string(q) + " outside [1, n-1] with n = " + std::to_string(n));
}

/// Z(q): at least q+1 negative or n-q positive eigenvalues.
/// The Holds value is the count margin above the threshold.
inline ConditionVerdict check_Zq(const LeviSpectrum& spec, int q, double tau_sign) {
  int n = spec.count() + 1;
  require_q(q, n);
  SignCounts c = classify_signs(spec, tau_sign);
  int margin = std::max(c.negative - (q + 1), c.positive - (n - q));
  if (margin >= 0) return holds(static_cast<double>(margin));
  return fails(spec, c);
}

namespace detail {

struct SpectrumSums {
  double first_q = 0;        // sum_{j<=q} lambda_j
  double neg_mass = 0;       // sum over classified negatives of |lambda|
  double pos_mass = 0;       // sum over classified positives of lambda
  double abs_mass = 0;       // sum |lambda| (all)
  double tail = 0;           // sum_{j>q} lambda_j
};

inline SpectrumSums spectrum_sums(const LeviSpectrum& spec, int q, const SignCounts& c) {
  SpectrumSums s;
  for (int j = 0; j < spec.count(); ++j) {
    double l = spec.eigenvalues[j];
    if (j < q)
      s.first_q += l;
    else
      s.tail += l;
    s.abs_mass += std::abs(l);
    if (l < -c.tolerance) s.neg_mass += -l;
    if (l > c.tolerance) s.pos_mass += l;
  }
  return s;
}

}  // namespace detail

/// Necessary condition: with L = sum_{j<=q} lambda_j + sum_{lambda<0}|lambda|
/// and R = sum |lambda|, the estimate constant must satisfy A >= R/L.
/// R ~ 0 -> TriviallySatisfied; L ~ 0 < R -> Infeasible (no finite A).
inline ConditionVerdict necessary_min_A(const LeviSpectrum& spec, int q, double tau_sign) {
  int n = spec.count() + 1;
  require_q(q, n);
  SignCounts c = classify_signs(spec, tau_sign);
  detail::SpectrumSums s = detail::spectrum_sums(spec, q, c);
  double tau = c.tolerance;
  if (s.abs_mass <= tau) return trivially_satisfied();
  double lhs = s.first_q + s.neg_mass;
  if (lhs <= tau) return infeasible();
  return holds(s.abs_mass / lhs);
}

/// Largest epsilon with sum_{j<=q} lambda_j >= eps * sum_{lambda<0} |lambda|.
/// No negative eigenvalues -> TriviallySatisfied (epsilon unconstrained);
/// negative numerator -> Infeasible.
inline ConditionVerdict epsilon_almost_pseudoconvex(const LeviSpectrum& spec, int q, double tau_sign) {
  int n = spec.count() + 1;
  require_q(q, n);
  SignCounts c = classify_signs(spec, tau_sign);
  detail::SpectrumSums s = detail::spectrum_sums(spec, q, c);
  double tau = c.tolerance;
  if (c.negative == 0) {
    if (s.first_q >= -tau) return trivially_satisfied();
    return infeasible();
  }
  if (s.first_q <= tau) return infeasible();
  return holds(s.first_q / s.neg_mass);
}

/// Mirror condition: largest epsilon with
/// -sum_{j>q} lambda_j >= eps * sum_{lambda>0} lambda_j.
inline ConditionVerdict epsilon_almost_pseudoconcave(const LeviSpectrum& spec, int q, double tau_sign) {
  int n = spec.count() + 1;
  require_q(q, n);
  SignCounts c = classify_signs(spec, tau_sign);
  detail::SpectrumSums s = detail::spectrum_sums(spec, q, c);
  double tau = c.tolerance;
  if (c.positive == 0) {
    if (-s.tail >= -tau) return trivially_satisfied();
    return infeasible();
  }
  if (-s.tail <= tau) return infeasible();
  return holds(-s.tail / s.pos_mass);
}

/// Weak Z(q) margin: sum_{j<=q} lambda_j - sum_{j,k} Upsilon^{kbar j} rho_{j kbar}.
/// Upsilon is stored with entry (j,k) = Upsilon^{kbar j}; the contraction
/// pairs it entrywise with the mixed Hessian rho_{j kbar}.
inline double check_weak_zq(const LeviSpectrum& spec, int q, const expr::Jet2& jet,
                            const CMatrix& upsilon) {
  int n = jet.dimension();
  require_q(q, n);
  if (upsilon.rows() != n || upsilon.cols() != n)
    throw NumericError("check_weak_zq: Upsilon must be n x n");
  if (upsilon.hermitian_residual() > 1e-8 * (1.0 + upsilon.frobenius()))
    throw NumericError("check_weak_zq: Upsilon is not Hermitian");
  cplx contraction = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) contraction += upsilon(j, k) * jet.dzdzbar(j, k);
  double first_q = 0;
  for (int j = 0; j < q; ++j) first_q += spec.eigenvalues[j];
  return first_q - contraction.real();
}

struct Interval {
  double lo = 0, hi = 0;
  bool empty() const { return !(lo < hi); }
};

enum class WindowMode { Pcvx, Pccv };

/// Admissible scaling window for the t of the tangential-identity Upsilon:
/// pcvx -> (0, eps/((1+eps)A-2)) meet (0, 1/A);
/// pccv -> (1 - eps/((1+eps)A-2), 1) meet (1 - 1/A, 1).
/// An unconstrained epsilon (TriviallySatisfied verdict) is the eps -> inf
/// limit, where the bound degenerates to 1/A.
inline Interval admissible_t_window(std::optional<double> eps, double A, WindowMode mode) {
  if (!(A > 2.0)) throw NumericError("admissible_t_window: requires A > 2");
  double bound;
  if (eps) {
    if (!(*eps > 0)) throw NumericError("admissible_t_window: requires eps > 0");
    bound = *eps / ((1.0 + *eps) * A - 2.0);
  } else {
    bound = 1.0 / A;  // eps -> infinity
  }
  bound = std::min(bound, 1.0 / A);
  Interval w;
  if (mode == WindowMode::Pcvx) {
    w.lo = 0.0;
    w.hi = bound;
  } else {
    w.lo = 1.0 - bound;
    w.hi = 1.0;
  }
  return w;
}

struct PointRecord {
  int index = 0;
  std::vector<cplx> seed;
  std::vector<cplx> boundary;
  double residual = 0.0;
  std::vector<double> eigenvalues;
  double trace = 0.0;
  double det = 0.0;
  ConditionVerdict zq, min_A, eps_pcvx, eps_pccv;
  bool failed = false;
  std::string failure;
};

struct RegionSummary {
  int evaluated = 0;
  int failures = 0;
  std::optional<double> sup_A_min;       // over Holds verdicts
  int A_trivial = 0, A_infeasible = 0, A_holds = 0;
  std::optional<double> inf_eps_pcvx;
  int pcvx_trivial = 0, pcvx_infeasible = 0, pcvx_holds = 0;
  std::optional<double> inf_eps_pccv;
  int pccv_trivial = 0, pccv_infeasible = 0, pccv_holds = 0;
  int zq_holds = 0, zq_fails = 0;
  double min_det = std::numeric_limits<double>::infinity();
  double max_det = -std::numeric_limits<double>::infinity();
  double min_trace = std::numeric_limits<double>::infinity();
  double max_trace = -std::numeric_limits<double>::infinity();
  bool det_nonpositive_everywhere = true;
};

struct ConditionReport {
  std::uint64_t seed = 0;
  std::vector<cplx> center;
  double radius = 0.0;
  int count = 0;
  int q = 1;
  double tau_sign = 0.0;
  std::vector<PointRecord> points;
  RegionSummary summary;
};

/// Sample `count` seeded points in the ball of the given radius, project
/// each to the boundary and evaluate every verdict. Deterministic for a
/// fixed seed; per-point failures are recorded, not fatal.
inline ConditionReport scan_region(const expr::DefiningFunction& f, const std::vector<cplx>& center,
                                   double radius, int count, int q, std::uint64_t seed,
                                   const expr::ParamMap& overrides = {}, const Tolerances& tol = {}) {
  if (!(radius > 0)) throw NumericError("scan_region: radius must be positive");
  if (count < 1) throw NumericError("scan_region: count must be >= 1");
  int n = f.n;
  require_q(q, n);

  ConditionReport rep;
  rep.seed = seed;
  rep.center = center;
  rep.radius = radius;
  rep.count = count;
  rep.q = q;
  rep.tau_sign = tol.sign;

  Rng rng(seed);
  for (int idx = 0; idx < count; ++idx) {
    PointRecord rec;
    rec.index = idx;
    // Uniform direction via Gaussians, radius via U^(1/2n).
    std::vector<double> dir(2 * n);
    double norm = 0;
    for (double& d : dir) {
      d = rng.gaussian();
      norm += d * d;
    }
    norm = std::sqrt(norm);
    double r = radius * std::pow(rng.uniform_pos(), 1.0 / (2.0 * n));
    rec.seed.resize(n);
    for (int j = 0; j < n; ++j)
      rec.seed[j] = center[j] + cplx(dir[j] / norm * r, dir[n + j] / norm * r);

    try {
      levi::PointAnalysis a = levi::analyze_point(f, rec.seed, overrides, tol);
      rec.boundary = a.point.coordinates;
      rec.residual = a.point.residual;
      rec.eigenvalues = a.spectrum.eigenvalues;
      rec.trace = a.trace_formula;
      rec.det = a.det_formula;
      rec.zq = check_Zq(a.spectrum, q, tol.sign);
      rec.min_A = necessary_min_A(a.spectrum, q, tol.sign);
      rec.eps_pcvx = epsilon_almost_pseudoconvex(a.spectrum, q, tol.sign);
      rec.eps_pccv = epsilon_almost_pseudoconcave(a.spectrum, q, tol.sign);
    } catch (const Error& e) {
      rec.failed = true;
      rec.failure = e.what();
    }
    rep.points.push_back(std::move(rec));
  }

  RegionSummary& s = rep.summary;
  for (const PointRecord& rec : rep.points) {
    if (rec.failed) {
      ++s.failures;
      continue;
    }
    ++s.evaluated;
    if (rec.zq.kind == VerdictKind::Holds)
      ++s.zq_holds;
    else
      ++s.zq_fails;
    switch (rec.min_A.kind) {
      case VerdictKind::Holds:
        ++s.A_holds;
        if (!s.sup_A_min || *rec.min_A.value > *s.sup_A_min) s.sup_A_min = *rec.min_A.value;
        break;
      case VerdictKind::TriviallySatisfied: ++s.A_trivial; break;
      case VerdictKind::Infeasible: ++s.A_infeasible; break;
      default: break;
    }
    switch (rec.eps_pcvx.kind) {
      case VerdictKind::Holds:
        ++s.pcvx_holds;
        if (!s.inf_eps_pcvx || *rec.eps_pcvx.value < *s.inf_eps_pcvx)
          s.inf_eps_pcvx = *rec.eps_pcvx.value;
        break;
      case VerdictKind::TriviallySatisfied: ++s.pcvx_trivial; break;
      case VerdictKind::Infeasible: ++s.pcvx_infeasible; break;
      default: break;
    }
    switch (rec.eps_pccv.kind) {
      case VerdictKind::Holds:
        ++s.pccv_holds;
        if (!s.inf_eps_pccv || *rec.eps_pccv.value < *s.inf_eps_pccv)
          s.inf_eps_pccv = *rec.eps_pccv.value;
        break;
      case VerdictKind::TriviallySatisfied: ++s.pccv_trivial; break;
      case VerdictKind::Infeasible: ++s.pccv_infeasible; break;
      default: break;
    }
    s.min_det = std::min(s.min_det, rec.det);
    s.max_det = std::max(s.max_det, rec.det);
    s.min_trace = std::min(s.min_trace, rec.trace);
    s.max_trace = std::max(s.max_trace, rec.trace);
    double det_tol = 1e-12 * (1.0 + rec.det * rec.det);
    if (rec.det > det_tol) s.det_nonpositive_everywhere = false;
  }
  return rep;
}

}  // namespace levikit::conditions
