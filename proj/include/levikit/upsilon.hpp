#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "levikit/conditions.hpp"
#include "levikit/levi.hpp"

namespace levikit::upsilon {

using conditions::Interval;
using expr::Jet2;
using expr::NodePtr;
using expr::ParamMap;
using expr::WirtingerJet;
using levi::Frame;
using levi::LeviSpectrum;

// Storage convention throughout: entry (j,k) of the matrix holds
// Upsilon^{kbar j}, so Hermitian means U(j,k) = conj(U(k,j)), the kernel law
// reads sum_k conj(drho_k) U(j,k) = 0, and the Levi contraction pairs U
// entrywise with rho_{j kbar}.

enum class FieldKind { ScaledTangential, PositiveProjection, ZqConstruction, Example2, UserDefined };

/// t (delta_jk - |drho|^{-2} drho_k conj(drho_j)): eigenvalue t with
/// multiplicity n-1 and an exact kernel along the drho direction.
inline CMatrix scaled_tangential_matrix(const Jet2& jet, double t) {
  if (t < 0.0 || t > 1.0) throw NumericError("scaled tangential field: t outside [0, 1]");
  int n = jet.dimension();
  double d2 = 0;
  for (const cplx& z : jet.dz) d2 += std::norm(z);
  if (d2 <= 0) throw NumericError("scaled tangential field: zero gradient");
  CMatrix u(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) u(j, k) = -t / d2 * jet.dz[k] * std::conj(jet.dz[j]);
    u(j, j) += t;
  }
  return u;
}

/// Orthogonal projection onto the span of the tangential Levi eigenvectors
/// with classified-positive eigenvalue, in ambient coordinates.
inline CMatrix positive_projection_matrix(const Frame& frame, const LeviSpectrum& spec,
                                          double tau_sign) {
  int n = frame.rows.rows();
  double tau = sign_tolerance(tau_sign, spec.scale);
  CMatrix p(n, n);
  for (int l = 0; l < spec.count(); ++l) {
    if (!(spec.eigenvalues[l] > tau)) continue;
    std::vector<cplx> u(n, cplx(0));
    for (int m = 0; m < n - 1; ++m) {
      cplx c = spec.eigenvectors[l][m];
      for (int k = 0; k < n; ++k) u[k] += c * frame.rows(m, k);
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) p(j, k) += u[j] * std::conj(u[k]);
  }
  return p;
}

/// The Z(q)-proof construction, anchored at one boundary point: the
/// tangential Levi block is diagonalized there, the negative count m and the
/// adapted rotation are frozen, and the displayed entries (diagonal b/a with
/// normal-column corrections) are applied at each evaluation point's
/// transformed gradient before rotating back.
class ZqUpsilonBuilder {
public:
  ZqUpsilonBuilder(const levi::PointAnalysis& anchor, double a, double b, double tau_sign)
      : a_(a), b_(b) {
    if (!(0 < a && a < b && b < 1))
      throw NumericError("zq construction: parameters must satisfy 0 < a < b < 1");
    int n = anchor.point.jet.dimension();
    m_ = conditions::classify_signs(anchor.spectrum, tau_sign).negative;
    rows_ = CMatrix(n, n);
    for (int l = 0; l < n - 1; ++l)
      for (int k = 0; k < n; ++k) {
        cplx s = 0;
        for (int m = 0; m < n - 1; ++m) s += anchor.spectrum.eigenvectors[l][m] * anchor.frame.rows(m, k);
        rows_(l, k) = s;
      }
    for (int k = 0; k < n; ++k) rows_(n - 1, k) = anchor.frame.rows(n - 1, k);
  }

  int negative_count() const { return m_; }

  CMatrix at(const Jet2& jet) const {
    int n = rows_.rows();
    std::vector<cplx> d(n, cplx(0));  // gradient in adapted coordinates
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) d[j] += rows_(j, k) * jet.dz[k];
    cplx dn = d[n - 1];
    if (std::abs(dn) <= 0) throw NumericError("zq construction: vanishing normal derivative");

    CMatrix ut(n, n);
    double nn = 0;
    for (int j = 0; j < n - 1; ++j) {
      double c = j < m_ ? b_ : a_;
      ut(j, j) = c;
      // Upsilon~^{nbar j} = -c (drho/dzbar_n)^{-1} drho/dzbar_j
      cplx corr = -c * std::conj(d[j]) / std::conj(dn);
      ut(j, n - 1) = corr;
      ut(n - 1, j) = std::conj(corr);
      nn += c * std::norm(d[j]);
    }
    ut(n - 1, n - 1) = nn / std::norm(dn);

    // Rotate back: U = R^T U~ conj(R).
    CMatrix rt(n, n), rc(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        rt(i, j) = rows_(j, i);
        rc(i, j) = std::conj(rows_(i, j));
      }
    return rt * ut * rc;
  }

private:
  CMatrix rows_;
  int m_ = 0;
  double a_, b_;
};

inline CMatrix zq_construction_matrix(const levi::PointAnalysis& anchor, double a, double b,
                                      double tau_sign) {
  return ZqUpsilonBuilder(anchor, a, b, tau_sign).at(anchor.point.jet);
}

namespace detail {

inline void require_nonsingular_example2(const std::vector<cplx>& point) {
  if (std::norm(point[0]) + std::norm(point[1]) <= 0)
    throw EvalError("example-2 field: singular set z1 = z2 = 0 (removable discontinuity)");
}

}  // namespace detail

/// Expression entries of the Example-2 field in C^3. Parameters a, b, t stay
/// symbolic so the same entries serve the whole parameter sweep.
inline std::vector<NodePtr> example2_entries() {
  using namespace levikit::expr;
  NodePtr a = make_param("a"), b = make_param("b"), t = make_param("t");
  NodePtr z1 = make_var(0), z2 = make_var(1);
  NodePtr A1 = make_unary(NodeKind::Abs2, z1), A2 = make_unary(NodeKind::Abs2, z2);
  NodePtr S = A1 + A2;
  NodePtr g = make_const(4) * A1 * A2 / make_pow(S, 2);
  NodePtr f1 = A1 / S, f2 = A2 / S;
  NodePtr two_b = make_const(2) * b, four_b = make_const(4) * b;

  NodePtr psi11 = a - four_b * make_pow(f2, 2) + two_b * f2 * g;  // psi_{z1 z1bar}
  NodePtr psi22 = a - four_b * make_pow(f1, 2) + two_b * f1 * g;  // psi_{z2 z2bar}
  NodePtr psi12 = -(two_b * z2 * make_unary(NodeKind::Conj, z1) * g / S);  // psi_{z1 z2bar}
  NodePtr psi21 = -(two_b * z1 * make_unary(NodeKind::Conj, z2) * g / S);  // psi_{z2 z1bar}

  // drho_t / dzbar_k
  NodePtr rb1 = (A1 / make_const(2) - t * A2) * z1;
  NodePtr rb2 = (A2 / make_const(2) - t * A1) * z2;
  NodePtr r1 = make_unary(NodeKind::Conj, rb1);
  NodePtr r2 = make_unary(NodeKind::Conj, rb2);
  NodePtr m2i = -(make_const(2) * make_imag());

  std::vector<NodePtr> e(9);
  auto at = [&e](int j, int k) -> NodePtr& { return e[static_cast<size_t>(j) * 3 + k]; };
  at(0, 0) = psi22;        // M^{1bar 1}
  at(1, 1) = psi11;        // M^{2bar 2}
  at(0, 1) = -psi21;       // M^{2bar 1}
  at(1, 0) = -psi12;       // M^{1bar 2}
  at(0, 2) = m2i * (rb1 * at(0, 0) + rb2 * at(0, 1));  // Upsilon^{3bar 1}
  at(1, 2) = m2i * (rb1 * at(1, 0) + rb2 * at(1, 1));  // Upsilon^{3bar 2}
  at(2, 0) = make_unary(NodeKind::Conj, at(0, 2));
  at(2, 1) = make_unary(NodeKind::Conj, at(1, 2));
  at(2, 2) = make_const(4) * (r1 * (rb1 * at(0, 0) + rb2 * at(0, 1)) +
                              r2 * (rb1 * at(1, 0) + rb2 * at(1, 1)));
  return e;
}

/// A Hermitian matrix of functions, either a pointwise rule built from the
/// jet of rho or a matrix of expression entries (required wherever
/// derivatives of Upsilon enter: Upsilon^j and Theta).
class UpsilonField {
public:
  FieldKind kind = FieldKind::UserDefined;
  int n = 0;
  double eta = 0.0;

  static UpsilonField scaled_tangential(int n, double t, double eta = 0.0) {
    UpsilonField f;
    f.kind = FieldKind::ScaledTangential;
    f.n = n;
    f.eta = eta;
    f.jet_fn_ = [t](const Jet2& jet) { return scaled_tangential_matrix(jet, t); };
    return f;
  }

  static UpsilonField positive_projection(int n, double tau_sign, const Tolerances& tol = {}) {
    UpsilonField f;
    f.kind = FieldKind::PositiveProjection;
    f.n = n;
    f.eta = 1.0;  // projections make the first Theta term vanish at eta = 1
    f.jet_fn_ = [tau_sign, tol](const Jet2& jet) {
      Frame fr = levi::tangential_frame(jet, tol);
      CMatrix m = levi::levi_matrix(jet, fr);
      LeviSpectrum s = levi::levi_spectrum(m);
      return positive_projection_matrix(fr, s, tau_sign);
    };
    return f;
  }

  static UpsilonField zq_construction(const levi::PointAnalysis& anchor, double a, double b,
                                      double tau_sign) {
    UpsilonField f;
    f.kind = FieldKind::ZqConstruction;
    f.n = anchor.point.jet.dimension();
    ZqUpsilonBuilder builder(anchor, a, b, tau_sign);
    f.jet_fn_ = [builder](const Jet2& jet) { return builder.at(jet); };
    return f;
  }

  static UpsilonField example2(double a, double b, double t, double eta = 0.0) {
    if (!(0 < a && a < 1) || !(0 < b && b < std::min(0.25 * a, 1.0 - a)))
      throw NumericError("example-2 field: need 0 < a < 1 and 0 < b < min(a/4, 1-a)");
    UpsilonField f;
    f.kind = FieldKind::Example2;
    f.n = 3;
    f.eta = eta;
    f.entries_ = example2_entries();
    f.params_ = {{"a", a}, {"b", b}, {"t", t}};
    f.guard_fn_ = detail::require_nonsingular_example2;
    return f;
  }

  static UpsilonField from_expressions(int n, std::vector<NodePtr> entries, ParamMap params,
                                       double eta = 0.0) {
    if (static_cast<int>(entries.size()) != n * n)
      throw NumericError("upsilon field: expected n*n entries");
    UpsilonField f;
    f.kind = FieldKind::UserDefined;
    f.n = n;
    f.eta = eta;
    f.entries_ = std::move(entries);
    f.params_ = std::move(params);
    return f;
  }

  bool has_expressions() const { return !entries_.empty(); }
  const std::vector<NodePtr>& entries() const { return entries_; }
  const ParamMap& params() const { return params_; }

  /// Pointwise value. `jet` is the jet of rho at `point`; expression-backed
  /// fields ignore it.
  CMatrix evaluate(const Jet2& jet, const std::vector<cplx>& point) const {
    if (!entries_.empty()) {
      if (guard_fn_) guard_fn_(point);
      CMatrix u(n, n);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          u(j, k) = expr::eval_scalar(entries_[static_cast<size_t>(j) * n + k], point, params_);
      return u;
    }
    return jet_fn_(jet);
  }

  /// Second-order jets of all entries (expression-backed fields only).
  std::vector<WirtingerJet> entry_jets(const std::vector<cplx>& point) const {
    if (entries_.empty()) throw NumericError("upsilon field: derivatives need expression entries");
    if (guard_fn_) guard_fn_(point);
    std::vector<WirtingerJet> jets;
    jets.reserve(entries_.size());
    for (const NodePtr& e : entries_) jets.push_back(expr::eval_wirtinger_jet(e, point, params_));
    return jets;
  }

private:
  std::function<CMatrix(const Jet2&)> jet_fn_;
  std::vector<NodePtr> entries_;
  ParamMap params_;
  std::function<void(const std::vector<cplx>&)> guard_fn_;
};

// Pointwise per-op entry points matching the rest of the library's style.
inline CMatrix upsilon_scaled_tangential(const Jet2& jet, double t) {
  return scaled_tangential_matrix(jet, t);
}
inline CMatrix upsilon_positive_projection(const Frame& frame, const LeviSpectrum& spec,
                                           double tau_sign) {
  return positive_projection_matrix(frame, spec, tau_sign);
}
inline CMatrix upsilon_zq_construction(const levi::PointAnalysis& anchor, double a, double b,
                                       double tau_sign) {
  return zq_construction_matrix(anchor, a, b, tau_sign);
}
inline CMatrix upsilon_example2(const std::vector<cplx>& point, double a, double b, double t) {
  detail::require_nonsingular_example2(point);
  UpsilonField f = UpsilonField::example2(a, b, t);
  Jet2 dummy;
  return f.evaluate(dummy, point);
}

/// Closed form of mu = sum rho_{j kbar} M^{kbar j} for the Example-2 field.
inline double mu_example2(const std::vector<cplx>& point, double a, double b, double t) {
  detail::require_nonsingular_example2(point);
  double s1 = std::norm(point[0]), s2 = std::norm(point[1]);
  double S = s1 + s2;
  double g = 4.0 * s1 * s2 / (S * S);
  return S * ((1.0 - t) * a - 4.0 * b + (5.0 + t) * b * g - (1.0 + 2.0 * t) * b * g * g);
}

/// Upsilon^j = sum_k d/dzbar_k Upsilon^{kbar j}, from entry jets.
inline std::vector<cplx> upsilon_divergence(const UpsilonField& field,
                                            const std::vector<cplx>& point) {
  std::vector<WirtingerJet> jets = field.entry_jets(point);
  int n = field.n;
  std::vector<cplx> div(n, cplx(0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) div[j] += jets[static_cast<size_t>(j) * n + k].dzbar[k];
  return div;
}

namespace detail {

inline const WirtingerJet& at(const std::vector<WirtingerJet>& jets, int n, int j, int k) {
  return jets[static_cast<size_t>(j) * n + k];
}

}  // namespace detail

/// Theta evaluated term by term from its definition:
///   sum_{j,k} d2/dz_j dzbar_k (U^{kbar j} - eta sum_l U^{kbar l} U^{lbar j})
///   + eta sum_{j,k,l} (d/dz_j U^{kbar l})(d/dzbar_k U^{lbar j})
///   - (1-eta) sum_j |U^j|^2.
inline double theta_defined(const UpsilonField& field, double eta, const std::vector<cplx>& point) {
  std::vector<WirtingerJet> jets = field.entry_jets(point);
  int n = field.n;
  cplx t1 = 0, t1b = 0, t2 = 0;
  double t3 = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      t1 += detail::at(jets, n, j, k).dzdzbar(j, k);
      for (int l = 0; l < n; ++l) {
        const WirtingerJet& u = detail::at(jets, n, j, l);   // U(j,l) = Upsilon^{lbar j}
        const WirtingerJet& v = detail::at(jets, n, l, k);   // U(l,k) = Upsilon^{kbar l}
        t1b += u.dzdzbar(j, k) * v.value + u.dz[j] * v.dzbar[k] + u.dzbar[k] * v.dz[j] +
               u.value * v.dzdzbar(j, k);
        t2 += v.dz[j] * u.dzbar[k];
      }
    }
  for (int j = 0; j < n; ++j) {
    cplx div = 0;
    for (int k = 0; k < n; ++k) div += detail::at(jets, n, j, k).dzbar[k];
    t3 += std::norm(div);
  }
  cplx theta = t1 - eta * t1b + eta * t2 - (1.0 - eta) * t3;
  return theta.real();
}

/// Theta through the expanded identity
///   sum_j d/dz_j U^j
///   - eta sum_{j,k} (d/dzbar_k conj(U^j) + d/dz_j U^k) U^{kbar j}
///   - sum_j |U^j|^2,
/// which serves as an independent assembly of the same quantity.
inline double theta_identity(const UpsilonField& field, double eta, const std::vector<cplx>& point) {
  std::vector<WirtingerJet> jets = field.entry_jets(point);
  int n = field.n;
  std::vector<cplx> div(n, cplx(0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) div[j] += detail::at(jets, n, j, k).dzbar[k];

  cplx term1 = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) term1 += detail::at(jets, n, j, k).dzdzbar(j, k);

  cplx term2 = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      cplx dzbar_conj_div = 0;  // d/dzbar_k conj(U^j) = sum_l d2/dz_l dzbar_k U(l,j)
      for (int l = 0; l < n; ++l) dzbar_conj_div += detail::at(jets, n, l, j).dzdzbar(l, k);
      cplx dz_div = 0;          // d/dz_j U^k = sum_l d2/dz_j dzbar_l U(k,l)
      for (int l = 0; l < n; ++l) dz_div += detail::at(jets, n, k, l).dzdzbar(j, l);
      term2 += (dzbar_conj_div + dz_div) * detail::at(jets, n, j, k).value;
    }

  double term3 = 0;
  for (int j = 0; j < n; ++j) term3 += std::norm(div[j]);

  cplx theta = term1 - eta * term2 - term3;
  return theta.real();
}

inline double theta(const UpsilonField& field, double eta, const std::vector<cplx>& point) {
  return theta_defined(field, eta, point);
}

struct ValidationReport {
  int samples = 0;
  double hermitian_residual = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();             // of Upsilon
  double min_eig_complement = std::numeric_limits<double>::infinity();  // of I - Upsilon
  double kernel_residual = 0.0;       // max_j |sum_k conj(drho_k) U(j,k)| at boundary samples
  int window_count = 0;               // min over samples of eigenvalues in (1/A, 1-1/A)
  double window_margin = std::numeric_limits<double>::infinity();
  double weak_zq_margin = std::numeric_limits<double>::infinity();
  std::optional<double> theta_bound;  // sup |Theta| over the sample (expression fields)
  std::optional<double> decay_slope;  // log-log slope of the interior kernel residual
  bool kernel_identically_zero = false;

  bool hermitian_ok = false, psd_ok = false, kernel_ok = false, window_ok = false,
       weak_ok = false, decay_ok = false;
  bool pass() const {
    return hermitian_ok && psd_ok && kernel_ok && window_ok && weak_ok && decay_ok;
  }
};

/// Check every Upsilon admissibility requirement over a boundary sample:
/// Hermitian residual, PSD margins of U and I-U, the boundary kernel law,
/// the (1/A, 1-1/A) eigenvalue window, the weak-Z(q) margin, boundedness of
/// Theta (expression fields), and the O(|rho|) interior decay of the kernel
/// residual along inward normals.
inline ValidationReport validate_upsilon(const UpsilonField& field,
                                         const expr::DefiningFunction& f, double A, int q,
                                         const std::vector<std::vector<cplx>>& seeds,
                                         const ParamMap& overrides = {}, const Tolerances& tol = {}) {
  if (!(A > 2.0)) throw NumericError("validate_upsilon: requires A > 2");
  int n = f.n;
  conditions::require_q(q, n);
  ValidationReport rep;
  double lo = 1.0 / A, hi = 1.0 - 1.0 / A;
  int min_window = n;
  double theta_sup = 0.0;
  bool any_theta = false;

  std::vector<double> decay_log_rho, decay_log_res;
  bool decay_all_zero = true;

  for (const auto& seed : seeds) {
    levi::PointAnalysis an = levi::analyze_point(f, seed, overrides, tol);
    const Jet2& jet = an.point.jet;
    CMatrix u = field.evaluate(jet, an.point.coordinates);

    rep.hermitian_residual = std::max(rep.hermitian_residual, u.hermitian_residual());

    // Exact symmetrization before the eigensolver.
    CMatrix uh = u;
    for (int j = 0; j < n; ++j) {
      uh(j, j) = uh(j, j).real();
      for (int k = j + 1; k < n; ++k) {
        cplx m = 0.5 * (uh(j, k) + std::conj(uh(k, j)));
        uh(j, k) = m;
        uh(k, j) = std::conj(m);
      }
    }
    HermitianEig eig = hermitian_eigensystem(uh);
    rep.min_eig = std::min(rep.min_eig, eig.values.front());
    rep.min_eig_complement = std::min(rep.min_eig_complement, 1.0 - eig.values.back());
    int inside = 0;
    for (double v : eig.values)
      if (v > lo && v < hi) {
        ++inside;
        rep.window_margin = std::min(rep.window_margin, std::min(v - lo, hi - v));
      }
    min_window = std::min(min_window, inside);

    double kres = 0;
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int k = 0; k < n; ++k) s += std::conj(jet.dz[k]) * uh(j, k);
      kres = std::max(kres, std::abs(s));
    }
    rep.kernel_residual = std::max(rep.kernel_residual, kres);

    double margin = conditions::check_weak_zq(an.spectrum, q, jet, uh);
    rep.weak_zq_margin = std::min(rep.weak_zq_margin, margin);

    if (field.has_expressions()) {
      theta_sup = std::max(theta_sup, std::abs(theta_defined(field, field.eta, an.point.coordinates)));
      any_theta = true;
    }
    ++rep.samples;
  }

  // Interior decay of the kernel residual, fitted along the inward normal of
  // the first few sample points. Fields whose kernel law holds identically
  // (all built-in constructions) report a floor residual instead of a slope.
  int probes = std::min<int>(3, static_cast<int>(seeds.size()));
  double scale_floor = 0.0;
  for (int s = 0; s < probes; ++s) {
    levi::PointAnalysis an = levi::analyze_point(f, seeds[s], overrides, tol);
    const Jet2& bjet = an.point.jet;
    double d2 = 0;
    for (const cplx& z : bjet.dz) d2 += std::norm(z);
    for (int level = 1; level <= 6; ++level) {
      double step = 0.04 * std::pow(0.5, level);
      std::vector<cplx> zin(n);
      for (int j = 0; j < n; ++j) {
        double dx = 2.0 * bjet.dz[j].real(), dy = -2.0 * bjet.dz[j].imag();
        zin[j] = an.point.coordinates[j] - step / (2.0 * std::sqrt(d2)) * cplx(dx, dy);
      }
      Jet2 ijet = expr::eval_jet2(f, zin, overrides);
      if (ijet.value >= 0) continue;  // stepped outside; skip the level
      CMatrix u = field.evaluate(ijet, zin);
      double kres = 0, uscale = u.frobenius();
      for (int j = 0; j < n; ++j) {
        cplx acc = 0;
        for (int k = 0; k < n; ++k) acc += std::conj(ijet.dz[k]) * u(j, k);
        kres = std::max(kres, std::abs(acc));
      }
      scale_floor = std::max(scale_floor, 1e-12 * (1.0 + uscale));
      if (kres > 1e-13 * (1.0 + uscale)) decay_all_zero = false;
      decay_log_rho.push_back(std::log(std::abs(ijet.value)));
      decay_log_res.push_back(std::log(std::max(kres, 1e-300)));
    }
  }
  if (decay_all_zero || decay_log_rho.size() < 3) {
    rep.kernel_identically_zero = decay_all_zero;
    rep.decay_ok = decay_all_zero;
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = static_cast<int>(decay_log_rho.size());
    for (int i = 0; i < m; ++i) {
      sx += decay_log_rho[i];
      sy += decay_log_res[i];
      sxx += decay_log_rho[i] * decay_log_rho[i];
      sxy += decay_log_rho[i] * decay_log_res[i];
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.decay_slope = slope;
    rep.decay_ok = slope >= 0.9;
  }

  if (any_theta) rep.theta_bound = theta_sup;
  rep.window_count = min_window;
  rep.hermitian_ok = rep.hermitian_residual <= 1e-8;
  rep.psd_ok = rep.min_eig >= -1e-9 && rep.min_eig_complement >= -1e-9;
  rep.kernel_ok = rep.kernel_residual <= 1e-9;
  rep.window_ok = rep.window_count >= n - 1;
  rep.weak_ok = rep.weak_zq_margin >= -1e-9;
  return rep;
}

/// Paper threshold for the Example-2 b-window: (13 + 2 sqrt 31) / 9.
inline double example2_threshold() { return (13.0 + 2.0 * std::sqrt(31.0)) / 9.0; }

/// Admissible b-interval for the Example-2 field with a = 4/5 and t >= 1:
/// ((1-t)/5 / (-4 + (5+t)^2 / (4(1+2t))), 1/5), clamped below at 0.
inline Interval example2_b_window(double t) {
  if (!(t >= 1.0)) throw NumericError("example2_b_window: defined for t >= 1");
  double denom = -4.0 + (5.0 + t) * (5.0 + t) / (4.0 * (1.0 + 2.0 * t));
  Interval w;
  w.hi = 0.2;
  w.lo = std::max(0.0, (1.0 - t) / 5.0 / denom);
  return w;
}

/// Leading coefficient of Tr L - mu per unit (|z1|^2 + |z2|^2); positive
/// exactly when the weak-Z(q) margin survives near the origin.
inline double example2_weak_coefficient(double t, double a, double b) {
  double parabola_max = t > 1.0 ? (5.0 + t) * (5.0 + t) / (4.0 * (1.0 + 2.0 * t)) : 4.0 - t;
  return (1.0 - t) * (1.0 - a) + (4.0 - parabola_max) * b;
}

}  // namespace levikit::upsilon
