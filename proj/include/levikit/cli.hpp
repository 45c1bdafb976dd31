#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "levikit/conditions.hpp"
#include "levikit/dfn.hpp"
#include "levikit/json_writer.hpp"
#include "levikit/model.hpp"
#include "levikit/upsilon.hpp"

namespace levikit::cli {

using conditions::ConditionVerdict;
using conditions::VerdictKind;

constexpr const char* kSchemaVersion = "1";

enum ExitCode { kOk = 0, kInputError = 1, kConditionFailure = 2, kNumericalFailure = 3 };

struct RunConfig {
  std::string input_path;
  int q = 1;
  double A = 3.0;
  std::optional<double> t_override;
  std::optional<std::vector<double>> center;  // 2n reals
  double radius = 0.05;
  int samples = 200;
  std::uint64_t seed = 1;
  std::string out_path;
  Tolerances tol;
  std::optional<double> eta;            // certify: overrides the file's eta
  std::string preset;                   // certify: "", "tangential", "example2", "zq"
  std::optional<double> preset_t;       // tangential scaling
  double preset_a = 0.8;                // zq / example2 parameters
  std::optional<double> preset_b;
  std::vector<double> radius_sweep;     // scan: extra radii for a sweep table
  std::string which;                    // reproduce: example1 | example2
  std::optional<double> tau;            // model: finite-tau diagnostic
};

struct CmdResult {
  int code = kOk;
  std::string json;
  std::string table;  // human-readable summary for stderr
};

namespace detail {

inline Json point_json(const std::vector<cplx>& z) {
  Json a = Json::array();
  for (const cplx& c : z) {
    a.push(c.real());
    a.push(c.imag());
  }
  return a;
}

inline Json verdict_json(const ConditionVerdict& v, bool epsilon_sentinel) {
  Json o = Json::object();
  o.set("kind", conditions::to_string(v.kind));
  if (v.kind == VerdictKind::Holds && v.value)
    o.set("value", *v.value);
  else if (v.kind == VerdictKind::TriviallySatisfied && epsilon_sentinel)
    o.set("value", "inf");
  if (v.witness) {
    Json w = Json::object();
    Json eig = Json::array();
    for (double l : v.witness->eigenvalues) eig.push(l);
    w.set("eigenvalues", std::move(eig));
    w.set("negative", v.witness->counts.negative);
    w.set("zero", v.witness->counts.zero);
    w.set("positive", v.witness->counts.positive);
    o.set("witness", std::move(w));
  }
  return o;
}

inline bool verdict_bad(const ConditionVerdict& v) {
  return v.kind == VerdictKind::Fails || v.kind == VerdictKind::Infeasible;
}

inline std::vector<cplx> resolve_center(const RunConfig& cfg, const dfn::InputFile& file) {
  int n = file.rho.n;
  if (cfg.center) {
    if (static_cast<int>(cfg.center->size()) != 2 * n)
      throw Error("--center needs " + std::to_string(2 * n) + " reals for n = " + std::to_string(n));
    std::vector<cplx> c(n);
    for (int j = 0; j < n; ++j) c[j] = cplx((*cfg.center)[2 * j], (*cfg.center)[2 * j + 1]);
    return c;
  }
  if (file.anchor) return *file.anchor;
  throw Error("no anchor point: pass --center or add an [anchor] section");
}

inline expr::ParamMap overrides_of(const RunConfig& cfg) {
  expr::ParamMap o;
  if (cfg.t_override) o["t"] = *cfg.t_override;
  return o;
}

inline Json config_json(const RunConfig& cfg, const dfn::InputFile& file,
                        const expr::ParamMap& overrides) {
  Json o = Json::object();
  o.set("input", cfg.input_path);
  o.set("n", file.rho.n);
  o.set("q", cfg.q);
  Json params = Json::object();
  for (const auto& [k, v] : file.rho.merged(overrides)) params.set(k, v);
  o.set("parameters", std::move(params));
  return o;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string verdict_text(const ConditionVerdict& v) {
  std::string s = conditions::to_string(v.kind);
  if (v.kind == VerdictKind::Holds && v.value) s += " (" + fmt(*v.value) + ")";
  return s;
}

}  // namespace detail

/// `levi analyze`: project the anchor to the boundary, report the jet data,
/// spectrum, trace/determinant cross-checks, and every condition verdict.
inline CmdResult cmd_analyze(const RunConfig& cfg) {
  dfn::InputFile file = dfn::load_file(cfg.input_path);
  expr::ParamMap overrides = detail::overrides_of(cfg);
  std::vector<cplx> seed = detail::resolve_center(cfg, file);
  conditions::require_q(cfg.q, file.rho.n);

  levi::PointAnalysis an = levi::analyze_point(file.rho, seed, overrides, cfg.tol);
  expr::GradientNorms norms = expr::eval_gradient_norms(an.point.jet);

  ConditionVerdict zq = conditions::check_Zq(an.spectrum, cfg.q, cfg.tol.sign);
  ConditionVerdict min_a = conditions::necessary_min_A(an.spectrum, cfg.q, cfg.tol.sign);
  ConditionVerdict pcvx = conditions::epsilon_almost_pseudoconvex(an.spectrum, cfg.q, cfg.tol.sign);
  ConditionVerdict pccv = conditions::epsilon_almost_pseudoconcave(an.spectrum, cfg.q, cfg.tol.sign);

  double eig_sum = an.spectrum.sum();
  double eig_prod = an.spectrum.product();

  Json root = Json::object();
  root.set("schema_version", kSchemaVersion);
  root.set("command", "analyze");
  root.set("config", detail::config_json(cfg, file, overrides));
  Json pt = Json::object();
  pt.set("seed", detail::point_json(seed));
  pt.set("boundary", detail::point_json(an.point.coordinates));
  pt.set("residual", an.point.residual);
  root.set("point", std::move(pt));
  Json grad = Json::object();
  grad.set("dbar_norm", norms.dbar);
  grad.set("grad_norm", norms.full);
  root.set("gradient", std::move(grad));
  Json spec = Json::object();
  Json eig = Json::array();
  for (double l : an.spectrum.eigenvalues) eig.push(l);
  spec.set("eigenvalues", std::move(eig));
  spec.set("scale", an.spectrum.scale);
  root.set("spectrum", std::move(spec));
  Json tr = Json::object();
  tr.set("formula", an.trace_formula);
  tr.set("eigen_sum", eig_sum);
  tr.set("residual", std::abs(an.trace_formula - eig_sum));
  root.set("trace", std::move(tr));
  Json dt = Json::object();
  dt.set("formula", an.det_formula);
  dt.set("eigen_product", eig_prod);
  dt.set("residual", std::abs(an.det_formula - eig_prod));
  root.set("determinant", std::move(dt));
  Json verdicts = Json::object();
  verdicts.set("zq", detail::verdict_json(zq, false));
  verdicts.set("necessary_A", detail::verdict_json(min_a, false));
  verdicts.set("eps_almost_pseudoconvex", detail::verdict_json(pcvx, true));
  verdicts.set("eps_almost_pseudoconcave", detail::verdict_json(pccv, true));
  root.set("verdicts", std::move(verdicts));

  CmdResult res;
  res.json = root.dump(2);
  res.table += "analyze " + cfg.input_path + " (q = " + std::to_string(cfg.q) + ")\n";
  res.table += "  eigenvalues:";
  for (double l : an.spectrum.eigenvalues) res.table += " " + detail::fmt(l);
  res.table += "\n  Z(q): " + detail::verdict_text(zq) + "\n";
  res.table += "  necessary A: " + detail::verdict_text(min_a) + "\n";
  res.table += "  eps (almost pcvx): " + detail::verdict_text(pcvx) + "\n";
  res.table += "  eps (almost pccv): " + detail::verdict_text(pccv) + "\n";
  res.code = (detail::verdict_bad(zq) || detail::verdict_bad(min_a) || detail::verdict_bad(pcvx) ||
              detail::verdict_bad(pccv))
                 ? kConditionFailure
                 : kOk;
  return res;
}

namespace detail {

inline Json scan_json(const conditions::ConditionReport& rep) {
  Json o = Json::object();
  o.set("seed", static_cast<std::int64_t>(rep.seed));
  o.set("center", point_json(rep.center));
  o.set("radius", rep.radius);
  o.set("count", rep.count);
  o.set("q", rep.q);
  Json pts = Json::array();
  for (const auto& rec : rep.points) {
    Json p = Json::object();
    p.set("index", rec.index);
    if (rec.failed) {
      p.set("failed", true);
      p.set("error", rec.failure);
      pts.push(std::move(p));
      continue;
    }
    p.set("boundary", point_json(rec.boundary));
    p.set("residual", rec.residual);
    Json eig = Json::array();
    for (double l : rec.eigenvalues) eig.push(l);
    p.set("eigenvalues", std::move(eig));
    p.set("trace", rec.trace);
    p.set("det", rec.det);
    p.set("zq", verdict_json(rec.zq, false));
    p.set("necessary_A", verdict_json(rec.min_A, false));
    p.set("eps_almost_pseudoconvex", verdict_json(rec.eps_pcvx, true));
    p.set("eps_almost_pseudoconcave", verdict_json(rec.eps_pccv, true));
    pts.push(std::move(p));
  }
  o.set("points", std::move(pts));

  const auto& s = rep.summary;
  Json sum = Json::object();
  sum.set("evaluated", s.evaluated);
  sum.set("failures", s.failures);
  sum.set("sup_A_min", s.sup_A_min ? Json(*s.sup_A_min) : Json("trivial"));
  sum.set("inf_eps_pcvx", s.inf_eps_pcvx ? Json(*s.inf_eps_pcvx)
                                         : (s.pcvx_infeasible ? Json("infeasible") : Json("inf")));
  sum.set("inf_eps_pccv", s.inf_eps_pccv ? Json(*s.inf_eps_pccv)
                                         : (s.pccv_infeasible ? Json("infeasible") : Json("inf")));
  sum.set("zq_holds", s.zq_holds);
  sum.set("zq_fails", s.zq_fails);
  sum.set("A_holds", s.A_holds);
  sum.set("A_trivial", s.A_trivial);
  sum.set("A_infeasible", s.A_infeasible);
  sum.set("pcvx_infeasible", s.pcvx_infeasible);
  sum.set("pccv_infeasible", s.pccv_infeasible);
  if (s.evaluated > 0) {
    sum.set("min_det", s.min_det);
    sum.set("max_det", s.max_det);
    sum.set("min_trace", s.min_trace);
    sum.set("max_trace", s.max_trace);
  }
  sum.set("det_nonpositive_at_all_samples", s.det_nonpositive_everywhere);
  o.set("summary", std::move(sum));
  return o;
}

}  // namespace detail

/// `levi scan`: seeded boundary sampling in a ball; optional radius sweep.
inline CmdResult cmd_scan(const RunConfig& cfg) {
  dfn::InputFile file = dfn::load_file(cfg.input_path);
  expr::ParamMap overrides = detail::overrides_of(cfg);
  std::vector<cplx> center = detail::resolve_center(cfg, file);

  conditions::ConditionReport rep = conditions::scan_region(
      file.rho, center, cfg.radius, cfg.samples, cfg.q, cfg.seed, overrides, cfg.tol);

  Json root = Json::object();
  root.set("schema_version", kSchemaVersion);
  root.set("command", "scan");
  root.set("config", detail::config_json(cfg, file, overrides));
  root.set("scan", detail::scan_json(rep));

  bool any_bad = false;
  for (const auto& rec : rep.points)
    if (!rec.failed &&
        (detail::verdict_bad(rec.zq) || detail::verdict_bad(rec.min_A) ||
         detail::verdict_bad(rec.eps_pcvx) || detail::verdict_bad(rec.eps_pccv)))
      any_bad = true;

  CmdResult res;
  res.table += "scan " + cfg.input_path + ": " + std::to_string(rep.summary.evaluated) +
               " points, sup A_min = " +
               (rep.summary.sup_A_min ? detail::fmt(*rep.summary.sup_A_min) : "trivial") + "\n";

  if (!cfg.radius_sweep.empty()) {
    Json sweep = Json::array();
    res.table += "  radius sweep:\n";
    for (double r : cfg.radius_sweep) {
      conditions::ConditionReport rrep = conditions::scan_region(
          file.rho, center, r, cfg.samples, cfg.q, cfg.seed, overrides, cfg.tol);
      Json row = Json::object();
      row.set("radius", r);
      row.set("sup_A_min", rrep.summary.sup_A_min ? Json(*rrep.summary.sup_A_min) : Json("trivial"));
      row.set("failures", rrep.summary.failures);
      sweep.push(std::move(row));
      res.table += "    r = " + detail::fmt(r) + "  sup A_min = " +
                   (rrep.summary.sup_A_min ? detail::fmt(*rrep.summary.sup_A_min) : "trivial") + "\n";
    }
    root.set("radius_sweep", std::move(sweep));
  }

  res.json = root.dump(2);
  if (rep.summary.evaluated == 0)
    res.code = kNumericalFailure;
  else
    res.code = any_bad ? kConditionFailure : kOk;
  return res;
}

namespace detail {

inline Json validation_json(const upsilon::ValidationReport& rep) {
  Json v = Json::object();
  v.set("samples", rep.samples);
  v.set("hermitian_residual", rep.hermitian_residual);
  v.set("min_eig", rep.min_eig);
  v.set("min_eig_complement", rep.min_eig_complement);
  v.set("kernel_residual", rep.kernel_residual);
  v.set("window_count", rep.window_count);
  v.set("window_margin", rep.window_count > 0 ? Json(rep.window_margin) : Json("inf"));
  v.set("weak_zq_margin", rep.weak_zq_margin);
  v.set("theta_bound", rep.theta_bound ? Json(*rep.theta_bound) : Json("inf"));
  if (rep.kernel_identically_zero)
    v.set("interior_decay", "identically-zero");
  else if (rep.decay_slope)
    v.set("interior_decay", *rep.decay_slope);
  else
    v.set("interior_decay", "not-fitted");
  Json checks = Json::object();
  checks.set("hermitian", rep.hermitian_ok);
  checks.set("psd", rep.psd_ok);
  checks.set("kernel", rep.kernel_ok);
  checks.set("window", rep.window_ok);
  checks.set("weak_zq", rep.weak_ok);
  checks.set("interior_decay", rep.decay_ok);
  v.set("checks", std::move(checks));
  v.set("pass", rep.pass());
  return v;
}

inline std::vector<std::vector<cplx>> sample_seeds(const std::vector<cplx>& center, double radius,
                                                   int count, std::uint64_t seed) {
  int n = static_cast<int>(center.size());
  Rng rng(seed);
  std::vector<std::vector<cplx>> seeds;
  seeds.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> dir(2 * n);
    double norm = 0;
    for (double& d : dir) {
      d = rng.gaussian();
      norm += d * d;
    }
    norm = std::sqrt(norm);
    double r = radius * std::pow(rng.uniform_pos(), 1.0 / (2.0 * n));
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) z[j] = center[j] + cplx(dir[j] / norm * r, dir[n + j] / norm * r);
    seeds.push_back(std::move(z));
  }
  return seeds;
}

}  // namespace detail

/// `levi certify`: validate an Upsilon field (from the [upsilon] section or
/// a built-in preset) against every admissibility requirement.
inline CmdResult cmd_certify(const RunConfig& cfg) {
  dfn::InputFile file = dfn::load_file(cfg.input_path);
  expr::ParamMap overrides = detail::overrides_of(cfg);
  std::vector<cplx> center = detail::resolve_center(cfg, file);
  int n = file.rho.n;
  if (!(cfg.A > 2.0)) throw Error("certify requires --A greater than 2");

  CmdResult res;
  Json root = Json::object();
  root.set("schema_version", kSchemaVersion);
  root.set("command", "certify");
  root.set("config", detail::config_json(cfg, file, overrides));
  root.set("A", cfg.A);

  std::optional<upsilon::UpsilonField> field;
  if (cfg.preset == "tangential") {
    double t = cfg.preset_t.value_or(0.5 * (1.0 / cfg.A + 1.0 - 1.0 / cfg.A));
    field = upsilon::UpsilonField::scaled_tangential(n, t, cfg.eta.value_or(0.0));
    root.set("field", "tangential");
    root.set("t", t);
  } else if (cfg.preset == "example2") {
    expr::ParamMap merged = file.rho.merged(overrides);
    auto it = merged.find("t");
    if (it == merged.end()) throw Error("example2 preset needs a parameter t");
    double t = it->second;
    double a = cfg.preset_a;
    double b;
    if (cfg.preset_b) {
      b = *cfg.preset_b;
    } else {
      if (t < 1.0) {
        b = 0.1;
      } else {
        conditions::Interval w = upsilon::example2_b_window(t);
        Json wj = Json::object();
        wj.set("lo", w.lo);
        wj.set("hi", w.hi);
        wj.set("empty", w.empty());
        root.set("b_window", std::move(wj));
        if (w.empty()) {
          root.set("field", "example2");
          root.set("pass", false);
          root.set("reason", "empty b-window at t = " + detail::fmt(t));
          res.json = root.dump(2);
          res.table = "certify: empty b-window at t = " + detail::fmt(t) + "\n";
          res.code = kConditionFailure;
          return res;
        }
        b = 0.5 * (w.lo + w.hi);
      }
    }
    field = upsilon::UpsilonField::example2(a, b, t, cfg.eta.value_or(0.0));
    root.set("field", "example2");
    root.set("a", a);
    root.set("b", b);
    root.set("t", t);
  } else if (cfg.preset == "zq") {
    levi::PointAnalysis anchor = levi::analyze_point(file.rho, center, overrides, cfg.tol);
    double b = cfg.preset_b.value_or(1.0 - 1.5 / cfg.A);
    double a = std::min(cfg.preset_a, 0.5 * b);
    field = upsilon::UpsilonField::zq_construction(anchor, a, b, cfg.tol.sign);
    root.set("field", "zq");
    root.set("a", a);
    root.set("b", b);
  } else if (!cfg.preset.empty()) {
    throw Error("unknown preset '" + cfg.preset + "'");
  } else {
    if (file.upsilon.empty()) throw Error("no [upsilon] section and no --preset given");
    field = upsilon::UpsilonField::from_expressions(n, file.upsilon,
                                                    file.rho.merged(overrides),
                                                    cfg.eta.value_or(file.eta));
    root.set("field", "file");
  }

  auto seeds = detail::sample_seeds(center, cfg.radius, cfg.samples, cfg.seed);
  upsilon::ValidationReport rep =
      upsilon::validate_upsilon(*field, file.rho, cfg.A, cfg.q, seeds, overrides, cfg.tol);

  root.set("validation", detail::validation_json(rep));
  res.json = root.dump(2);
  res.table += "certify " + cfg.input_path + ": " + (rep.pass() ? "pass" : "FAIL") + "\n";
  res.table += "  window count " + std::to_string(rep.window_count) + ", weak-Z(q) margin " +
               detail::fmt(rep.weak_zq_margin) + ", kernel residual " +
               detail::fmt(rep.kernel_residual) + "\n";
  res.code = rep.pass() ? kOk : kConditionFailure;
  return res;
}

/// `levi model`: quadric-model certification of the necessary constant at
/// the anchor spectrum, with optional finite-tau Monte Carlo diagnostic.
inline CmdResult cmd_model(const RunConfig& cfg) {
  dfn::InputFile file = dfn::load_file(cfg.input_path);
  expr::ParamMap overrides = detail::overrides_of(cfg);
  std::vector<cplx> center = detail::resolve_center(cfg, file);

  levi::PointAnalysis an = levi::analyze_point(file.rho, center, overrides, cfg.tol);
  conditions::ConditionVerdict min_a =
      conditions::necessary_min_A(an.spectrum, cfg.q, cfg.tol.sign);

  model::ModelData md;
  md.lambda = an.spectrum.eigenvalues;
  md.q = cfg.q;
  md.A_candidate = cfg.A;

  Json root = Json::object();
  root.set("schema_version", kSchemaVersion);
  root.set("command", "model");
  root.set("config", detail::config_json(cfg, file, overrides));
  Json eig = Json::array();
  for (double l : md.lambda) eig.push(l);
  root.set("eigenvalues", std::move(eig));
  root.set("necessary_A", detail::verdict_json(min_a, false));

  CmdResult res;
  double scale = an.spectrum.scale;
  if (scale <= sign_tolerance(cfg.tol.sign, scale)) {
    root.set("certified_A_lb", "trivial");
    res.table += "model: degenerate spectrum, nothing to certify\n";
  } else {
    model::CertifyResult cert = model::certify_A_lower_bound(md);
    Json cj = Json::object();
    if (cert.kind == VerdictKind::Holds) {
      cj.set("kind", "holds");
      cj.set("value", cert.A_lb);
      Json prof = Json::array();
      for (double s : cert.witness.s) prof.push(s);
      cj.set("witness_profile", std::move(prof));
    } else if (cert.kind == VerdictKind::Infeasible) {
      cj.set("kind", "infeasible");
    } else {
      cj.set("kind", "trivial");
    }
    cj.set("ratio_min", cert.ratio_min);
    root.set("certified_A_lb", std::move(cj));
    if (cert.kind == VerdictKind::Holds && min_a.kind == VerdictKind::Holds)
      root.set("relative_gap", std::abs(cert.A_lb - *min_a.value) / *min_a.value);
    res.table += "model: A_lb = " +
                 (cert.kind == VerdictKind::Holds ? detail::fmt(cert.A_lb)
                                                  : std::string(conditions::to_string(cert.kind))) +
                 ", necessary A = " + detail::verdict_text(min_a) + "\n";
  }

  if (cfg.tau) {
    int m = file.rho.n - 1;
    model::GaussianProfile prof;
    prof.s.resize(m);
    double dbar = an.point.jet.dbar_norm();
    for (int l = 0; l < m; ++l) {
      double lh = an.spectrum.eigenvalues[l] / (2.0 * dbar);
      prof.s[l] = std::max(1.0, -2.0 * lh) + 0.5;
    }
    model::TauNormEstimate est = model::finite_tau_norm(file.rho, an.point, *cfg.tau, prof,
                                                        cfg.samples > 0 ? cfg.samples * 1000 : 200000,
                                                        cfg.seed, overrides, cfg.tol);
    Json tj = Json::object();
    tj.set("tau", *cfg.tau);
    tj.set("value", est.value);
    tj.set("std_error", est.std_error);
    tj.set("acceptance", est.acceptance);
    tj.set("limit_oracle", est.limit_oracle);
    tj.set("converged", est.converged);
    root.set("finite_tau", std::move(tj));
    res.table += "  finite-tau norm at tau = " + detail::fmt(*cfg.tau) + ": " +
                 detail::fmt(est.value) + " +- " + detail::fmt(est.std_error) + " (limit " +
                 detail::fmt(est.limit_oracle) + ")\n";
  }

  res.json = root.dump(2);
  res.code = detail::verdict_bad(min_a) ? kConditionFailure : kOk;
  return res;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

struct ReproRow {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // relative unless absolute flag
  bool absolute = false;
  bool pass = false;
};

namespace detail {

inline ReproRow row_rel(const std::string& name, double computed, double expected, double tol) {
  ReproRow r{name, computed, expected, tol, false, false};
  double denom = std::max(std::abs(expected), 1e-30);
  r.pass = std::abs(computed - expected) / denom <= tol;
  return r;
}

inline ReproRow row_abs(const std::string& name, double computed, double expected, double tol) {
  ReproRow r{name, computed, expected, tol, true, false};
  r.pass = std::abs(computed - expected) <= tol;
  return r;
}

inline ReproRow row_flag(const std::string& name, bool ok) {
  ReproRow r{name, ok ? 1.0 : 0.0, 1.0, 0.0, true, ok};
  r.tolerance = 0.5;
  return r;
}

inline const char* kExample1Text =
    "param t = 1\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)\n";
inline const char* kExample2Text =
    "param t = 1\n(1/4)*(abs2(z1)^2 + abs2(z2)^2) - t*abs2(z1)*abs2(z2) - im(z3)\n";

inline std::vector<ReproRow> reproduce_example1() {
  std::vector<ReproRow> rows;
  expr::DefiningFunction rho = expr::parse_defining_function(kExample1Text);
  const double ts[] = {1.0, 2.0, 5.0};
  const double rs[] = {0.2, 0.1, 0.05, 0.025};
  Tolerances tol;
  for (double t : ts) {
    expr::ParamMap ov{{"t", t}};
    std::vector<double> a_at_r;
    for (double r : rs) {
      // On the boundary exactly: im z3 = (2/3) r^3 when z2 = 0.
      std::vector<cplx> seed = {cplx(r, 0), cplx(0, 0), cplx(0, 2.0 / 3.0 * r * r * r)};
      levi::PointAnalysis an = levi::analyze_point(rho, seed, ov, tol);
      double denom = 4.0 * r * r * r * r + 1.0;
      double l1 = -t * r, l2 = r / denom;
      std::string tag = " (t=" + fmt(t) + ", r=" + fmt(r) + ")";
      rows.push_back(row_rel("lambda1" + tag, an.spectrum.eigenvalues[0], l1, 1e-8));
      rows.push_back(row_rel("lambda2" + tag, an.spectrum.eigenvalues[1], l2, 1e-8));
      conditions::ConditionVerdict v = conditions::necessary_min_A(an.spectrum, 2, tol.sign);
      double a_min = v.kind == VerdictKind::Holds ? *v.value : std::nan("");
      rows.push_back(row_rel("A_min" + tag, a_min, 1.0 + t * denom, 1e-6));
      a_at_r.push_back(a_min);
    }
    // A_min(r) = 1 + t + 4t r^4: extrapolate linearly in r^4 from the two
    // smallest radii.
    double x1 = std::pow(rs[2], 4), x2 = std::pow(rs[3], 4);
    double extrap = a_at_r[3] - x2 * (a_at_r[2] - a_at_r[3]) / (x1 - x2);
    rows.push_back(row_rel("A_min r->0 extrapolation (t=" + fmt(t) + ")", extrap, 1.0 + t, 1e-3));
  }
  return rows;
}

inline std::vector<ReproRow> reproduce_example2() {
  std::vector<ReproRow> rows;
  expr::DefiningFunction rho = expr::parse_defining_function(kExample2Text);
  Tolerances tol;
  const double a = 0.8, b = 0.19;

  // M-matrix closed forms and eigenvalue bounds at seeded random points.
  {
    upsilon::UpsilonField field = upsilon::UpsilonField::example2(a, b, 2.5);
    Rng rng(20240901);
    double max_det_res = 0, max_tr_res = 0, min_eig = 1e300, max_eig = -1e300;
    double max_mu_res = 0;
    expr::ParamMap ov{{"t", 2.5}};
    for (int i = 0; i < 1000; ++i) {
      std::vector<cplx> z(3);
      for (int j = 0; j < 3; ++j) z[j] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
      expr::Jet2 jet = expr::eval_jet2(rho, z, ov);
      CMatrix u = field.evaluate(jet, z);
      double s1 = std::norm(z[0]), s2 = std::norm(z[1]);
      double S = s1 + s2, g = 4.0 * s1 * s2 / (S * S);
      cplx detm = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
      double det_closed = a * a - 4.0 * a * b * (1.0 - g) - b * b * g * g;
      double tr_closed = 2.0 * a - 4.0 * b * (1.0 - g);
      max_det_res = std::max(max_det_res, std::abs(detm - cplx(det_closed)));
      max_tr_res = std::max(max_tr_res, std::abs(u(0, 0) + u(1, 1) - cplx(tr_closed)));
      CMatrix m2(2, 2);
      for (int p = 0; p < 2; ++p)
        for (int qq = 0; qq < 2; ++qq) m2(p, qq) = u(p, qq);
      HermitianEig eig = hermitian_eigensystem(m2);
      min_eig = std::min(min_eig, eig.values.front());
      max_eig = std::max(max_eig, eig.values.back());

      // mu: closed form against the assembled contraction with the rho jet.
      cplx contraction = 0;
      for (int p = 0; p < 2; ++p)
        for (int qq = 0; qq < 2; ++qq) contraction += u(p, qq) * jet.dzdzbar(p, qq);
      double mu = upsilon::mu_example2(z, a, b, 2.5);
      max_mu_res = std::max(max_mu_res, std::abs(contraction - cplx(mu)));
    }
    rows.push_back(row_abs("det M closed form, 1000 points", max_det_res, 0.0, 1e-9));
    rows.push_back(row_abs("Tr M closed form, 1000 points", max_tr_res, 0.0, 1e-9));
    rows.push_back(row_flag("M eigenvalues within [a-4b, a+b]",
                            min_eig >= a - 4 * b - 1e-9 && max_eig <= a + b + 1e-9));
    rows.push_back(row_abs("mu closed form vs contraction, 1000 points", max_mu_res, 0.0, 1e-9));
  }

  // b-window threshold scan with step 1e-4 around (13 + 2 sqrt 31)/9.
  {
    double thresh = upsilon::example2_threshold();
    double flip = -1;
    for (double t = thresh - 0.02; t <= thresh + 0.02; t += 1e-4) {
      if (upsilon::example2_b_window(t).empty()) {
        flip = t;
        break;
      }
    }
    rows.push_back(row_abs("b-window empties at (13+2*sqrt(31))/9", flip, thresh, 2e-4));
    rows.push_back(row_flag("b-window nonempty at t = 2.5",
                            !upsilon::example2_b_window(2.5).empty()));
    rows.push_back(row_flag("b-window empty at t = 2.7", upsilon::example2_b_window(2.7).empty()));
  }

  // Necessary condition for t > 1: det L <= -s (Tr L)^2 over a sampled
  // region for s inside the window (0, (2t-1)/(4(1-t)^2)), and the derived
  // bound A >= 2 sqrt(1+4s)/(sqrt(1+4s)-1) is finite.
  for (double t : {1.5, 3.0}) {
    double s_max = (2.0 * t - 1.0) / (4.0 * (1.0 - t) * (1.0 - t));
    double s = 0.5 * s_max;
    expr::ParamMap ov{{"t", t}};
    std::vector<cplx> center = {cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    conditions::ConditionReport rep =
        conditions::scan_region(rho, center, 0.05, 400, 2, 91, ov, tol);
    bool ok = rep.summary.failures == 0 && rep.summary.evaluated == 400;
    for (const auto& rec : rep.points) {
      if (rec.failed) continue;
      if (!(rec.det <= -s * rec.trace * rec.trace + 1e-12)) ok = false;
    }
    rows.push_back(row_flag("det L <= -s (Tr L)^2 on region (t=" + fmt(t) + ")", ok));
    double root = std::sqrt(1.0 + 4.0 * s);
    double a_bound = 2.0 * root / (root - 1.0);
    rows.push_back(row_flag("derived A bound finite (t=" + fmt(t) + ", A>=" + fmt(a_bound) + ")",
                            std::isfinite(a_bound) && a_bound > 2.0));
  }
  return rows;
}

}  // namespace detail

/// `levi reproduce example1|example2`: closed-form rows from the two example
/// propositions, with one pass/fail row per check.
inline CmdResult cmd_reproduce(const RunConfig& cfg) {
  std::vector<ReproRow> rows;
  if (cfg.which == "example1")
    rows = detail::reproduce_example1();
  else if (cfg.which == "example2")
    rows = detail::reproduce_example2();
  else
    throw Error("reproduce: expected 'example1' or 'example2'");

  Json root = Json::object();
  root.set("schema_version", kSchemaVersion);
  root.set("command", "reproduce");
  root.set("which", cfg.which);
  Json jrows = Json::array();
  bool all = true;
  CmdResult res;
  for (const ReproRow& r : rows) {
    Json o = Json::object();
    o.set("name", r.name);
    o.set("computed", r.computed);
    o.set("expected", r.expected);
    o.set("tolerance", r.tolerance);
    o.set("tolerance_kind", r.absolute ? "absolute" : "relative");
    o.set("pass", r.pass);
    jrows.push(std::move(o));
    all = all && r.pass;
    res.table += std::string(r.pass ? "  pass  " : "  FAIL  ") + r.name + ": " +
                 detail::fmt(r.computed) + " vs " + detail::fmt(r.expected) + "\n";
  }
  root.set("rows", std::move(jrows));
  root.set("pass", all);
  res.json = root.dump(2);
  res.table = "reproduce " + cfg.which + (all ? ": all rows pass\n" : ": FAILURES\n") + res.table;
  res.code = all ? kOk : kConditionFailure;
  return res;
}

}  // namespace levikit::cli
