#include <catch2/catch_amalgamated.hpp>

#include "levikit/model.hpp"

using namespace levikit;
using namespace levikit::model;
using Catch::Approx;

namespace {

// closed form of the one-variable ratio, from evaluating both Gaussian
// integrals analytically: s^2 / (2 (s + lambda))
double ratio_closed(double lambda, double s) { return s * s / (2.0 * (s + lambda)); }

levi::LeviSpectrum spectrum_of(std::vector<double> eigs) {
  levi::LeviSpectrum s;
  s.eigenvalues = std::move(eigs);
  for (double v : s.eigenvalues) s.scale = std::max(s.scale, std::abs(v));
  return s;
}

}  // namespace

TEST_CASE("gaussian_ratio: closed-form oracle values") {
  CHECK(gaussian_ratio(-1.0, 2.0) == Approx(2.0).margin(1e-6));
  CHECK(gaussian_ratio(0.0, 1.0) == Approx(0.5).margin(1e-9));
  CHECK(gaussian_ratio(1.0, 1e-5) == Approx(ratio_closed(1.0, 1e-5)).epsilon(1e-6));
  CHECK(gaussian_ratio(1.0, 1e-5) < 1e-9);  // ratio -> 0 as s -> 0+
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    double lambda = rng.uniform(-2, 2);
    double s = rng.uniform(0.1, 5.0);
    if (s + lambda <= 0.05) continue;
    REQUIRE(gaussian_ratio(lambda, s) == Approx(ratio_closed(lambda, s)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(gaussian_ratio(-2.0, 1.0), NumericError);  // s + lambda <= 0
  CHECK_THROWS_AS(gaussian_ratio(0.0, 0.0), NumericError);
}

TEST_CASE("gaussian_ratio: quadrature converges under node halving") {
  double lambda = -0.7, s = 2.3;
  double coarse = gaussian_ratio(lambda, s, 0.0, 48);
  double fine = gaussian_ratio(lambda, s, 0.0, 96);
  CHECK(std::abs(fine - coarse) <= 1e-8 * std::abs(fine));
}

TEST_CASE("gaussian_ratio: minimizer near s = -2 lambda for negative lambda") {
  for (double lambda : {-0.5, -1.0, -3.0}) {
    double s_star = golden_section_min(
        [&](double s) { return gaussian_ratio(lambda, s); }, -lambda * 1.001, -8 * lambda, 200);
    CHECK(s_star == Approx(-2.0 * lambda).epsilon(0.01));
    // decreasing then increasing around the minimizer
    CHECK(gaussian_ratio(lambda, -1.5 * lambda) > gaussian_ratio(lambda, -2.0 * lambda));
    CHECK(gaussian_ratio(lambda, -3.0 * lambda) > gaussian_ratio(lambda, -2.0 * lambda));
  }
}

TEST_CASE("min_ratio_sum: closed-form examples") {
  RatioMinimum r1 = min_ratio_sum({-1.0, 1.0});
  CHECK(r1.value == Approx(2.0).epsilon(0.02));
  CHECK(r1.s[0] == Approx(2.0).epsilon(0.05));

  RatioMinimum r2 = min_ratio_sum({1.0, 2.0});
  CHECK(r2.value < 1e-6);

  RatioMinimum r3 = min_ratio_sum({-0.5, -0.5});
  CHECK(r3.value == Approx(2.0).epsilon(0.02));
}

TEST_CASE("certify_A_lower_bound: example 1 eigenvalue pairs") {
  for (double t : {1.0, 2.0, 5.0}) {
    for (double r : {0.2, 0.05}) {
      double denom = 4.0 * std::pow(r, 4) + 1.0;
      ModelData m{{-t * r, r / denom}, 2, 0.0};
      CertifyResult res = certify_A_lower_bound(m);
      REQUIRE(res.kind == conditions::VerdictKind::Holds);
      CHECK(res.A_lb == Approx(1.0 + t * denom).epsilon(0.02));
    }
  }
}

TEST_CASE("certify_A_lower_bound: simple spectra") {
  CertifyResult res = certify_A_lower_bound({{-1.0, 1.0}, 2, 0.0});
  REQUIRE(res.kind == conditions::VerdictKind::Holds);
  CHECK(res.A_lb == Approx(2.0).epsilon(0.02));

  // all-positive spectrum with q = 1: the profile family still forces
  // A >= R/L = 3, matching necessary_min_A on the same spectrum
  CertifyResult res2 = certify_A_lower_bound({{1.0, 2.0}, 1, 0.0});
  REQUIRE(res2.kind == conditions::VerdictKind::Holds);
  CHECK(res2.A_lb == Approx(3.0).epsilon(0.02));

  // pseudoconvex with q = n-1: no violation for any A~ > 1
  CertifyResult res3 = certify_A_lower_bound({{1.0, 2.0}, 2, 0.0});
  CHECK(res3.kind == conditions::VerdictKind::TriviallySatisfied);

  // L <= 0 < R: violated for every A~
  CertifyResult res4 = certify_A_lower_bound({{-1.0, 1.0}, 1, 0.0});
  CHECK(res4.kind == conditions::VerdictKind::Infeasible);

  CHECK_THROWS_AS(certify_A_lower_bound({{0.0, 0.0}, 1, 0.0}), NumericError);
}

TEST_CASE("certify_A_lower_bound agrees with necessary_min_A on random spectra") {
  Rng rng(404);
  int holds = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int m = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> eig(m);
    for (double& v : eig) v = rng.uniform(-1, 1);
    std::sort(eig.begin(), eig.end());
    int q = 1 + static_cast<int>(rng.next_u64() % m);
    auto verdict = conditions::necessary_min_A(spectrum_of(eig), q, 1e-9);
    if (verdict.kind != conditions::VerdictKind::Holds) continue;
    CertifyResult res = certify_A_lower_bound({eig, q, 0.0});
    if (*verdict.value <= 1.0 + 1e-6) continue;  // sentinel boundary
    REQUIRE(res.kind == conditions::VerdictKind::Holds);
    REQUIRE(std::abs(res.A_lb - *verdict.value) <= 0.02 * *verdict.value);
    ++holds;
  }
  CHECK(holds > 10);
}

TEST_CASE("finite_tau_norm: the quadric model itself converges to the limit integral") {
  expr::DefiningFunction f =
      expr::parse_defining_function("abs2(z1) + abs2(z2) - im(z3)");
  levi::BoundaryPoint p = levi::project_to_boundary(f, {cplx(0, 0), cplx(0, 0), cplx(0, 0)});
  GaussianProfile prof;
  prof.s = {1.0, 1.0};
  TauNormEstimate est = finite_tau_norm(f, p, 40.0, prof, 400000, 2027);
  // limit = 1/2 * prod pi/(2 (s_j + 1)) = pi^2/32
  double expected = M_PI * M_PI / 32.0;
  CHECK(est.limit_oracle == Approx(expected).epsilon(1e-12));
  INFO("estimate " << est.value << " +- " << est.std_error << " vs " << expected);
  CHECK(std::abs(est.value - expected) <= 3.0 * est.std_error + 0.01 * expected);
  CHECK(est.converged);
}

TEST_CASE("finite_tau_norm: tau-doubling sequence is Cauchy within errors") {
  expr::DefiningFunction f =
      expr::parse_defining_function("abs2(z1) + abs2(z2) - im(z3)");
  levi::BoundaryPoint p = levi::project_to_boundary(f, {cplx(0, 0), cplx(0, 0), cplx(0, 0)});
  GaussianProfile prof;
  prof.s = {1.5, 0.8};
  double prev = 0, prev_se = 0;
  bool have_prev = false;
  for (double tau : {10.0, 20.0, 40.0}) {
    TauNormEstimate est = finite_tau_norm(f, p, tau, prof, 200000, 5, {});
    if (have_prev)
      CHECK(std::abs(est.value - prev) <= 3.0 * (est.std_error + prev_se) + 0.05 * est.value);
    prev = est.value;
    prev_se = est.std_error;
    have_prev = true;
  }
}

TEST_CASE("finite_tau_norm: example 1 domain matches the model limit at large tau") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 1\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)");
  double r = 0.2;
  std::vector<cplx> z{cplx(r, 0), cplx(0, 0), cplx(0, 2.0 / 3.0 * r * r * r)};
  levi::BoundaryPoint p = levi::project_to_boundary(f, z);
  GaussianProfile prof;
  prof.s = {0.8, 0.8};  // s_1 + lambda_1 ~ 0.6 > 0
  TauNormEstimate est = finite_tau_norm(f, p, 50.0, prof, 600000, 99);
  INFO("estimate " << est.value << " +- " << est.std_error << " vs " << est.limit_oracle);
  CHECK(std::abs(est.value - est.limit_oracle) <=
        0.05 * est.limit_oracle + 3.0 * est.std_error);
}

TEST_CASE("finite_tau_norm: deterministic for a fixed seed") {
  expr::DefiningFunction f =
      expr::parse_defining_function("abs2(z1) + abs2(z2) - im(z3)");
  levi::BoundaryPoint p = levi::project_to_boundary(f, {cplx(0, 0), cplx(0, 0), cplx(0, 0)});
  GaussianProfile prof;
  prof.s = {1.0, 1.0};
  TauNormEstimate a = finite_tau_norm(f, p, 20.0, prof, 50000, 31415);
  TauNormEstimate b = finite_tau_norm(f, p, 20.0, prof, 50000, 31415);
  CHECK(a.value == b.value);  // bit-identical
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("finite_tau_norm: profile must respect the integrability constraint") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 5\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)");
  double r = 0.2;
  std::vector<cplx> z{cplx(r, 0), cplx(0, 0), cplx(0, 2.0 / 3.0 * r * r * r)};
  levi::BoundaryPoint p = levi::project_to_boundary(f, z);
  GaussianProfile bad;
  bad.s = {0.5, 0.5};  // lambda_1 ~ -1 (after normalization) exceeds s_1
  CHECK_THROWS_AS(finite_tau_norm(f, p, 30.0, bad, 1000, 1), NumericError);
}
