#include <catch2/catch_amalgamated.hpp>

#include "levikit/conditions.hpp"
#include "levikit/upsilon.hpp"

using namespace levikit;
using namespace levikit::conditions;
using Catch::Approx;

namespace {

levi::LeviSpectrum spectrum_of(std::vector<double> eigs) {
  levi::LeviSpectrum s;
  s.eigenvalues = std::move(eigs);
  for (double v : s.eigenvalues) s.scale = std::max(s.scale, std::abs(v));
  int m = static_cast<int>(s.eigenvalues.size());
  s.eigenvectors.assign(m, std::vector<cplx>(m, cplx(0)));
  for (int i = 0; i < m; ++i) s.eigenvectors[i][i] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("classify_signs") {
  SignCounts c = classify_signs(spectrum_of({-1, 0, 2}), 1e-9);
  CHECK(c.negative == 1);
  CHECK(c.zero == 1);
  CHECK(c.positive == 1);

  SignCounts tiny = classify_signs(spectrum_of({1e-15, 1e-15}), 1e-9);
  CHECK(tiny.negative == 0);
  CHECK(tiny.zero == 2);
  CHECK(tiny.positive == 0);

  // Example 1 pattern at z2 = 0, r > 0
  SignCounts ex1 = classify_signs(spectrum_of({-0.2, 0.0999}), 1e-9);
  CHECK(ex1.negative == 1);
  CHECK(ex1.positive == 1);
  CHECK(ex1.zero == 0);

  CHECK_THROWS_AS(classify_signs(spectrum_of({1}), 0.0), NumericError);
}

TEST_CASE("check_Zq") {
  // n = 3 throughout
  CHECK(check_Zq(spectrum_of({-1, -1}), 1, 1e-9).kind == VerdictKind::Holds);
  ConditionVerdict f = check_Zq(spectrum_of({-1, 1}), 1, 1e-9);
  CHECK(f.kind == VerdictKind::Fails);
  REQUIRE(f.witness.has_value());
  CHECK(f.witness->counts.negative == 1);
  CHECK(check_Zq(spectrum_of({1, 1}), 1, 1e-9).kind == VerdictKind::Holds);
  CHECK_THROWS_AS(check_Zq(spectrum_of({1, 1}), 3, 1e-9), NumericError);
}

TEST_CASE("necessary_min_A: examples") {
  // Example 1: q = 2, lambda = (-t r, r/(4r^4+1))
  for (double t : {1.0, 2.0, 5.0}) {
    for (double r : {0.2, 0.025}) {
      double denom = 4.0 * std::pow(r, 4) + 1.0;
      ConditionVerdict v = necessary_min_A(spectrum_of({-t * r, r / denom}), 2, 1e-9);
      REQUIRE(v.kind == VerdictKind::Holds);
      CHECK(*v.value == Approx(1.0 + t * denom).epsilon(1e-12));
    }
  }
  CHECK(necessary_min_A(spectrum_of({0, 0}), 1, 1e-9).kind == VerdictKind::TriviallySatisfied);
  ConditionVerdict v = necessary_min_A(spectrum_of({-1, 1}), 2, 1e-9);
  REQUIRE(v.kind == VerdictKind::Holds);
  CHECK(*v.value == Approx(2.0));
  // L ~ 0 with R > 0: no finite A
  CHECK(necessary_min_A(spectrum_of({-1, 1}), 1, 1e-9).kind == VerdictKind::Infeasible);
}

TEST_CASE("epsilon verdicts") {
  CHECK(epsilon_almost_pseudoconvex(spectrum_of({1, 2}), 1, 1e-9).kind ==
        VerdictKind::TriviallySatisfied);
  CHECK(epsilon_almost_pseudoconvex(spectrum_of({-1, 3}), 1, 1e-9).kind ==
        VerdictKind::Infeasible);
  ConditionVerdict v = epsilon_almost_pseudoconvex(spectrum_of({-1, 3}), 2, 1e-9);
  REQUIRE(v.kind == VerdictKind::Holds);
  CHECK(*v.value == Approx(2.0));
  {
    // brute-force epsilon grid agrees with the closed-form ratio
    auto spec = spectrum_of({-1, 3});
    double first_q = -1 + 3;
    double neg = 1;
    double best = 0;
    for (double eps = 0.0; eps <= 5.0; eps += 1e-4)
      if (first_q >= eps * neg) best = eps;
    CHECK(best == Approx(*v.value).margin(2e-4));
  }

  CHECK(epsilon_almost_pseudoconcave(spectrum_of({-2, -1}), 1, 1e-9).kind ==
        VerdictKind::TriviallySatisfied);
  CHECK(epsilon_almost_pseudoconcave(spectrum_of({-3, 1}), 1, 1e-9).kind ==
        VerdictKind::Infeasible);
  CHECK(epsilon_almost_pseudoconcave(spectrum_of({-3, -2, 1}), 2, 1e-9).kind ==
        VerdictKind::Infeasible);
  CHECK(epsilon_almost_pseudoconcave(spectrum_of({-3, -2, -1}), 2, 1e-9).kind ==
        VerdictKind::TriviallySatisfied);
  ConditionVerdict pc = epsilon_almost_pseudoconcave(spectrum_of({-3, -2, 1}), 1, 1e-9);
  REQUIRE(pc.kind == VerdictKind::Holds);
  CHECK(*pc.value == Approx(1.0));  // -(lambda2+lambda3)/lambda3 = -(-2+1)/1
}

TEST_CASE("weak Z(q) margin") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 2\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)");
  double r = 0.1;
  std::vector<cplx> z{cplx(r, 0), cplx(0, 0), cplx(0, 2.0 / 3.0 * r * r * r)};
  expr::Jet2 jet = expr::eval_jet2(f, z);
  levi::Frame fr = levi::tangential_frame(jet);
  levi::LeviSpectrum spec = levi::levi_spectrum(levi::levi_matrix(jet, fr));

  // Upsilon = 0: margin is the partial eigenvalue sum
  CMatrix zero(3, 3);
  CHECK(check_weak_zq(spec, 2, jet, zero) ==
        Approx(spec.eigenvalues[0] + spec.eigenvalues[1]));

  // scaled tangential field: margin = sum_{j<=q} lambda_j - t Tr L
  double t = 0.3;
  CMatrix u = upsilon::scaled_tangential_matrix(jet, t);
  double margin = check_weak_zq(spec, 2, jet, u);
  CHECK(margin == Approx(spec.eigenvalues[0] + spec.eigenvalues[1] -
                         t * levi::levi_trace_formula(jet))
                      .margin(1e-10));
}

TEST_CASE("admissible t window") {
  Interval w = admissible_t_window(1.0, 3.0, WindowMode::Pcvx);
  CHECK(w.lo == 0.0);
  CHECK(w.hi == Approx(0.25));
  CHECK_FALSE(w.empty());

  Interval winf = admissible_t_window(std::nullopt, 3.0, WindowMode::Pcvx);
  CHECK(winf.hi == Approx(1.0 / 3.0));

  Interval wc = admissible_t_window(1.0, 3.0, WindowMode::Pccv);
  CHECK(wc.lo == Approx(0.75));
  CHECK(wc.hi == 1.0);

  CHECK_THROWS_AS(admissible_t_window(1.0, 2.0, WindowMode::Pcvx), NumericError);
}

TEST_CASE("scale invariance of all verdicts") {
  const char* base = "(2/3)*re(z1)^3 - 2*abs2(z2)*re(z1) - im(z3)";
  for (double c : {0.5, 3.0, 10.0}) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g*((2/3)*re(z1)^3 - 2*abs2(z2)*re(z1) - im(z3))", c);
    expr::DefiningFunction f0 = expr::parse_defining_function(base);
    expr::DefiningFunction fc = expr::parse_defining_function(buf);
    Rng rng(31);
    for (int k = 0; k < 20; ++k) {
      std::vector<cplx> seed(3);
      for (auto& z : seed) z = cplx(0.2 * rng.uniform(-1, 1), 0.2 * rng.uniform(-1, 1));
      levi::PointAnalysis a0 = levi::analyze_point(f0, seed);
      levi::PointAnalysis ac = levi::analyze_point(fc, seed);
      for (int q = 1; q <= 2; ++q) {
        ConditionVerdict v0 = necessary_min_A(a0.spectrum, q, 1e-9);
        ConditionVerdict vc = necessary_min_A(ac.spectrum, q, 1e-9);
        REQUIRE(v0.kind == vc.kind);
        if (v0.kind == VerdictKind::Holds)
          REQUIRE(*v0.value == Approx(*vc.value).epsilon(1e-8));
        REQUIRE(check_Zq(a0.spectrum, q, 1e-9).kind == check_Zq(ac.spectrum, q, 1e-9).kind);
        ConditionVerdict e0 = epsilon_almost_pseudoconvex(a0.spectrum, q, 1e-9);
        ConditionVerdict ec = epsilon_almost_pseudoconvex(ac.spectrum, q, 1e-9);
        REQUIRE(e0.kind == ec.kind);
        if (e0.kind == VerdictKind::Holds) REQUIRE(*e0.value == Approx(*ec.value).epsilon(1e-8));
        ConditionVerdict g0 = epsilon_almost_pseudoconcave(a0.spectrum, q, 1e-9);
        ConditionVerdict gc = epsilon_almost_pseudoconcave(ac.spectrum, q, 1e-9);
        REQUIRE(g0.kind == gc.kind);
        if (g0.kind == VerdictKind::Holds) REQUIRE(*g0.value == Approx(*gc.value).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("necessary_min_A Holds implies a value >= 1") {
  Rng rng(57);
  for (int trial = 0; trial < 5000; ++trial) {
    int m = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> eig(m);
    for (double& v : eig) v = rng.uniform(-1, 1);
    std::sort(eig.begin(), eig.end());
    int q = 1 + static_cast<int>(rng.next_u64() % m);
    ConditionVerdict v = necessary_min_A(spectrum_of(eig), q, 1e-9);
    if (v.kind == VerdictKind::Holds) REQUIRE(*v.value >= 1.0 - 1e-12);
  }
}

TEST_CASE("Z(q) holds implies the necessary condition is feasible") {
  Rng rng(58);
  int zq_holds = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    int m = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> eig(m);
    for (double& v : eig) v = rng.uniform(-1, 1);
    if (trial % 3 == 0) eig[static_cast<int>(rng.next_u64() % m)] = 0.0;
    std::sort(eig.begin(), eig.end());
    int q = 1 + static_cast<int>(rng.next_u64() % m);
    auto spec = spectrum_of(eig);
    if (spec.scale == 0) continue;
    if (check_Zq(spec, q, 1e-9).kind == VerdictKind::Holds) {
      ++zq_holds;
      REQUIRE(necessary_min_A(spec, q, 1e-9).kind != VerdictKind::Infeasible);
    }
  }
  CHECK(zq_holds > 1000);  // the property was actually exercised
}

TEST_CASE("scan_region: flat boundary is trivial everywhere") {
  expr::DefiningFunction f = expr::parse_defining_function("-im(z3)");
  std::vector<cplx> center(3, cplx(0, 0));
  ConditionReport rep = scan_region(f, center, 0.1, 50, 1, 7);
  CHECK(rep.summary.failures == 0);
  CHECK(rep.summary.A_trivial == 50);
  CHECK_FALSE(rep.summary.sup_A_min.has_value());
}

TEST_CASE("scan_region: example 1 sup A_min approaches 1 + t as the radius shrinks") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 2\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)");
  std::vector<cplx> center(3, cplx(0, 0));
  double prev_gap = 1e9;
  for (double radius : {0.4, 0.1, 0.02}) {
    ConditionReport rep = scan_region(f, center, radius, 400, 2, 11);
    REQUIRE(rep.summary.sup_A_min.has_value());
    double gap = std::abs(*rep.summary.sup_A_min - 3.0);
    CHECK(gap <= prev_gap + 1e-9);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.02);  // sup A_min -> 1 + t = 3
}

TEST_CASE("scan_region: example 2 has det L <= 0 near the origin for t = 2") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 2\n(1/4)*(abs2(z1)^2 + abs2(z2)^2) - t*abs2(z1)*abs2(z2) - im(z3)");
  std::vector<cplx> center(3, cplx(0, 0));
  ConditionReport rep = scan_region(f, center, 0.05, 500, 2, 13);
  CHECK(rep.summary.failures == 0);
  CHECK(rep.summary.det_nonpositive_everywhere);
}

TEST_CASE("scan_region is deterministic for a fixed seed") {
  expr::DefiningFunction f = expr::parse_defining_function(
      "param t = 2\n(2/3)*re(z1)^3 - t*abs2(z2)*re(z1) - im(z3)");
  std::vector<cplx> center(3, cplx(0, 0));
  ConditionReport a = scan_region(f, center, 0.1, 60, 2, 12345);
  ConditionReport b = scan_region(f, center, 0.1, 60, 2, 12345);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    REQUIRE(a.points[i].seed == b.points[i].seed);          // bit-identical
    REQUIRE(a.points[i].boundary == b.points[i].boundary);  // bit-identical
    REQUIRE(a.points[i].eigenvalues == b.points[i].eigenvalues);
  }
  ConditionReport c = scan_region(f, center, 0.1, 60, 2, 54321);
  CHECK(a.points[0].seed != c.points[0].seed);
}
