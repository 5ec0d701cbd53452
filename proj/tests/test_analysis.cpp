#include <doctest.h>

#include <cmath>
#include <random>

#include "hbvp/analysis.hpp"
#include "hbvp/config.hpp"
#include "hbvp/gallery.hpp"

using namespace hbvp;
using nlohmann::json;

namespace {

json dirichlet_family(const std::string& a0, const std::string& rhs, const std::string& c1) {
  return {{"r", 2}, {"m", 1}, {"n", 0}, {"alpha", 0.5}, {"interval", {0, 1}}, {"eps0", 1},
          {"coeffs", {{{a0}}, {{"0"}}}}, {"rhs", {rhs}},
          {"boundary",
           {{"point_terms",
             {{{"order", 0}, {"point", 0}, {"coeff", {{"1"}, {"0"}}}},
              {{"order", 0}, {"point", 1}, {"coeff", {{"0"}, {"1"}}}}}}}},
          {"target", {"0", c1}}};
}

std::vector<double> sweep_eps(int count = 20) { return geometric_sequence(1.0, 0.5, count); }

}  // namespace

TEST_CASE("geometric sequence") {
  const auto e = geometric_sequence(1.0, 0.5, 3);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == 0.5);
  CHECK(e[2] == 0.125);
}

TEST_CASE("tail rule") {
  AnalysisOptions o;
  CHECK(tends_to_zero({1, 0.5, 0.25, 0.1, 0.01, 1e-4}, o));
  CHECK_FALSE(tends_to_zero({1, 0.5, 0.25, 0.3, 0.01, 1e-4}, o));   // tail not monotone
  CHECK_FALSE(tends_to_zero({1, 0.9, 0.8, 0.7, 0.6, 0.5}, o));      // final not small
  CHECK_FALSE(tends_to_zero({1e-4, 1e-5}, o));                      // too short
  CHECK(tends_to_zero({0, 0, 1e-15, 0, 0}, o));                     // identically zero
  CHECK(tends_to_zero({1, 0.1, 0.01, 1e-3, 1e-14, 1e-15}, o));       // noise floor reached
  CHECK_FALSE(tends_to_zero({1, 0.1, NAN, 1e-3, 1e-4, 1e-5}, o));
}

TEST_CASE("default probes") {
  const ProblemFamily fam = gallery("F5_multipoint_integral");
  const auto p = default_probes(fam, 16);
  CHECK(static_cast<int>(p.size()) >= 2 * fam.r * fam.m);
  CHECK(p.size() == static_cast<std::size_t>((fam.r + 5) * fam.m));
  CHECK(std::abs(p[1].at(0.3)(1, 0) - 1.0) < 1e-15);  // t^0 e_2
}

TEST_CASE("discrepancy oracles") {
  AnalysisOptions o;
  const ProblemFamily f1 = gallery("F1_smooth_perturb");
  const Solution s = solve_bvp(instantiate(f1, 0.3, 32));
  CHECK(discrepancy(f1, 0.3, s.y, f1.idx, o).total() <= 1e-8);

  // f shifted by a constant delta: d = |delta|
  const ProblemFamily shifted = family_from_json(dirichlet_family("1", "1+eps", "1"));
  const Solution s0 = solve_bvp(instantiate(shifted, 0.0, 32));
  const Discrepancy d = discrepancy(shifted, 0.125, s0.y, shifted.idx, o);
  CHECK(d.interior == doctest::Approx(0.125).epsilon(1e-8));
  CHECK(d.boundary <= 1e-13);
}

TEST_CASE("limit conditions on F1, F4 and an eps-independent family") {
  AnalysisOptions o;
  const auto eps = sweep_eps();
  const ProblemFamily f1 = gallery("F1_smooth_perturb");
  const auto r1 = limit_conditions_report(f1, eps, default_probes(f1, 32), f1.idx, o);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CHECK(r1.condI_norms[k][0] == doctest::Approx(eps[k]).epsilon(1e-12));
    CHECK(r1.condI_norms[k][1] == 0.0);
  }
  CHECK(r1.verdict_I);
  CHECK(r1.verdict_II);

  const ProblemFamily f4 = gallery("F4_limitI_violated");
  const auto r4 = limit_conditions_report(f4, eps, default_probes(f4, 32), f4.idx, o);
  CHECK_FALSE(r4.verdict_I);
  for (std::size_t k = 0; k < eps.size(); ++k) CHECK(r4.condI_norms[k][0] > 0.5);

  const ProblemFamily fixed = family_from_json(dirichlet_family("1+t", "t", "1"));
  const auto rf = limit_conditions_report(fixed, eps, default_probes(fixed, 32), fixed.idx, o);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CHECK(rf.condI_norms[k][0] == 0.0);
    CHECK(rf.condII_probe[k] == 0.0);
    CHECK(rf.condIII_norm[k] == 0.0);
    CHECK(rf.condIV[k] == 0.0);
  }
  CHECK(rf.verdict_I);
  CHECK(rf.verdict_IV);
}

TEST_CASE("two-sided sweep on F1 and F2") {
  AnalysisOptions o;
  for (const char* name : {"F1_smooth_perturb", "F2_boundary_perturb"}) {
    CAPTURE(name);
    const ProblemFamily fam = gallery(name);
    const auto eps = sweep_eps();
    const SweepReport rep = two_sided_sweep(fam, eps, fam.idx, o);
    REQUIRE(rep.records.size() == 20);
    REQUIRE(rep.kappa_low);
    CHECK(*rep.kappa_high / *rep.kappa_low <= 1e2);
    CHECK(rep.band_ok);
    CHECK(rep.error_tends_to_zero);
    for (const auto& r : rep.records) {
      CHECK(r.solved);
      REQUIRE(r.ratio);
      CHECK(*rep.kappa_low <= *r.ratio);
      CHECK(*r.ratio <= *rep.kappa_high);
      // error <= kappa_high d and d <= certificate * error
      CHECK(r.error <= *rep.kappa_high * r.discrepancy * (1 + 1e-12));
      CHECK(r.discrepancy <= discrepancy_certificate(fam, r.eps, fam.idx, o) * r.error);
    }
  }
}

TEST_CASE("degenerate sweep: fixed data gives zero error and no ratio") {
  const ProblemFamily fixed = family_from_json(dirichlet_family("1+t", "t", "1"));
  const SweepReport rep = two_sided_sweep(fixed, {0.5, 0.25}, fixed.idx);
  for (const auto& r : rep.records) {
    CHECK(r.error <= 1e-14);
    CHECK_FALSE(r.ratio);
  }
  CHECK_FALSE(rep.kappa_low);
  const SweepReport single = two_sided_sweep(gallery("F1_smooth_perturb"), {0.0}, fixed.idx);
  CHECK(single.records.size() == 1);
  CHECK_FALSE(single.records[0].ratio);
}

TEST_CASE("sweep refuses a singular limit problem") {
  const ProblemFamily f3 = gallery("F3_cond0_violated");
  CHECK_THROWS_AS(two_sided_sweep(f3, {0.5}, f3.idx), ConditionZeroViolated);
}

TEST_CASE("parallel sweep is deterministic") {
  const ProblemFamily fam = gallery("F2_boundary_perturb");
  AnalysisOptions seq;
  AnalysisOptions par;
  par.jobs = 4;
  const auto eps = sweep_eps(8);
  const SweepReport a = two_sided_sweep(fam, eps, fam.idx, seq);
  const SweepReport b = two_sided_sweep(fam, eps, fam.idx, par);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CHECK(a.records[k].error == b.records[k].error);
    CHECK(a.records[k].discrepancy == b.records[k].discrepancy);
  }
}

TEST_CASE("continuity suite on F1, F3, F4") {
  const auto eps = sweep_eps();
  const auto v1 = main_theorem_suite(gallery("F1_smooth_perturb"), eps, gallery("F1_smooth_perturb").idx);
  CHECK(v1.criterion);
  CHECK(v1.behavior);
  CHECK(v1.agreement);

  const auto f3 = gallery("F3_cond0_violated");
  const auto v3 = main_theorem_suite(f3, eps, f3.idx);
  CHECK_FALSE(v3.condition_zero);
  CHECK_FALSE(v3.solvable);
  CHECK(v3.agreement);

  const auto f4 = gallery("F4_limitI_violated");
  const auto v4 = main_theorem_suite(f4, eps, f4.idx);
  CHECK(v4.condition_zero);
  CHECK_FALSE(v4.limit_I);
  CHECK_FALSE(v4.behavior);
  CHECK(v4.agreement);
}

TEST_CASE("monomial extraction: constant coefficients by hand") {
  // r = 2, m = 1, A_0 = 2, A_1 = 3: L(1) = 2, L(t) = 3 + 2t
  const ProblemFamily fam = family_from_json(json{
      {"r", 2}, {"m", 1}, {"n", 0}, {"alpha", 1}, {"interval", {0, 1}}, {"eps0", 1},
      {"coeffs", {{{"2"}}, {{"3"}}}}, {"rhs", {"0"}},
      {"boundary", {{"point_terms", {{{"order", 0}, {"point", 0}, {"coeff", {{1}, {0}}}},
                                     {{"order", 0}, {"point", 1}, {"coeff", {{0}, {1}}}}}}}},
      {"target", {0, 0}}});
  const auto a = extract_coefficients_monomials(fam, 0.0, 16);
  REQUIRE(a.size() == 2);
  CHECK(sup_norm(a[0] - GridFunction::constant(Eigen::MatrixXcd::Constant(1, 1, 2.0), fam.interval, 16)) < 1e-13);
  CHECK(sup_norm(a[1] - GridFunction::constant(Eigen::MatrixXcd::Constant(1, 1, 3.0), fam.interval, 16)) < 1e-13);
}

TEST_CASE("monomial extraction is exact for random polynomial coefficients (property)") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 6);
  for (int trial = 0; trial < 12; ++trial) {
    const int r = 1 + trial % 3;
    const int m = 1 + (trial / 3) % 2;
    const int n = 24;
    std::vector<GridFunction> coeffs;
    for (int l = 0; l < r; ++l) {
      std::vector<Expr> entries;
      for (int e = 0; e < m * m; ++e) {
        Expr p;
        const int d = deg(rng);
        for (int k = 0; k <= d; ++k) p = p + Expr::constant(c(rng)) * pow(Expr::t(), k);
        entries.push_back(p);
      }
      coeffs.push_back(GridFunction::from_exprs(entries, m, m, Interval{-1, 1}, n));
    }
    auto op = [&](const GridFunction& z) {
      std::vector<GridFunction> d{z};
      for (int k = 1; k <= r; ++k) d.push_back(differentiate(d.back()));
      GridFunction out = d[static_cast<std::size_t>(r)];
      for (int l = 0; l < r; ++l) out = out + product(coeffs[static_cast<std::size_t>(l)], d[static_cast<std::size_t>(l)]);
      return out;
    };
    const auto got = extract_coefficients_monomials(op, r, m, Interval{-1, 1}, n);
    for (int l = 0; l < r; ++l)
      CHECK(sup_norm(got[static_cast<std::size_t>(l)] - coeffs[static_cast<std::size_t>(l)].without_source()) <= 1e-10);
  }
}

TEST_CASE("monomial extraction round trip on F1") {
  const ProblemFamily fam = gallery("F1_smooth_perturb");
  const auto got = extract_coefficients_monomials(fam, 0.4, 32);
  const ProblemInstance inst = instantiate(fam, 0.4, 32);
  for (int l = 0; l < 2; ++l)
    CHECK(sup_norm(got[static_cast<std::size_t>(l)] - inst.coeffs[static_cast<std::size_t>(l)]) <= 1e-9);
}

TEST_CASE("operator convergence check") {
  const auto eps = sweep_eps();
  const ProblemFamily f1 = gallery("F1_smooth_perturb");
  const auto t1 = theorem2_equivalence_check(f1, eps, default_probes(f1, 32), f1.idx);
  for (std::size_t k = 0; k < eps.size(); ++k) CHECK(t1.S[k] == doctest::Approx(eps[k]).epsilon(1e-12));
  CHECK(t1.bound_holds);
  CHECK(t1.S_tends_to_zero);
  CHECK(t1.P_tends_to_zero);
  CHECK(t1.consistent);

  const ProblemFamily fixed = family_from_json(dirichlet_family("1+t", "t", "1"));
  const auto tf = theorem2_equivalence_check(fixed, eps, default_probes(fixed, 32), fixed.idx);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CHECK(tf.S[k] == 0.0);
    CHECK(tf.P[k] == 0.0);
  }

  const ProblemFamily f4 = gallery("F4_limitI_violated");
  const auto t4 = theorem2_equivalence_check(f4, eps, default_probes(f4, 32), f4.idx);
  CHECK(t4.bound_holds);
  CHECK_FALSE(t4.S_tends_to_zero);
  CHECK_FALSE(t4.P_tends_to_zero);
}

TEST_CASE("boundedness probe for B") {
  const auto eps = sweep_eps();
  const ProblemFamily dir = gallery("F1_smooth_perturb");
  const auto rd = boundedness_probe_B(dir, eps, default_probes(dir, 32));
  CHECK(rd.bounded);
  for (double e : rd.estimates) CHECK(e == doctest::Approx(rd.estimates.front()));

  json blow = dirichlet_family("1", "1", "1");
  blow["boundary"]["point_terms"][0]["coeff"] = {{"1/eps"}, {"0"}};
  const ProblemFamily fb = family_from_json(blow);
  const auto rb = boundedness_probe_B(fb, eps, default_probes(fb, 32));
  CHECK_FALSE(rb.bounded);
  // the y(0)/eps row dominates once eps is small: consecutive estimates double
  const std::size_t n = rb.estimates.size();
  CHECK(rb.estimates[n - 1] / rb.estimates[n - 2] == doctest::Approx(2.0).epsilon(1e-5));
}
