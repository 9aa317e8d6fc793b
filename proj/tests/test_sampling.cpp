#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "homsamp/error.hpp"
#include "homsamp/sampling.hpp"
#include "support.hpp"

using namespace homsamp;

TEST_CASE("exponents and the level formula") {
  SpaceParams p;
  CHECK(required_level(0.5, 4.0, 2.0, p, 1.0) == 6);
  CHECK(required_level(0.5, 1.0, 2.0, p, 0.5) == 0);
  CHECK(sampling_alpha(1.0, 2.0, 0.5) == 4.0);
  CHECK(sampling_beta(1.0, 2.0, 0.5) == 2.0);
  CHECK(sampling_alpha(2.0, 1.0, 1.0) == 1.0);
  CHECK(sampling_beta(2.0, 1.0, 1.0) == 2.0);
  CHECK(required_level(0.5, 4.0, kInfinity, p, 1.0) == kUnboundedLevel);
  CHECK(required_level(0.5, 4.0, 2.0, p, 1.0, 3) == int(std::ceil(2 * std::log(8.0) / std::log(3.0))));
  CHECK_THROWS_AS(required_level(1.0, 2.0, 2.0, p, 1.0), InvalidArgument);
  CHECK_THROWS_AS(required_level(0.0, 2.0, 2.0, p, 1.0), InvalidArgument);
  CHECK_THROWS_AS(required_level(0.5, 0.5, 2.0, p, 1.0), InvalidArgument);
}

TEST_CASE("level formula is monotone") {
  SpaceParams sp;
  for (double p : {1.0, 2.0, 3.0}) {
    for (double kappa : {0.01, 1.0, 30.0}) {
      int prev_k = std::numeric_limits<int>::min();
      for (double K = 1; K < 1e4; K *= 1.7) {
        const int l = required_level(0.25, K, p, sp, kappa);
        CHECK(l >= prev_k);
        prev_k = l;
      }
      int prev_e = std::numeric_limits<int>::max();
      for (double eps = 0.01; eps < 1.0; eps += 0.05) {
        const int l = required_level(eps, 5.0, p, sp, kappa);
        CHECK(l <= prev_e);
        prev_e = l;
      }
    }
  }
}

TEST_CASE("sampling operator examples") {
  const auto& fx = testing::fixture("torus-1d", 256, 8);
  std::vector<double> c(fx.space.size(), 2.5);
  for (int l = 0; l <= 8; ++l) {
    CHECK(sample_operator(fx.system, c, l) == c);
    CHECK(sampling_error(fx.space, fx.system, c, l, 2.0) == 0.0);
    CHECK(discrete_norm(fx.space, fx.system, c, l, 2.0) == doctest::Approx(2.5));
  }
  // indicator of a level-l cube is reproduced
  const int l = 4;
  const Cube& q = fx.system.cube(l, 5);
  std::vector<double> ind(fx.space.size(), 0.0);
  for (auto x : q.members) ind[x] = 1.0;
  CHECK(sample_operator(fx.system, ind, l) == ind);
  double mu = 0.0;
  for (auto x : q.members) mu += fx.space.weight(x);
  CHECK(discrete_norm(fx.space, fx.system, ind, l, 3.0) == doctest::Approx(std::pow(mu, 1.0 / 3)));
  // sawtooth at four cubes: staircase through the cube-centre values
  const auto saw = evaluate_function("saw", fx.space);
  const auto s2 = sample_operator(fx.system, saw, 2);
  for (std::size_t x = 0; x < saw.size(); ++x) {
    CHECK(s2[x] == saw[fx.system.cube(2, fx.system.locate(x, 2)).center]);
  }
  std::vector<double> distinct(s2.begin(), s2.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  CHECK(distinct.size() == 4);
  CHECK_THROWS_AS(sample_operator(fx.system, saw, 9), InvalidArgument);
}

TEST_CASE("staircase identity, triangle consequence and idempotence") {
  const auto& fx = testing::fixture("torus-1d", 512, 9);
  testing::Gen gen(8);
  for (int t = 0; t < 20; ++t) {
    const auto f = gen.values(fx.space.size());
    for (int l = 0; l <= 9; ++l) {
      const auto s = sample_operator(fx.system, f, l);
      CHECK(sample_operator(fx.system, s, l) == s);
      for (double p : {1.0, 2.0, 3.0, kInfinity}) {
        const double dn = discrete_norm(fx.space, fx.system, f, l, p);
        CHECK(std::abs(lp_norm(fx.space, s, p) - dn) <= 1e-12 * dn);
        CHECK(std::abs(lp_norm(fx.space, f, p) - dn) <=
              sampling_error(fx.space, fx.system, f, l, p) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("sin error decays geometrically") {
  const auto& fx = testing::fixture("torus-1d", 4096, 12);
  const auto f = evaluate_function("sin:1", fx.space);
  for (int l = 3; l <= 10; ++l) {
    const double a = sampling_error(fx.space, fx.system, f, l, 2.0);
    const double b = sampling_error(fx.space, fx.system, f, l + 1, 2.0);
    CHECK(b / a <= 0.6);
  }
}

TEST_CASE("theorem check on a constant") {
  const auto& fx = testing::fixture("torus-1d", 256, 8);
  std::vector<double> c(fx.space.size(), 1.0);
  for (double eps : {0.9, 0.5, 0.1}) {
    const auto r = verify_sampling_theorem(fx.space, fx.system, fx.frame, c, eps, 0.01);
    CHECK(r.status == SamplingStatus::pass);
    CHECK(r.error == 0.0);
    CHECK(r.discrete_norm == doctest::Approx(r.lp_f));
    CHECK(std::isfinite(r.K_f));
    CHECK(r.pass_error == (r.error <= eps * r.lp_f));
  }
  std::vector<double> zero(fx.space.size(), 0.0);
  CHECK_THROWS_AS(verify_sampling_theorem(fx.space, fx.system, fx.frame, zero, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("clamping and unresolvable levels") {
  const auto& fx = testing::fixture("torus-1d", 256, 8);
  const auto f = evaluate_function("sin:1", fx.space);
  const auto low = verify_sampling_theorem(fx.space, fx.system, fx.frame, f, 0.5, 1e-9);
  CHECK(low.plan.clamped);
  CHECK(low.plan.level == 0);
  const auto high = verify_sampling_theorem(fx.space, fx.system, fx.frame, f, 0.1, 1e9);
  CHECK(high.status == SamplingStatus::unresolvable);
  CHECK(high.note.find("unresolvable") == 0);
  const auto fine = verify_sampling_theorem(fx.space, fx.system, fx.frame, f, 0.9, 1.0);
  const auto coarse = verify_sampling_theorem(fx.space, fx.system, fx.frame, f, 0.1, 1.0);
  CHECK(fine.plan.formula_level <= coarse.plan.formula_level);
  const auto fixed = verify_sampling_theorem(fx.space, fx.system, fx.frame, f, 0.5, 1.0, 2.0, 3.0);
  CHECK(fixed.plan.K == 3.0);
}

TEST_CASE("kappa calibration") {
  const auto& fx = testing::fixture("torus-1d", 1024, 10);
  std::vector<double> one(fx.space.size(), 1.0);
  const auto consts = calibrate_kappa(fx.space, fx.system, fx.frame, {one}, {"const"}, 2.0, {0.5, 0.1});
  CHECK(consts.found);
  CHECK(consts.grid_index == kKappaGridMin);

  std::vector<std::vector<double>> fam;
  std::vector<std::string> names;
  for (const char* n : {"sin:1", "sin:2"}) {
    names.emplace_back(n);
    fam.push_back(evaluate_function(n, fx.space));
  }
  const auto base = calibrate_kappa(fx.space, fx.system, fx.frame, fam, names, 2.0, {0.5, 0.25});
  REQUIRE(base.found);
  names.emplace_back("sin:6");
  fam.push_back(evaluate_function("sin:6", fx.space));
  const auto rough = calibrate_kappa(fx.space, fx.system, fx.frame, fam, names, 2.0, {0.5, 0.25});
  REQUIRE(rough.found);
  CHECK(rough.kappa >= base.kappa);
  CHECK(std::pow(1.25, base.grid_index) == base.kappa);

  names.emplace_back("noise:1");
  fam.push_back(evaluate_function("noise:1", fx.space));
  const auto bad = calibrate_kappa(fx.space, fx.system, fx.frame, fam, names, 2.0, {0.1});
  CHECK_FALSE(bad.found);
  CHECK_FALSE(bad.worst_function.empty());
}

TEST_CASE("cardinality diagnostics") {
  const auto& fx = testing::fixture("torus-1d", 4096, 12);
  const auto f = evaluate_function("sin:1", fx.space);
  const auto rec = proof_diagnostics(fx.space, fx.system, fx.frame, f, 6, 2.0);
  CHECK(rec.counts.R_measured <= 4);
  // #Lambda bound regimes agree at j = l
  CHECK(rec.counts.lambda_ratio[6] == double(*std::max_element(rec.counts.lambda_counts[6].begin(),
                                                               rec.counts.lambda_counts[6].end())));
  std::vector<double> zero(fx.space.size(), 0.0);
  const auto z = proof_diagnostics(fx.space, fx.system, fx.frame, zero, 6, 2.0);
  for (const auto& lv : z.E) {
    for (double e : lv) CHECK(e == 0.0);
  }
  CHECK(z.counts.lambda_counts == rec.counts.lambda_counts);
  CHECK(z.counts.R_per_level == rec.counts.R_per_level);
  for (const auto& lv : rec.E) {
    for (double e : lv) CHECK(e >= 0.0);
  }
  CHECK(rec.term_I_a + rec.term_I_b + rec.term_II == doctest::Approx(rec.error));
  CHECK_THROWS_AS(proof_diagnostics(fx.space, fx.system, fx.frame, f, 13, 2.0), InvalidArgument);
}

TEST_CASE("index sets against a brute-force oracle") {
  const auto& fx = testing::fixture("torus-1d", 128, 7);
  const int l = 3;
  const auto rec = cardinality_diagnostics(fx.space, fx.system, fx.frame.C_phi, l);
  for (int j = 0; j <= 7; ++j) {
    const auto& cubes = fx.system.level(j);
    const double r = fx.frame.C_phi * std::pow(2.0, -j);
    std::size_t R = 0;
    for (std::size_t x = 0; x < fx.space.size(); ++x) {
      std::size_t n = 0;
      for (const auto& q : cubes) n += fx.space.distance(x, q.center) <= r;
      R = std::max(R, n);
    }
    CHECK(rec.R_per_level[std::size_t(j)] == R);
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      std::size_t count = 0;
      for (const auto& Q : fx.system.level(l)) {
        bool hit = false;
        for (auto x : Q.members) hit = hit || fx.space.distance(x, cubes[k].center) <= r;
        count += hit;
      }
      CHECK(rec.lambda_counts[std::size_t(j)][k] == count);
    }
  }
}
