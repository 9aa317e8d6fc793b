#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "homsamp/error.hpp"
#include "homsamp/space.hpp"
#include "homsamp/verification.hpp"
#include "support.hpp"

using namespace homsamp;

TEST_CASE("torus grid of four points") {
  const auto s = discretize("torus-1d", 4);
  REQUIRE(s.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.points()[i][0] == doctest::Approx(0.25 * double(i)));
    CHECK(s.weight(i) == 0.25);
  }
  CHECK(s.distance(0, 3) == doctest::Approx(0.25));
  CHECK(s.params().A == 1.0);
  CHECK(s.params().d == 1.0);
  CHECK(s.params().theta == 1.0);
}

TEST_CASE("cantor depth two midpoints") {
  const auto s = discretize("cantor-dset(2)", 0);
  REQUIRE(s.size() == 4);
  const double expect[] = {1.0 / 18, 5.0 / 18, 13.0 / 18, 17.0 / 18};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.points()[i][0] == doctest::Approx(expect[i]).epsilon(1e-14));
    CHECK(s.weight(i) == 0.25);
  }
  CHECK(s.params().d == doctest::Approx(std::log(2.0) / std::log(3.0)));
  CHECK(s.natural_scale_base() == 3);
}

TEST_CASE("anisotropic square of sixteen points") {
  const auto s = discretize("anisotropic-square", 16);
  REQUIRE(s.size() == 16);
  CHECK(s.grid()[0] == 4);
  CHECK(s.grid()[1] == 4);
  // (0,0) and (0,.25): index i2 * n1 + i1
  CHECK(s.distance(0, 4) == doctest::Approx(0.5));
  CHECK(s.params().d == 3.0);
  CHECK(s.params().A >= 1.0);
}

TEST_CASE("generator errors") {
  CHECK_THROWS_AS(discretize("sphere", 10), InvalidArgument);
  CHECK_THROWS_AS(discretize("torus-1d", 1), InvalidArgument);
  CHECK_THROWS_AS(discretize("cantor-dset", 10), InvalidArgument);
  CHECK_THROWS_AS(GeneratorSpec::parse("anisotropic-square(round)"), InvalidArgument);
  CHECK(GeneratorSpec::parse("cantor-dset(5)").name() == "cantor-dset(5)");
}

TEST_CASE("metric is symmetric and separates points") {
  for (const char* g : {"torus-1d", "cantor-dset(6)", "anisotropic-square"}) {
    const auto s = discretize(g, 256);
    testing::Gen gen(7);
    for (int t = 0; t < 2000; ++t) {
      const auto i = gen.index(s.size());
      const auto j = gen.index(s.size());
      CHECK(s.distance(i, j) == s.distance(j, i));
      CHECK((s.distance(i, j) == 0.0) == (i == j));
    }
  }
}

TEST_CASE("ball queries agree with brute force") {
  testing::Gen gen(11);
  for (const char* g : {"torus-1d", "cantor-dset(7)", "anisotropic-square", "anisotropic-square(adapted)"}) {
    const auto s = discretize(g, 512);
    for (int t = 0; t < 40; ++t) {
      const auto c = gen.index(s.size());
      const double r = gen.uniform(0.0, 1.1 * s.params().diam);
      for (auto kind : {BallKind::open, BallKind::closed}) {
        std::vector<std::size_t> want;
        for (std::size_t z = 0; z < s.size(); ++z) {
          const double d = s.distance(c, z);
          if (kind == BallKind::open ? d < r : d <= r) want.push_back(z);
        }
        CHECK(s.ball(c, r, kind) == want);
      }
    }
  }
}

TEST_CASE("closed ball at an exact grid distance") {
  const auto s = discretize("torus-1d", 8);
  CHECK(s.ball(0, 0.25, BallKind::open).size() == 3);
  CHECK(s.ball(0, 0.25, BallKind::closed).size() == 5);
}

TEST_CASE("total mass and min separation") {
  CHECK(discretize("torus-1d", 100).total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(discretize("cantor-dset(5)", 0).total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(discretize("torus-1d", 64).min_separation() == doctest::Approx(1.0 / 64));
  CHECK(discretize("cantor-dset(3)", 0).min_separation() == doctest::Approx(2.0 / 27));
}

TEST_CASE("lp_norm examples and properties") {
  const auto s = discretize("torus-1d", 4096);
  std::vector<double> zero(s.size(), 0.0);
  std::vector<double> c(s.size(), -3.0);
  CHECK(lp_norm(s, zero, 2.0) == 0.0);
  for (double p : {1.0, 2.0, 3.5, kInfinity}) CHECK(lp_norm(s, c, p) == doctest::Approx(3.0));
  const auto f = evaluate_function("sin:1", s);
  CHECK(std::abs(lp_norm(s, f, 2.0) - 1.0 / std::sqrt(2.0)) <= 1e-3);
  CHECK_THROWS_AS(lp_norm(s, f, 0.5), InvalidArgument);

  testing::Gen gen(3);
  for (int t = 0; t < 50; ++t) {
    const auto g = gen.values(s.size());
    const double a = gen.uniform(-5, 5);
    std::vector<double> ag(g.size());
    std::vector<double> bigger(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      ag[i] = a * g[i];
      bigger[i] = g[i] + (g[i] >= 0 ? 0.1 : -0.1);
    }
    for (double p : {1.0, 2.0, kInfinity}) {
      CHECK(lp_norm(s, ag, p) == doctest::Approx(std::abs(a) * lp_norm(s, g, p)).epsilon(1e-12));
      CHECK(lp_norm(s, bigger, p) >= lp_norm(s, g, p));
    }
  }
}

TEST_CASE("ball power integral closed forms on the torus") {
  const auto s = discretize("torus-1d", 4096);
  // 2 r^{a+1} / (a+1)
  CHECK(ball_power_integral(s, 17, 0.25, 1.0).value == doctest::Approx(0.0625).epsilon(0.02));
  CHECK(ball_power_integral(s, 17, 0.25, -0.5).value == doctest::Approx(2.0).epsilon(0.05));
  const auto zero = ball_power_integral(s, 5, 0.1, 0.0);
  CHECK(zero.value == doctest::Approx(s.ball_mass(5, 0.1) - s.weight(5)).epsilon(1e-12));
  CHECK(zero.omitted_self_weight == s.weight(5));
  CHECK_THROWS_AS(ball_power_integral(s, 0, 0.1, -1.0), InvalidArgument);
  CHECK_THROWS_AS(ball_power_integral(s, 0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("torus axioms verify with the declared constants") {
  const auto s = discretize("torus-1d", 1024);
  const auto reports = verify_space(s, resolvable_radii(s));
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].axiom == "quasi-triangle");
  CHECK(reports[0].estimated_constant == doctest::Approx(1.0));
  for (const auto& r : reports) CHECK_MESSAGE(r.pass, r.axiom);
  CHECK_THROWS_AS(verify_space(s, {}), InvalidArgument);
}

TEST_CASE("torus ball mass ratio at r = 1/4") {
  for (std::size_t n : {64u, 256u, 1000u}) {
    const auto s = discretize("torus-1d", n);
    for (std::size_t x = 0; x < n; x += 7) {
      const double ratio = s.ball_mass(x, 0.25) / 0.25;
      CHECK(ratio >= 1.5);
      CHECK(ratio <= 2.5);
    }
  }
}

TEST_CASE("quasi-triangle witness recomputes the constant") {
  const auto s = discretize("anisotropic-square", 1024);
  const auto r = estimate_quasi_triangle(s, 5000, 1);
  REQUIRE(r.worst_witness.size() == 3);
  const auto x = r.worst_witness[0], y = r.worst_witness[1], z = r.worst_witness[2];
  CHECK(r.estimated_constant ==
        doctest::Approx(s.distance(x, y) / (s.distance(x, z) + s.distance(z, y))));
  // max(|a|, sqrt|b|) is a quasi-metric with A <= sqrt 2
  CHECK(r.estimated_constant <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("space parameter validation") {
  SpaceParams p;
  p.theta = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.A = 0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("adapted grid shape") {
  using G = std::array<std::size_t, 2>;
  CHECK(discretize("anisotropic-square(adapted)", 4096).grid() == G{16, 256});
  CHECK(discretize("anisotropic-square(adapted)", 8192).grid() == G{16, 512});
  CHECK(discretize("anisotropic-square(adapted)", 100).grid() == G{4, 25});
  CHECK(discretize("anisotropic-square", 4096).grid() == G{64, 64});
  const auto s = discretize("anisotropic-square(adapted)", 512);
  CHECK(s.min_separation() == doctest::Approx(1.0 / 8));
}
