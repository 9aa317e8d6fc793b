#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "homsamp/coefficients.hpp"
#include "homsamp/error.hpp"
#include "homsamp/frame.hpp"
#include "support.hpp"

using namespace homsamp;

TEST_CASE("profiles") {
  CHECK(profile_value(Profile::tent, 0.0) == 1.0);
  CHECK(profile_value(Profile::tent, 0.25) == 0.75);
  CHECK(profile_value(Profile::tent, 1.0) == 0.0);
  CHECK(profile_value(Profile::smoothstep, 0.0) == 1.0);
  CHECK(profile_value(Profile::smoothstep, 0.5) == doctest::Approx(0.5));
  CHECK(profile_value(Profile::smoothstep, 1.0) == 0.0);
  CHECK(profile_value(Profile::smoothstep, 3.0) == 0.0);
  CHECK(parse_profile("smoothstep") == Profile::smoothstep);
  CHECK_THROWS_AS(parse_profile("gauss"), InvalidArgument);
  // sup |h'| from a fine difference quotient
  for (auto p : {Profile::tent, Profile::smoothstep}) {
    double lip = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double a = i / 10000.0;
      const double b = (i + 1) / 10000.0;
      lip = std::max(lip, std::abs(profile_value(p, b) - profile_value(p, a)) / (b - a));
    }
    CHECK(lip <= profile_lipschitz(p) + 1e-9);
    CHECK(lip >= profile_lipschitz(p) - 1e-3);
  }
}

TEST_CASE("one-element frame in span mode") {
  const auto s = discretize("torus-1d", 32);
  const auto sys = build_dyadic_system(s, 0, 0);
  FrameOptions o;
  o.mode = FrameMode::span;
  const auto frame = build_frame(sys, s, o);
  REQUIRE(frame.element_count() == 1);
  CHECK(frame.rank == 1);
  const auto phi = frame.phi(0);
  const double norm2 = std::pow(lp_norm(s, phi, 2.0), 2);
  const auto psi = frame.dual(0);
  for (std::size_t x = 0; x < s.size(); ++x) CHECK(psi[x] == doctest::Approx(phi[x] / norm2));
  // analyze(phi) = 1 and reconstruction is exact on span{phi}
  const auto c = analyze(frame, s, phi);
  CHECK(c.at(0, 0) == doctest::Approx(1.0));
  CHECK(testing::rel_l2(s, synthesize(frame, c), phi) <= 1e-12);
  // complete mode refuses the same system
  CHECK_THROWS_AS(build_frame(sys, s), IncompleteFrame);
}

TEST_CASE("torus frame invariants") {
  const auto& fx = testing::fixture("torus-1d", 1024, 10);
  const auto& f = fx.frame;
  CHECK(f.frame_bounds.lower > 0.0);
  CHECK(f.C_phi >= f.cphi_target());
  CHECK(f.size_constant == 1.0);
  CHECK(f.N_measured <= 4);
  for (std::size_t e = 0; e < f.element_count(); ++e) {
    const auto [j, k] = f.element(e);
    const double amp = std::pow(2.0, j / 2.0);
    const auto sup = f.support(e);
    const auto val = f.values(e);
    double peak = 0.0;
    for (std::size_t i = 0; i < sup.size(); ++i) {
      CHECK(fx.space.distance(sup[i], f.center(e)) < f.cphi_target() * std::pow(2.0, -j));
      peak = std::max(peak, val[i]);
    }
    CHECK(peak == amp);
    CHECK(f.element_index(j, k) == e);
  }
  const auto v = verify_frame(f, fx.space);
  for (const auto& r : v.reports) CHECK_MESSAGE(r.pass, r.axiom);
  CHECK(v.support_violations == 0);
  CHECK(v.multiplicity_uniform);
}

TEST_CASE("smoothness constant against a brute-force sweep") {
  const auto& fx = testing::fixture("torus-1d", 128, 7);
  const auto& f = fx.frame;
  const double d = fx.space.params().d;
  double worst = 0.0;
  for (std::size_t e = 0; e < f.element_count(); ++e) {
    const int j = f.element(e).first;
    const auto phi = f.phi(e);
    for (std::size_t x = 0; x < phi.size(); ++x) {
      for (std::size_t y = 0; y < phi.size(); ++y) {
        if (x == y) continue;
        worst = std::max(worst, std::abs(phi[x] - phi[y]) /
                                    (std::pow(2.0, j * (d / 2 + 1)) * fx.space.distance(x, y)));
      }
    }
  }
  CHECK(f.smoothness_constant == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("reconstruction on the battery") {
  for (const char* g : {"torus-1d", "cantor-dset(7)", "anisotropic-square"}) {
    const auto space0 = discretize(g, 1024);
    int jmax = 0;
    const int base = space0.natural_scale_base();
    while (std::pow(double(base), -double(jmax)) > space0.min_separation() * (1 + 1e-9)) ++jmax;
    const double cphi = space0.generator().kind == GeneratorKind::anisotropic_square ? 1.0 : 1.5;
    const auto& fx = testing::fixture(g, 1024, jmax, cphi);
    for (const auto& name : default_battery(fx.space)) {
      const auto fn = evaluate_function(name, fx.space);
      const auto back = synthesize(fx.frame, analyze(fx.frame, fx.space, fn));
      CAPTURE(g);
      CAPTURE(name);
      CHECK(testing::rel_l2(fx.space, back, fn) <= 1e-8);
    }
  }
}

TEST_CASE("analysis routes agree") {
  const auto& fx = testing::fixture("torus-1d", 256, 8);
  testing::Gen gen(5);
  const auto fn = gen.values(fx.space.size());
  const auto a = analyze(fx.frame, fx.space, fn);
  const auto b = analyze_with_duals(fx.frame, fx.space, fn);
  double scale = 0.0;
  double diff = 0.0;
  for (int j = a.j_min(); j <= a.j_max(); ++j) {
    for (std::size_t k = 0; k < a.level(j).size(); ++k) {
      scale = std::max(scale, std::abs(a.at(j, k)));
      diff = std::max(diff, std::abs(a.at(j, k) - b.at(j, k)));
    }
  }
  CHECK(diff <= 1e-8 * scale);
}

TEST_CASE("dense oracle for the frame operator and its bounds") {
  const auto& fx = testing::fixture("torus-1d", 128, 7);
  const auto& f = fx.frame;
  const std::size_t n = fx.space.size();
  // S = Phi^T Phi W, symmetrised as W^{1/2} Phi^T Phi W^{1/2}
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(Eigen::Index(f.element_count()), Eigen::Index(n));
  for (std::size_t e = 0; e < f.element_count(); ++e) {
    const auto v = f.phi(e);
    for (std::size_t x = 0; x < n; ++x) phi(Eigen::Index(e), Eigen::Index(x)) = v[x];
  }
  Eigen::VectorXd sw(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) sw(Eigen::Index(x)) = std::sqrt(fx.space.weight(x));
  const Eigen::MatrixXd t = sw.asDiagonal() * phi.transpose() * phi * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  CHECK(f.frame_bounds.lower == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-6));
  CHECK(f.frame_bounds.upper == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));

  testing::Gen gen(9);
  const auto g = gen.values(n);
  const auto sg = f.apply_frame_operator(g);
  Eigen::VectorXd ge = Eigen::Map<const Eigen::VectorXd>(g.data(), Eigen::Index(n));
  Eigen::VectorXd wg = ge.cwiseProduct(sw).cwiseProduct(sw);
  Eigen::VectorXd expect = phi.transpose() * (phi * wg);
  for (std::size_t x = 0; x < n; ++x) CHECK(sg[x] == doctest::Approx(expect(Eigen::Index(x))));
  const auto back = f.apply_inverse_frame_operator(sg);
  CHECK(testing::rel_l2(fx.space, back, g) <= 1e-9);
}

TEST_CASE("trivial analysis and synthesis") {
  const auto& fx = testing::fixture("torus-1d", 256, 8);
  std::vector<double> zero(fx.space.size(), 0.0);
  const auto c = analyze(fx.frame, fx.space, zero);
  for (int j = c.j_min(); j <= c.j_max(); ++j) {
    for (double v : c.level(j)) CHECK(v == 0.0);
  }
  for (double v : synthesize(fx.frame, c)) CHECK(v == 0.0);
  auto delta = fx.frame.zero_coefficients();
  delta.at(5, 3) = 1.0;
  const auto one = synthesize(fx.frame, delta);
  CHECK(one == fx.frame.phi(fx.frame.element_index(5, 3)));
  CHECK_THROWS_AS(synthesize(fx.frame, CoefficientTable::zeros(1, 2, {1})), InvalidArgument);
  CHECK_THROWS_AS(analyze(fx.frame, fx.space, std::vector<double>(3)), InvalidArgument);
}

TEST_CASE("disjoint supports give multiplicity one") {
  const auto s = discretize("torus-1d", 64);
  const auto sys = build_dyadic_system(s, 0, 6);
  FrameOptions o;
  o.cphi_target = 0.25;
  const auto f = build_frame(sys, s, o);
  CHECK(f.N_measured == 1);
  CHECK(verify_frame(f, s).N_measured == 1);
}

TEST_CASE("smoothstep profile reconstructs too") {
  const auto s = discretize("torus-1d", 256);
  const auto sys = build_dyadic_system(s, 0, 8);
  FrameOptions o;
  o.profile = Profile::smoothstep;
  const auto f = build_frame(sys, s, o);
  const auto fn = evaluate_function("bump", s);
  CHECK(testing::rel_l2(s, synthesize(f, analyze(f, s, fn)), fn) <= 1e-8);
  for (const auto& r : verify_frame(f, s).reports) CHECK_MESSAGE(r.pass, r.axiom);
}

TEST_CASE("dense solver path matches the iterative one") {
  const auto s = discretize("torus-1d", 256);
  const auto sys = build_dyadic_system(s, 0, 8);
  FrameOptions o;
  o.force_dense = true;
  const auto dense = build_frame(sys, s, o);
  const auto& iter = testing::fixture("torus-1d", 256, 8).frame;
  const auto fn = evaluate_function("noise:3", s);
  const auto a = analyze(dense, s, fn);
  const auto b = analyze(iter, s, fn);
  for (int j = 0; j <= 8; ++j) {
    for (std::size_t k = 0; k < a.level(j).size(); ++k) {
      CHECK(a.at(j, k) == doctest::Approx(b.at(j, k)).epsilon(1e-7));
    }
  }
  CHECK(dense.used_dense_solver);
}
