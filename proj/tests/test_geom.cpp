#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "flowlab/errors.hpp"
#include "flowlab/geom.hpp"
#include "oracles.hpp"

using namespace flowlab;
using namespace flowlab::geom;

namespace {

double max_curvature_error(double a, double b, int n, int N) {
  const auto p = make_shape(Shape::ellipsoid(a, b), n, N);
  const auto f = curvature_field(p);
  double err = 0;
  for (int j = 0; j <= N; ++j) {
    const auto [km, kp] = oracle::ellipsoid_curvatures(a, b, p.theta(j));
    err = std::max({err, std::abs(f.merid[static_cast<std::size_t>(j)] - km),
                    std::abs(f.par[static_cast<std::size_t>(j)] - kp)});
  }
  return err;
}

}  // namespace

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(MeridianProfile(2, {1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(MeridianProfile(1, {1.0, 1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(MeridianProfile(2, {1.0, -1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(MeridianProfile(13, {1.0, 1.0, 1.0}), ArgumentError);
}

TEST_CASE("shape descriptors") {
  const auto s = Shape::parse("ellipsoid:1,1.5");
  CHECK(s.kind == Shape::Kind::Ellipsoid);
  CHECK(s.a == 1.0);
  CHECK(s.b == 1.5);
  CHECK(Shape::parse(s.to_string()).b == 1.5);
  const auto q = Shape::parse("perturbed:1,2,0.001");
  CHECK(q.mode == 2);
  CHECK(q.eps == 0.001);
  CHECK(Shape::parse("sphere:2").r == 2.0);
  CHECK_THROWS_AS(Shape::parse("cube:1"), ArgumentError);
  CHECK_THROWS_AS(Shape::parse("sphere:-1"), ArgumentError);
  CHECK_THROWS_AS(Shape::parse("ellipsoid:1"), ArgumentError);
  CHECK_THROWS_AS(Shape::parse("sphere:1x"), ArgumentError);
}

TEST_CASE("make_shape worked examples") {
  const auto s = make_shape(Shape::sphere(2), 2, 100);
  for (double r : s.rho()) CHECK(r == 2.0);
  const auto e = make_shape(Shape::ellipsoid(1, 1), 3, 64);
  for (double r : e.rho()) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
  const auto e2 = make_shape(Shape::ellipsoid(1, 2), 2, 100);
  CHECK(e2.rho(50) == doctest::Approx(1.0));
  CHECK(e2.rho(0) == doctest::Approx(2.0));
  CHECK(e2.rho(100) == doctest::Approx(2.0));
  // a large Legendre perturbation dents the surface
  CHECK_THROWS_AS(make_shape(Shape::perturbed_sphere(1, 6, 0.5), 2, 200), DomainError);
}

TEST_CASE("sphere curvatures are exact") {
  for (int n = 2; n <= 6; ++n) {
    const auto f = curvature_field(make_shape(Shape::sphere(2.5), n, 128));
    for (int j = 0; j < f.size(); ++j) {
      const auto js = static_cast<std::size_t>(j);
      CHECK(f.merid[js] == doctest::Approx(0.4).epsilon(1e-15));
      CHECK(f.par[js] == doctest::Approx(0.4).epsilon(1e-15));
      CHECK(f.support[js] == doctest::Approx(2.5).epsilon(1e-15));
      CHECK(f.normX2[js] == doctest::Approx(6.25).epsilon(1e-15));
    }
  }
}

TEST_CASE("ellipsoid curvatures converge at second order") {
  const double a = 1.0, b = 1.5;
  const double e100 = max_curvature_error(a, b, 2, 100);
  const double e200 = max_curvature_error(a, b, 2, 200);
  const double e400 = max_curvature_error(a, b, 2, 400);
  CHECK(e100 < 1e-2);
  CHECK(e100 / e200 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e200 / e400 == doctest::Approx(4.0).epsilon(0.2));
  // poles: both curvatures tend to b/a^2
  const auto f = curvature_field(make_shape(Shape::ellipsoid(a, b), 2, 400));
  CHECK(f.merid[0] == f.par[0]);
  CHECK(f.merid[0] == doctest::Approx(b / (a * a)).epsilon(1e-3));
}

TEST_CASE("perturbed sphere curvatures stay near 1") {
  const double eps = 1e-6;
  const auto f = curvature_field(make_shape(Shape::perturbed_sphere(1, 2, eps), 3, 200));
  for (int j = 0; j < f.size(); ++j) {
    CHECK(std::abs(f.merid[static_cast<std::size_t>(j)] - 1) <= 5 * eps);
    CHECK(std::abs(f.par[static_cast<std::size_t>(j)] - 1) <= 5 * eps);
  }
}

TEST_CASE("stationary sphere radius closed forms") {
  using symfun::SpeedFunction;
  CHECK(stationary_sphere_radius(SpeedFunction::sigma_power(1, 1), 0, 2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(stationary_sphere_radius(SpeedFunction::sigma_power(2, 1), 0, 3) ==
        doctest::Approx(std::cbrt(3.0)).epsilon(1e-14));
  CHECK(stationary_sphere_radius(SpeedFunction::parse("S(1)"), 0, 2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k)
      for (double alpha : {1.0 / k, 0.5, 1.0, 2.0}) {
        const auto F = SpeedFunction::sigma_power(k, alpha);
        const double r = stationary_sphere_radius(F, 0, n);
        CHECK(r == doctest::Approx(std::pow(oracle::binomial(n, k), alpha / (1 + k * alpha))).epsilon(1e-13));
      }
  // with C < 0: F(1/r) + C = r
  const auto F = SpeedFunction::power_sum_power(2, 0.5);
  const double r = stationary_sphere_radius(F, -0.1, 3);
  CHECK(std::sqrt(3.0) / r - 0.1 == doctest::Approx(r).epsilon(1e-13));
}

TEST_CASE("self-similar residual") {
  using symfun::SpeedFunction;
  const auto F = SpeedFunction::sigma_power(2, 0.5);
  const double r = stationary_sphere_radius(F, 0, 3);
  CHECK(selfsim_residual(make_shape(Shape::sphere(r), 3, 200), F, 0).max_abs <= 1e-10);
  const auto big = selfsim_residual(make_shape(Shape::sphere(2 * r), 3, 200), F, 0);
  CHECK(big.max_abs == doctest::Approx(std::abs(std::sqrt(3.0) / (2 * r) - 2 * r)).epsilon(1e-12));
  CHECK(selfsim_residual(make_shape(Shape::ellipsoid(1, 1.5), 2, 200), SpeedFunction::sigma_power(1, 1), 0).max_abs >
        1e-3);
}

TEST_CASE("diagnostics") {
  using symfun::SpeedFunction;
  for (const char* e : {"sigma(2)^0.5", "sigma(2)", "S(2)^2", "sigma(3)^(1/3)"}) {
    const auto F = SpeedFunction::parse(e);
    const int n = 3;
    const double r = stationary_sphere_radius(F, 0, n);
    const auto d = diagnostics(make_shape(Shape::sphere(r), n, 64), F);
    const double beta = F.beta();
    const double Z = n * r * r * (beta + 1) / (2 * beta);
    for (std::size_t j = 0; j < d.Z.size(); ++j) {
      CHECK(d.Z[j] == doctest::Approx(Z).epsilon(1e-13));
      CHECK(d.W[j] == doctest::Approx(Z / n).epsilon(1e-13));
    }
  }
  const auto s1 = diagnostics(make_shape(Shape::sphere(1.7), 4, 32), SpeedFunction::sigma_power(1, 1));
  for (double z : s1.Z) CHECK(z == doctest::Approx(16.0).epsilon(1e-14));

  const auto p = make_shape(Shape::ellipsoid(1, 1.5), 3, 200);
  const auto F = SpeedFunction::sigma_power(2, 1);
  const auto d = diagnostics(p, F);
  CHECK(d.Z_max() > d.Z_min());
  // umbilic nodes (the poles) satisfy Z = n W
  CHECK(d.Z.front() == doctest::Approx(3 * d.W.front()).epsilon(1e-12));
  CHECK(d.Z.back() == doctest::Approx(3 * d.W.back()).epsilon(1e-12));
}

TEST_CASE("sphere identity residuals") {
  using symfun::SpeedFunction;
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      for (double C : {0.0, -0.1}) {
        const auto a = sphere_identity_residuals(SpeedFunction::sigma_power(k, 1.0 / k + 0.25), C, n);
        CHECK(a.rel1() <= 1e-11);
        CHECK(a.rel5() <= 1e-11);
        const auto b = sphere_identity_residuals(SpeedFunction::power_sum_power(k, 0.5), C, n);
        CHECK(b.rel1() <= 1e-11);
        CHECK(b.rel5() <= 1e-11);
      }
    }
}

TEST_CASE("mean radius and volume") {
  const auto s = make_shape(Shape::sphere(1.3), 2, 200);
  CHECK(weighted_mean_radius(s) == doctest::Approx(1.3).epsilon(1e-15));
  // 3-ball of radius 1.3, and the 4-ball for n = 3
  CHECK(enclosed_volume(s) == doctest::Approx(4.0 / 3.0 * std::numbers::pi * std::pow(1.3, 3)).epsilon(1e-4));
  const auto s3 = make_shape(Shape::sphere(1.3), 3, 200);
  CHECK(enclosed_volume(s3) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2 * std::pow(1.3, 4)).epsilon(1e-4));
}

TEST_CASE("profile csv round trip is lossless") {
  const auto p = make_shape(Shape::ellipsoid(1, 1.5), 3, 50);
  const auto q = parse_profile_csv(profile_csv(p), 3);
  REQUIRE(q.N() == p.N());
  for (int j = 0; j <= p.N(); ++j) CHECK(q.rho(j) == p.rho(j));
  const auto path = (std::filesystem::temp_directory_path() / "flowlab_profile_test.csv").string();
  write_profile_csv(path, p);
  CHECK(read_profile_csv(path, 3).rho() == p.rho());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_profile_csv("x,y\n0,1\n", 2), ArgumentError);
  CHECK_THROWS_AS(parse_profile_csv("theta,rho\n0,1\n0.1,1\n0.5,1\n", 2), ArgumentError);
}
