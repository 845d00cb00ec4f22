#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "domain.hpp"
#include "errors.hpp"

using namespace bil;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("circle perimeter, area, centroid") {
  Domain d = Domain::ellipse(1.0, 1.0);
  CHECK(d.length() == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(d.area() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::abs(d.centroid().x) < 1e-12);
  CHECK(std::abs(d.centroid().y) < 1e-12);
}

TEST_CASE("ellipse perimeter matches the series value") {
  // a=2, b=1: perimeter from the rapidly convergent AGM evaluation.
  Domain d = Domain::ellipse(2.0, 1.0);
  CHECK(d.length() == doctest::Approx(9.6884482205476754).epsilon(1e-12));
  CHECK(d.area() == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("arclength inversion round-trips") {
  Domain d = Domain::ellipse(2.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double s = d.length() * i / 100.0;
    CHECK(std::abs(d.s_of_t(d.t_of_s(s)) - s) < 1e-10 * d.length());
  }
}

TEST_CASE("tangent/normal/curvature consistency") {
  Domain d = Domain::fourier(1.0, {0.0, 0.01, 0.005}, {0.003});
  double ell = d.length();
  for (int i = 0; i < 32; ++i) {
    double s = ell * (i + 0.3) / 32.0;
    Vec2 T = d.tangent(s);
    CHECK(norm(T) == doctest::Approx(1.0).epsilon(1e-12));
    // finite-difference tangent
    double h = 1e-6;
    Vec2 fd = (d.point(s + h) - d.point(s - h)) * (1.0 / (2 * h));
    CHECK(norm(fd - T) < 1e-8);
    // kappa = |T'(s)|
    Vec2 dT = (d.tangent(s + h) - d.tangent(s - h)) * (1.0 / (2 * h));
    CHECK(std::abs(norm(dT) - d.curvature(s)) < 1e-6);
    CHECK(dot(d.normal_in(s), d.normal_out(s)) ==
          doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("boundary normal coordinates round-trip and warp factor") {
  Domain d = Domain::ellipse(1.5, 1.0);
  double ell = d.length();
  for (int i = 0; i < 16; ++i) {
    double phi = ell * (i + 0.2) / 16.0;
    for (double mu : {0.0, 0.01, 0.1}) {
      BoundaryNormalCoords c{mu, phi};
      BoundaryNormalCoords back = d.to_boundary_normal(d.from_boundary_normal(c));
      CHECK(std::abs(back.mu - mu) < 1e-10 * ell);
      double dphi = std::abs(back.phi - phi);
      dphi = std::min(dphi, ell - dphi);
      CHECK(dphi < 1e-10 * ell);
      double expect = std::pow(1.0 - mu * d.curvature(phi), 2);
      CHECK(d.warp_factor(c) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(d.warp_factor({0.0, phi}) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("divergence identity: oint X.N ds = 2 Area") {
  for (Domain d : {Domain::ellipse(2.0, 1.0),
                   Domain::fourier(1.0, {0.0, 0.0, 0.02}, {})}) {
    double ell = d.length();
    int n = 4096;
    double sum = 0.0;
    Vec2 origin = d.centroid();
    for (int i = 0; i < n; ++i)
      sum += d.position_dot_normal(ell * i / n, origin);
    sum *= ell / n;
    CHECK(std::abs(sum - 2.0 * d.area()) < 1e-8 * d.area());
  }
}

TEST_CASE("non-convex spec is rejected with a diagnostic") {
  CHECK_THROWS_AS(Domain::fourier(1.0, {0.0, 0.5}, {}), BilError);
  try {
    Domain::fourier(1.0, {0.0, 0.5}, {});
  } catch (const BilError& e) {
    CHECK(e.code() == ErrCode::SpecError);
  }
  CHECK_THROWS_AS(Domain::from_json_text("{\"kind\":\"triangle\"}"), BilError);
}

TEST_CASE("JSON spec round-trip") {
  Domain d = Domain::from_json_text(
      "{\"kind\":\"fourier\",\"R\":1.0,\"cos\":[0.0,0.0,0.01],\"sin\":[]}");
  Domain d2 = Domain::from_json_text(d.spec_json());
  CHECK(d2.length() == doctest::Approx(d.length()).epsilon(1e-15));
  Domain e = Domain::from_json_text("{\"kind\":\"ellipse\",\"a\":2.0,\"b\":1.0}");
  CHECK(e.ellipse_a() == 2.0);
  CHECK(e.ellipse_b() == 1.0);
}

TEST_CASE("signed distance and containment") {
  Domain d = Domain::ellipse(2.0, 1.0);
  CHECK(d.contains({0.0, 0.0}));
  CHECK(!d.contains({3.0, 0.0}));
  double foot = -1.0;
  double dist = d.signed_inner_distance({1.99, 0.0}, &foot);
  CHECK(dist == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(std::abs(d.point(foot).x - 2.0) < 1e-9);
}
