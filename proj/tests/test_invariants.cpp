#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "domain.hpp"
#include "errors.hpp"
#include "invariants.hpp"

using namespace bil;

namespace {
constexpr double kPi = 3.14159265358979323846;

double circle_c_j(double R, int j) {
  double sign = (j % 2 == 0) ? -1.0 : 1.0;
  return sign * 8.0 * kPi * std::pow(R, 1.5) *
         std::pow(std::sin(kPi / j), 1.5) / std::sqrt(2.0 * j);
}
}  // namespace

TEST_CASE("circle wave invariant matches the closed form") {
  for (double R : {1.0, 2.5}) {
    Domain d = Domain::ellipse(R, R);
    for (int j : {5, 11, 24, 40}) {
      InvariantReport rep = wave_invariant(d, j, {0.0, 0.0}, 32);
      CHECK(rep.c_j == doctest::Approx(circle_c_j(R, j)).epsilon(1e-8));
      CHECK(rep.caustic);
      CHECK(rep.t_j == doctest::Approx(2 * j * R * std::sin(kPi / j))
                           .epsilon(1e-9));
    }
  }
}

TEST_CASE("sign alternation (-1)^{j+1}") {
  Domain d = Domain::ellipse(1.0, 1.0);
  CHECK(wave_invariant(d, 11, {0, 0}, 16).c_j > 0);
  CHECK(wave_invariant(d, 12, {0, 0}, 16).c_j < 0);
}

TEST_CASE("ellipse invariant against frozen oracle values") {
  Domain d = Domain::ellipse(2.0, 1.0);
  InvariantReport rep = wave_invariant(d, 10, d.centroid(), 128);
  CHECK(rep.c_j == doctest::Approx(-1.6671859813).epsilon(1e-7));
  InvariantReport rep20 = wave_invariant(d, 20, d.centroid(), 128);
  CHECK(rep20.c_j == doctest::Approx(-0.4297300683).epsilon(1e-7));
}

TEST_CASE("principal symbol is homogeneous of degree 1/2 in xi") {
  Domain d = Domain::ellipse(1.5, 1.0);
  Vec2 origin = d.centroid();
  double base = principal_symbol(d, 12, 0.7, 1.0, origin);
  for (double xi : {2.0, 10.0, 100.0}) {
    double v = principal_symbol(d, 12, 0.7, xi, origin);
    CHECK(v == doctest::Approx(base * std::sqrt(xi)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(principal_symbol(d, 12, 0.7, -1.0, origin), BilError);
}

TEST_CASE("c_j is independent of the interior origin") {
  // Remark: the X(q).N(q) origin dependence integrates out.
  Domain d = Domain::ellipse(2.0, 1.0);
  double c0 = wave_invariant(d, 12, {0.0, 0.0}, 96).c_j;
  double c1 = wave_invariant(d, 12, {0.5, 0.2}, 96).c_j;
  CHECK(c1 == doctest::Approx(c0).epsilon(1e-9));
}

TEST_CASE("dilation covariance: c_j ~ r^{3/2}, |A_j| ~ 1/r") {
  int j = 12;
  Domain d1 = Domain::ellipse(1.5, 1.0);
  Domain dr = Domain::ellipse(1.5 * 1.3, 1.3);
  double c1 = wave_invariant(d1, j, d1.centroid(), 96).c_j;
  double cr = wave_invariant(dr, j, dr.centroid(), 96).c_j;
  CHECK(cr == doctest::Approx(c1 * std::pow(1.3, 1.5)).epsilon(1e-7));
  double a1 = a_factor_boundary(d1, j, 0.3);
  double ar = a_factor_boundary(dr, j, 0.3 * 1.3);
  CHECK(ar == doctest::Approx(a1 / 1.3).epsilon(1e-5));
}

TEST_CASE("non-caustic family is refused without force") {
  Domain d = Domain::fourier(1.0, {0.0, 0.0, 0.01}, {});
  CHECK_THROWS_AS(wave_invariant(d, 15, d.centroid(), 64), BilError);
  InvariantReport rep = wave_invariant(d, 15, d.centroid(), 64, true);
  CHECK(!rep.caustic);
  CHECK(std::isfinite(rep.c_j));
}

TEST_CASE("singularity profile principal branch") {
  // at t = L + 1, eps -> 0: c * Re{e^{i pi/4}} = c * cos(pi/4)
  std::vector<double> grid{11.0};
  double v = singularity_profile(2.0, 10.0, grid, 1e-9)[0];
  CHECK(v == doctest::Approx(2.0 * std::cos(kPi / 4)).epsilon(1e-6));
  // symmetric point inside: (t - L) < 0 has the conjugate branch
  std::vector<double> g2{9.0};
  double w = singularity_profile(2.0, 10.0, g2, 1e-9)[0];
  CHECK(w == doctest::Approx(2.0 * std::cos(3 * kPi / 4 - kPi / 2))
                 .epsilon(1e-3));
  CHECK_THROWS_AS(singularity_profile(1.0, 1.0, grid, 0.0), BilError);
}

TEST_CASE("report JSON contains the key fields") {
  Domain d = Domain::ellipse(1.0, 1.0);
  InvariantReport rep = wave_invariant(d, 10, {0, 0}, 16);
  std::string js = rep.json();
  CHECK(js.find("\"c_j\"") != std::string::npos);
  CHECK(js.find("\"t_j\"") != std::string::npos);
  CHECK(js.find("\"caustic\"") != std::string::npos);
}
