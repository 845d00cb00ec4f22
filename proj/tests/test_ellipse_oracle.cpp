#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "billiard_map.hpp"
#include "doctest.h"
#include "domain.hpp"
#include "ellipse_oracle.hpp"
#include "elliptic.hpp"
#include "errors.hpp"

using namespace bil;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Carlson R_F special values") {
  // R_F(x,x,x) = x^{-1/2}
  for (double x : {0.25, 1.0, 9.0})
    CHECK(carlson_rf(x, x, x) == doctest::Approx(1.0 / std::sqrt(x)).epsilon(1e-14));
  // R_F(0,1,1) = pi/2
  CHECK(carlson_rf(0.0, 1.0, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-14));
  // R_F(0,y,y) = pi / (2 sqrt(y))
  CHECK(carlson_rf(0.0, 4.0, 4.0) == doctest::Approx(kPi / 4).epsilon(1e-14));
}

TEST_CASE("F(pi/2; k) = K(k) over 50 moduli") {
  for (int i = 0; i < 50; ++i) {
    double k = 0.999 * (i + 0.5) / 50.0;
    CHECK(elliptic_F(kPi / 2, k) == doctest::Approx(elliptic_K(k)).epsilon(1e-13));
  }
  CHECK(elliptic_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("F periodicity and oddness") {
  double k = 0.7;
  double K = elliptic_K(k);
  for (double s : {0.3, 1.1, 2.9}) {
    CHECK(elliptic_F(s + kPi, k) ==
          doctest::Approx(elliptic_F(s, k) + 2 * K).epsilon(1e-12));
    CHECK(elliptic_F(-s, k) == doctest::Approx(-elliptic_F(s, k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(elliptic_F(0.5, 1.5), BilError);
}

TEST_CASE("solve_zeta: frozen values and implicit equation") {
  double a = 2.0, b = 1.0;
  CHECK(solve_zeta(a, b, 10).zeta == doctest::Approx(0.420276625461).epsilon(1e-9));
  CHECK(solve_zeta(a, b, 20).zeta == doctest::Approx(0.214285065283).epsilon(1e-9));
  CHECK(solve_zeta(a, b, 30).zeta == doctest::Approx(0.143363447972).epsilon(1e-9));
  for (int j : {7, 13, 25}) {
    CausticParam cp = solve_zeta(a, b, j);
    double resid = elliptic_F(std::asin(cp.zeta / b), cp.k) /
                       (2 * elliptic_K(cp.k)) - 1.0 / j;
    CHECK(std::abs(resid) < 1e-12);
    CHECK(cp.semi_major == doctest::Approx(std::sqrt(a * a - cp.zeta * cp.zeta)));
    CHECK(cp.semi_minor == doctest::Approx(std::sqrt(b * b - cp.zeta * cp.zeta)));
  }
  // zeta decreases toward 0 as j grows (caustic approaches the boundary)
  double prev = solve_zeta(a, b, 5).zeta;
  for (int j : {8, 12, 20, 40}) {
    double z = solve_zeta(a, b, j).zeta;
    CHECK(z < prev);
    prev = z;
  }
}

TEST_CASE("caustic launch has rotation number 1/j") {
  double a = 2.0, b = 1.0;
  Domain d = Domain::ellipse(a, b);
  for (int j : {10, 25}) {
    CausticParam cp = solve_zeta(a, b, j);
    double phi = 0.4;
    double theta = omega_of_phi(cp, a, b, phi);
    double rot = rotation_number(d, {d.s_of_t(phi), theta}, 40 * j);
    CHECK(std::abs(rot - 1.0 / j) < 1e-8);
  }
}

TEST_CASE("closed-form c_j: frozen corrected values") {
  double a = 2.0, b = 1.0;
  CHECK(c_j_closed_form(a, b, 10, 256, RadicandVariant::kCorrected) ==
        doctest::Approx(-1.6671859813).epsilon(1e-8));
  CHECK(c_j_closed_form(a, b, 20, 256, RadicandVariant::kCorrected) ==
        doctest::Approx(-0.4297300683).epsilon(1e-8));
  CHECK(c_j_closed_form(a, b, 30, 256, RadicandVariant::kCorrected) ==
        doctest::Approx(-0.1920262285).epsilon(1e-8));
}

TEST_CASE("circle limit of the corrected closed form") {
  // a -> b: c_j must approach the circle value
  int j = 10;
  double circle = -8.0 * kPi * std::pow(std::sin(kPi / j), 1.5) /
                  std::sqrt(2.0 * j);
  double near = c_j_closed_form(1.0 + 1e-3, 1.0, j, 256,
                                RadicandVariant::kCorrected);
  CHECK(std::abs(near - circle) < 1e-2 * std::abs(circle));
}

TEST_CASE("poncelet length is the common tangent-orbit length") {
  double a = 2.0, b = 1.0;
  Domain d = Domain::ellipse(a, b);
  double ell = d.length();
  for (int j : {8, 14}) {
    double L = poncelet_length(a, b, j);
    CHECK(L < ell);
    // independent launch from another boundary point
    CausticParam cp = solve_zeta(a, b, j);
    double phi = 1.1;
    double s = d.s_of_t(phi), th = omega_of_phi(cp, a, b, phi);
    double total = 0.0;
    Vec2 prev = d.point(s);
    double s_lift = s;
    for (int k = 0; k < j; ++k) {
      s_lift = next_arclength(d, s_lift, th);
      Vec2 P = d.point(s_lift);
      total += norm(P - prev);
      Vec2 u = normalized(P - prev);
      Vec2 T = d.tangent(s_lift);
      th = std::atan2(-dot(u, perp(T)), dot(u, T));
      prev = P;
    }
    CHECK(total == doctest::Approx(L).epsilon(1e-10));
  }
  // L_j increases to the perimeter
  CHECK(poncelet_length(a, b, 12) > poncelet_length(a, b, 6));
}

TEST_CASE("oracle report carries both radicand variants") {
  OracleReport rep = oracle_report(2.0, 1.0, 20);
  CHECK(rep.j == 20);
  CHECK(rep.zeta == doctest::Approx(0.214285065283).epsilon(1e-9));
  CHECK(std::isfinite(rep.c_j_paper_radical));
  CHECK(std::isfinite(rep.c_j_sin_squared_radical));
  CHECK(rep.c_j_corrected == doctest::Approx(-0.4297300683).epsilon(1e-8));
  CHECK(rep.L_j == doctest::Approx(poncelet_length(2.0, 1.0, 20)).epsilon(1e-12));
  std::string js = rep.json();
  CHECK(js.find("c_j_paper_radical") != std::string::npos);
  CHECK(js.find("c_j_sin_squared_radical") != std::string::npos);
  CHECK(js.find("c_j_corrected") != std::string::npos);
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(solve_zeta(1.0, 2.0, 10), BilError);  // needs a > b
  CHECK_THROWS_AS(solve_zeta(2.0, 1.0, 2), BilError);   // j too small
}
