#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "domain.hpp"
#include "errors.hpp"
#include "trace_check.hpp"

using namespace bil;

TEST_CASE("window: flat top, compact support, smoothness at the seam") {
  WindowSpec w{10.0, 0.2, 0.05};
  CHECK(window_value(w, 10.0) == 1.0);
  CHECK(window_value(w, 10.09) == 1.0);
  CHECK(window_value(w, w.support_hi() + 1e-9) == 0.0);
  CHECK(window_value(w, w.support_lo() - 1e-9) == 0.0);
  double mid = 10.0 + 0.1 + 0.025;  // middle of the roll-off
  CHECK(window_value(w, mid) > 0.0);
  CHECK(window_value(w, mid) < 1.0);
  // symmetry
  CHECK(window_value(w, 10.0 + 0.12) ==
        doctest::Approx(window_value(w, 10.0 - 0.12)).epsilon(1e-14));
}

TEST_CASE("rho_hat at eta=0 equals the window mass") {
  WindowSpec w{5.0, 0.1, 0.03};
  std::complex<double> r0 = rho_hat(w, 0.0);
  CHECK(std::abs(r0.imag()) < 1e-12);
  CHECK(r0.real() > 0.1);        // at least the flat part
  CHECK(r0.real() < 0.1 + 0.06); // at most flat + both rolls
  // phase referenced to the center: symmetric window has real rho_hat
  CHECK(std::abs(rho_hat(w, 3.7).imag()) < 1e-10);
}

TEST_CASE("fit_order recovers exact power laws") {
  std::vector<double> lam, mag05, mag0;
  for (int i = 0; i < 10; ++i) {
    double l = 50.0 * std::pow(10.0, i / 9.0);
    lam.push_back(l);
    mag05.push_back(3.0 * std::sqrt(l));
    mag0.push_back(7.0);
  }
  OrderFit f = fit_order(lam, mag05);
  CHECK(f.fitted_slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.slope_stderr < 1e-12);
  OrderFit g = fit_order(lam, mag0);
  CHECK(std::abs(g.fitted_slope) < 1e-12);
}

TEST_CASE("fit_order rejects inadequate ranges") {
  std::vector<double> lam{100, 110, 120, 130, 140, 150};
  std::vector<double> mag{1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(fit_order(lam, mag), BilError);  // ratio < 8
  std::vector<double> l2{1, 10}, m2{1, 1};
  CHECK_THROWS_AS(fit_order(l2, m2), BilError);  // too few points
}

TEST_CASE("homogeneous FT identity at the acceptance grid") {
  for (double a : {0.0, 0.5, 1.0, 1.5})
    for (double t : {1.0, -1.0, 2.0, -2.0}) {
      std::complex<double> num, closed;
      std::complex<double> resid = ft_chi_plus(a, t, 0.05, &num, &closed);
      CHECK(std::abs(resid) <= 1e-8 * std::abs(closed));
      CHECK(std::abs(num - closed) <= 1e-8 * std::abs(closed));
    }
}

TEST_CASE("degenerate trace check: circle caustic gives slope 1/2") {
  Domain d = Domain::ellipse(1.0, 1.0);
  TraceCheckOptions o;
  o.lambda_min = 200.0;
  o.lambda_max = 1600.0;
  o.n_lambda = 8;
  TraceCheckReport rep = run_trace_check(d, 5, o);
  CHECK(rep.degenerate);
  CHECK(rep.delta_psi < 1e-9);
  CHECK(std::abs(rep.fit.fitted_slope - 0.5) < 0.05);
  CHECK(rep.verdict.find("degenerate") == 0);
  // report serialization
  CHECK(rep.json().find("\"verdict\"") != std::string::npos);
  std::string csv = rep.csv();
  CHECK(csv.find("lambda") != std::string::npos);
}

TEST_CASE("nondegenerate trace check: perturbed circle gives slope 0") {
  Domain d = Domain::fourier(1.0, {0.0, 0.0, 0.01}, {});
  TraceCheckReport rep = run_trace_check(d, 15);
  CHECK(!rep.degenerate);
  CHECK(rep.delta_psi > 1e-9);
  CHECK(std::abs(rep.fit.fitted_slope) < 0.05);
  CHECK(rep.verdict.find("nondegenerate") == 0);
}

TEST_CASE("under-resolved settings are rejected, not silently wrong") {
  Domain d = Domain::fourier(1.0, {0.0, 0.0, 0.01}, {});
  TraceCheckOptions o;
  o.n_eta = 51;  // far below the Nyquist requirement for the window
  CHECK_THROWS_AS(run_trace_check(d, 15, o), BilError);
}
