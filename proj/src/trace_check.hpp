#pragma once
#include <complex>
#include <string>
#include <vector>

#include "domain.hpp"

namespace bil {

// C-infinity bump: identically 1 on [center-flat/2, center+flat/2], supported
// on the flat interval padded by roll on each side.
struct WindowSpec {
  double center = 0.0;
  double flat = 0.0;
  double roll = 1.0;
  double support_lo() const { return center - 0.5 * flat - roll; }
  double support_hi() const { return center + 0.5 * flat + roll; }
};

double window_value(const WindowSpec& w, double t);

// rho_hat(eta) = int rho(t) e^{-i eta (t - center)} dt (phase referenced to
// the window center), by trapezoid quadrature with nt nodes.
std::complex<double> rho_hat(const WindowSpec& w, double eta, int nt = 4001);

struct OrderFit {
  std::vector<double> lambdas;
  std::vector<double> magnitudes;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
};

// least-squares slope of log|F| vs log lambda; needs >= 6 points spanning a
// factor >= 8 (DegenerateFit otherwise).
OrderFit fit_order(const std::vector<double>& lambdas,
                   const std::vector<double>& magnitudes);

// F(lambda) = (1/2pi) int sigma^m rho_hat(eta) Q(sigma) deta with
// sigma = lambda - eta restricted to sigma > 0 (support of chi_+), and
// Q(sigma) = oint a0(q) e^{-i sigma (Psi(q) - center)} dq. The loop-function
// table (qs, psi, a0) is a uniform grid over one perimeter ell.
std::complex<double> windowed_transform(const std::vector<double>& qs,
                                        const std::vector<double>& psi,
                                        const std::vector<double>& a0,
                                        double ell, double m,
                                        const WindowSpec& w, double lambda,
                                        double eta_span, int n_eta);

// residual between the regularized integral int_0^inf xi^a e^{-i xi (t -
// i eps)} dxi (real-axis quadrature) and the closed form
// Gamma(a+1) (eps + i t)^{-a-1}; both sides optionally returned.
std::complex<double> ft_chi_plus(double a, double t, double eps,
                                 std::complex<double>* numeric_out = nullptr,
                                 std::complex<double>* closed_out = nullptr);

struct TraceCheckOptions {
  double m = 0.5;           // symbol order under test
  int n_lambda = 12;        // lambda grid points (geometric)
  double lambda_min = 50.0; // used directly in the degenerate regime
  double lambda_max = 400.0;
  bool auto_scale = true;   // nondegenerate: lambda_min = 20/DeltaPsi
  int grid_n = 0;           // 0 = auto (256 degenerate, 1024 nondegenerate)
  double roll = 0.0;        // 0 = auto (0.04 / 2.5e-3)
  double flat = 0.0;        // 0 = auto (max(DeltaPsi, roll) when degenerate)
  double eta_span = 0.0;    // 0 = auto (400 / 40000)
  int n_eta = 0;            // 0 = auto (801 / 2001)
  double band_frac = 0.35;  // nondegenerate band-RMS half-width fraction
  int band_n = 16;
};

struct TraceCheckReport {
  int j = 0;
  bool degenerate = false;
  double delta_psi = 0.0;
  double t_j = 0.0, T_j = 0.0;
  double lambda_lo = 0.0, lambda_hi = 0.0;
  WindowSpec window;
  OrderFit fit;
  std::vector<std::complex<double>> values;  // pointwise F(lambda)
  std::string verdict;
  std::string json() const;
  std::string csv() const;  // lambda, re, im, abs rows
};

TraceCheckReport run_trace_check(const Domain& d, int j,
                                 const TraceCheckOptions& opts = {});

}  // namespace bil
