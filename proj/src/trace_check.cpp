#include "trace_check.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "invariants.hpp"
#include "orbits.hpp"
#include "quadrature.hpp"
#include "threading.hpp"
#include "json.hpp"

namespace bil {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smooth01(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x);
  double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

double window_value(const WindowSpec& w, double t) {
  double lo = w.center - 0.5 * w.flat;
  double hi = w.center + 0.5 * w.flat;
  return smooth01((t - (lo - w.roll)) / w.roll) *
         smooth01(((hi + w.roll) - t) / w.roll);
}

std::complex<double> rho_hat(const WindowSpec& w, double eta, int nt) {
  if (nt < 2) fail(ErrCode::BadArgument, "rho_hat needs nt >= 2");
  double a = w.support_lo(), b = w.support_hi();
  double h = (b - a) / (nt - 1);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < nt; ++i) {
    double t = a + i * h;
    double wt = (i == 0 || i == nt - 1) ? 0.5 : 1.0;
    acc += wt * window_value(w, t) *
           std::exp(std::complex<double>(0.0, -eta * (t - w.center)));
  }
  return acc * h;
}

namespace {

// core eta-integral with a caller-provided rho_hat table on the uniform eta
// grid (precomputable: rho_hat does not depend on lambda)
std::complex<double> transform_with_table(
    const std::vector<double>& psi, const std::vector<double>& a0, double ell,
    double m, const WindowSpec& w, double lambda, double eta_span, int n_eta,
    const std::vector<std::complex<double>>& rh) {
  size_t nq = psi.size();
  double deta = 2.0 * eta_span / (n_eta - 1);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n_eta; ++i) {
    double eta = -eta_span + i * deta;
    double sigma = lambda - eta;
    if (sigma <= 0.0) continue;  // chi_+ support
    double weight = std::pow(sigma, m);
    std::complex<double> Q = 0.0;
    for (size_t k = 0; k < nq; ++k)
      Q += a0[k] *
           std::exp(std::complex<double>(0.0, -sigma * (psi[k] - w.center)));
    Q *= ell / double(nq);
    double tw = (i == 0 || i == n_eta - 1) ? 0.5 : 1.0;
    acc += tw * weight * rh[i] * Q;
  }
  return acc * deta / (2.0 * kPi);
}

void check_resolution(size_t nq, double dpsi, const WindowSpec& w,
                      double lambda, double eta_span, int n_eta) {
  double sigma_max = lambda + eta_span;
  double q_periods = sigma_max * dpsi / (2.0 * kPi);
  if (q_periods > 1.0 && double(nq) < 20.0 * q_periods)
    fail(ErrCode::UnderResolved, "q grid under-resolved for this lambda");
  double edge = 0.5 * w.flat + w.roll;
  double eta_periods_per_node =
      (2.0 * eta_span / (n_eta - 1)) * edge / (2.0 * kPi);
  if (eta_periods_per_node > 1.0 / 20.0)
    fail(ErrCode::UnderResolved, "eta grid under-resolved for this window");
}

}  // namespace

std::complex<double> windowed_transform(const std::vector<double>& qs,
                                        const std::vector<double>& psi,
                                        const std::vector<double>& a0,
                                        double ell, double m,
                                        const WindowSpec& w, double lambda,
                                        double eta_span, int n_eta) {
  size_t nq = qs.size();
  if (nq < 8 || psi.size() != nq || a0.size() != nq)
    fail(ErrCode::BadArgument, "windowed_transform: bad sample table");
  if (n_eta < 9 || (n_eta % 2) == 0)
    fail(ErrCode::BadArgument, "n_eta must be odd and >= 9");

  double psi_lo = *std::min_element(psi.begin(), psi.end());
  double psi_hi = *std::max_element(psi.begin(), psi.end());
  check_resolution(nq, psi_hi - psi_lo, w, lambda, eta_span, n_eta);

  double deta = 2.0 * eta_span / (n_eta - 1);
  std::vector<std::complex<double>> rh(n_eta);
  for (int i = 0; i < n_eta; ++i) rh[i] = rho_hat(w, -eta_span + i * deta);
  return transform_with_table(psi, a0, ell, m, w, lambda, eta_span, n_eta,
                              rh);
}

OrderFit fit_order(const std::vector<double>& lambdas,
                   const std::vector<double>& magnitudes) {
  size_t n = lambdas.size();
  if (n < 6 || magnitudes.size() != n)
    fail(ErrCode::BadArgument, "fit_order needs >= 6 matched samples");
  for (size_t i = 1; i < n; ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      fail(ErrCode::BadArgument, "lambdas must be strictly increasing");
  if (lambdas.back() / lambdas.front() < 8.0)
    fail(ErrCode::DegenerateFit, "lambda range spans less than a factor 8");

  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(magnitudes[i] > 0))
      fail(ErrCode::DegenerateFit, "non-positive magnitude in fit");
    x[i] = std::log(lambdas[i]);
    y[i] = std::log(magnitudes[i]);
  }
  double xm = 0, ym = 0;
  for (size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  double slope = sxy / sxx;
  double icpt = ym - slope * xm;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - (slope * x[i] + icpt);
    ss += r * r;
  }
  OrderFit f;
  f.lambdas = lambdas;
  f.magnitudes = magnitudes;
  f.fitted_slope = slope;
  f.slope_stderr = std::sqrt(ss / double(n - 2) / sxx);
  return f;
}

std::complex<double> ft_chi_plus(double a, double t, double eps,
                                 std::complex<double>* numeric_out,
                                 std::complex<double>* closed_out) {
  if (!(a > -1.0)) fail(ErrCode::BadArgument, "ft_chi_plus needs a > -1");
  if (!(eps > 0.0)) fail(ErrCode::BadArgument, "ft_chi_plus needs eps > 0");
  // int_0^inf xi^a e^{-xi (eps + i t)} dxi on the real axis. The endpoint
  // xi^a is non-analytic for fractional a, so [0, delta] is summed as the
  // convergent series sum_n (-z)^n delta^{a+n+1} / (n! (a+n+1)); the
  // remaining analytic tail uses composite Gauss-Legendre panels sized to
  // the oscillation period, truncated once the exponential tail is
  // negligible.
  const std::complex<double> z(eps, t);
  double xi_max = (30.0 + (a > 0 ? 3.0 * a * std::log(1.0 + a / eps) : 0.0)) /
                  eps;
  // the series region must extend well past the xi^a endpoint singularity,
  // or the first quadrature panels see large high derivatives; |z| delta = 4
  // costs only an e^4 cancellation in the series
  double delta = std::min(4.0 / std::abs(z), 0.25 * xi_max);
  std::complex<double> acc = 0.0;
  {
    std::complex<double> zp = 1.0;  // (-z)^n / n!
    for (int n = 0; n < 120; ++n) {
      std::complex<double> term =
          zp * std::pow(delta, a + n + 1.0) / (a + n + 1.0);
      acc += term;
      if (std::abs(term) < 1e-18 * (1.0 + std::abs(acc))) break;
      zp *= -z / double(n + 1);
    }
  }
  double period = (std::abs(t) > 1e-12) ? 2.0 * kPi / std::abs(t) : xi_max;
  double panel = std::min(period / 3.0, (xi_max - delta) / 16.0);
  int n_panels = int(std::ceil((xi_max - delta) / panel));
  const GaussRule& gr = gauss_legendre(12);
  // extended-precision node evaluation: in double, the rounding of the
  // phase xi*t (xi up to ~30/eps) against the large non-oscillatory mass
  // Gamma(a+2)/eps^(a+2) floors the cancellation error near 1e-7
  long double acc_re = 0.0L, acc_im = 0.0L;
  for (int p = 0; p < n_panels; ++p) {
    long double lo = delta + (long double)(p)*panel;
    long double hi = std::min((long double)(delta) +
                                  (long double)(p + 1) * panel,
                              (long double)(xi_max));
    long double mid = 0.5L * (lo + hi), half = 0.5L * (hi - lo);
    for (size_t i = 0; i < gr.nodes.size(); ++i) {
      long double xi = mid + half * (long double)(gr.nodes[i]);
      long double env = (long double)(gr.weights[i]) *
                        powl(xi, (long double)(a)) *
                        expl(-xi * (long double)(eps));
      long double ph = -xi * (long double)(t);
      acc_re += half * env * cosl(ph);
      acc_im += half * env * sinl(ph);
    }
  }
  acc += std::complex<double>(double(acc_re), double(acc_im));
  std::complex<double> closed =
      std::tgamma(a + 1.0) *
      std::pow(std::complex<double>(eps, t), -(a + 1.0));
  if (numeric_out) *numeric_out = acc;
  if (closed_out) *closed_out = closed;
  return acc - closed;
}

TraceCheckReport run_trace_check(const Domain& d, int j,
                                 const TraceCheckOptions& opts) {
  TraceCheckReport rep;
  rep.j = j;
  double ell = d.length();
  Vec2 origin = d.centroid();

  PeriodicReport per = find_periodic(d, j);
  rep.t_j = per.t_j;
  rep.T_j = per.T_j;
  double dpsi_coarse = per.T_j - per.t_j;
  rep.degenerate = dpsi_coarse < 1e-9;

  int grid_n = opts.grid_n > 0 ? opts.grid_n : (rep.degenerate ? 256 : 1024);
  auto table = loop_function(d, j, grid_n, /*include_derivative=*/true);
  std::vector<double> qs(grid_n), psi(grid_n), a0(grid_n);
  double psi_lo = 1e300, psi_hi = -1e300;
  for (int i = 0; i < grid_n; ++i) {
    qs[i] = table[i].q;
    psi[i] = table[i].psi;
    psi_lo = std::min(psi_lo, psi[i]);
    psi_hi = std::max(psi_hi, psi[i]);
    a0[i] = 4.0 * std::sin(table[i].omega1) *
            std::sqrt(std::sin(table[i].omega2)) *
            std::sqrt(std::abs(table[i].domega1_dqprime)) *
            d.position_dot_normal(table[i].q, origin);
  }
  rep.delta_psi = psi_hi - psi_lo;
  rep.degenerate = rep.delta_psi < 1e-9;

  WindowSpec w;
  w.center = 0.5 * (psi_lo + psi_hi);
  w.roll = opts.roll > 0 ? opts.roll : (rep.degenerate ? 0.04 : 2.5e-3);
  // a genuinely flat top kills all moments of rho_hat at the center, so the
  // lambda-scaling is free of 1/(roll^2 lambda^2) window bias
  w.flat = opts.flat > 0
               ? opts.flat
               : (rep.degenerate ? std::max(rep.delta_psi, w.roll)
                                 : rep.delta_psi);
  rep.window = w;

  double eta_span =
      opts.eta_span > 0 ? opts.eta_span : (rep.degenerate ? 400.0 : 40000.0);
  int n_eta = opts.n_eta > 0 ? opts.n_eta : (rep.degenerate ? 801 : 2001);

  double lam_lo, lam_hi;
  int n_lambda;
  if (rep.degenerate || !opts.auto_scale) {
    lam_lo = opts.lambda_min;
    lam_hi = opts.lambda_max;
    n_lambda = opts.n_lambda;
  } else {
    lam_lo = 20.0 / rep.delta_psi;
    lam_hi = 8.0 * lam_lo;
    n_lambda = std::min(opts.n_lambda, 8);
  }
  rep.lambda_lo = lam_lo;
  rep.lambda_hi = lam_hi;

  std::vector<double> lambdas(n_lambda);
  for (int i = 0; i < n_lambda; ++i)
    lambdas[i] =
        lam_lo * std::pow(lam_hi / lam_lo, double(i) / double(n_lambda - 1));

  check_resolution(qs.size(), rep.delta_psi, w,
                   lam_hi * (1.0 + (rep.degenerate ? 0.0 : opts.band_frac)),
                   eta_span, n_eta);
  double deta = 2.0 * eta_span / (n_eta - 1);
  std::vector<std::complex<double>> rh(n_eta);
  parallel_for(size_t(n_eta), [&](size_t i) {
    rh[i] = rho_hat(w, -eta_span + double(i) * deta);
  });

  std::vector<double> mags(n_lambda, 0.0);
  std::vector<std::complex<double>> vals(n_lambda);
  parallel_for(size_t(n_lambda), [&](size_t i) {
    double lam = lambdas[i];
    vals[i] = transform_with_table(psi, a0, ell, opts.m, w, lam, eta_span,
                                   n_eta, rh);
    if (rep.degenerate) {
      mags[i] = std::abs(vals[i]);
    } else {
      // RMS over a band to average the multi-critical-point interference
      double ss = 0.0;
      for (int k = 0; k < opts.band_n; ++k) {
        double l = lam * (1.0 - opts.band_frac) +
                   lam * 2.0 * opts.band_frac * k / (opts.band_n - 1);
        double v = std::abs(transform_with_table(psi, a0, ell, opts.m, w, l,
                                                 eta_span, n_eta, rh));
        ss += v * v;
      }
      mags[i] = std::sqrt(ss / opts.band_n);
    }
  });

  rep.values = vals;
  rep.fit = fit_order(lambdas, mags);
  double s = rep.fit.fitted_slope;
  double tol = 3.0 * std::max(rep.fit.slope_stderr, 0.02);
  if (std::abs(s - (opts.m)) <= tol && std::abs(s) > tol)
    rep.verdict = "degenerate: |F| ~ lambda^m (caustic regime)";
  else if (std::abs(s - (opts.m - 0.5)) <= tol)
    rep.verdict = "nondegenerate: |F| ~ lambda^(m-1/2)";
  else
    rep.verdict = "inconclusive";
  return rep;
}

std::string TraceCheckReport::json() const {
  nlohmann::json o;
  o["j"] = j;
  o["degenerate"] = degenerate;
  o["delta_psi"] = delta_psi;
  o["t_j"] = t_j;
  o["T_j"] = T_j;
  o["lambda_lo"] = lambda_lo;
  o["lambda_hi"] = lambda_hi;
  o["window"] = {{"center", window.center},
                 {"flat", window.flat},
                 {"roll", window.roll}};
  o["slope"] = fit.fitted_slope;
  o["stderr"] = fit.slope_stderr;
  o["verdict"] = verdict;
  return o.dump(2);
}

std::string TraceCheckReport::csv() const {
  // abs is the magnitude entering the fit (band RMS in the nondegenerate
  // regime); re/im are the pointwise transform at lambda
  std::string out = "lambda,re,im,abs\n";
  char buf[160];
  for (size_t i = 0; i < fit.lambdas.size(); ++i) {
    double re = i < values.size() ? values[i].real() : 0.0;
    double im = i < values.size() ? values[i].imag() : 0.0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                  fit.lambdas[i], re, im, fit.magnitudes[i]);
    out += buf;
  }
  return out;
}

}  // namespace bil
