#include "ellipse_oracle.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "billiard_map.hpp"
#include "domain.hpp"
#include "elliptic.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "json.hpp"

namespace bil {

namespace {

constexpr double kPi = 3.14159265358979323846;

double modulus_of(double a, double b, double zeta) {
  double k2 = (a * a - b * b) / (a * a - zeta * zeta);
  return std::sqrt(std::max(0.0, k2));
}

// h(u) = F(arcsin(sqrt(u)/b); k_sqrt(u)), the implicit-equation numerator as
// a function of u = zeta^2.
double h_of_u(double a, double b, double u) {
  double z = std::sqrt(u);
  double k = modulus_of(a, b, z);
  return elliptic_F(std::asin(std::min(1.0, z / b)), k);
}

double K_of_u(double a, double b, double u) {
  return elliptic_K(modulus_of(a, b, std::sqrt(u)));
}

// d/du with one Richardson level; step scaled to u.
double ddu(const std::function<double(double)>& f, double u) {
  double h = 1e-4 * u;
  auto cd = [&](double hh) { return (f(u + hh) - f(u - hh)) / (2.0 * hh); };
  double d1 = cd(h), d2 = cd(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

// refine a periodic-trapezoid quadrature by node doubling
double refine_trapezoid(const std::function<double(double)>& f, double period,
                        int n0, double* change_out) {
  double prev = periodic_trapezoid(f, period, n0);
  double change = 1e300;
  for (int n = 2 * n0; n <= (1 << 20); n *= 2) {
    double cur = periodic_trapezoid(f, period, n);
    change = std::abs(cur - prev);
    prev = cur;
    if (change <= 1e-10 * std::max(1.0, std::abs(cur))) break;
  }
  if (change_out) *change_out = change;
  return prev;
}

}  // namespace

CausticParam solve_zeta(double a, double b, int j) {
  if (!(a >= b) || !(b > 0)) fail(ErrCode::BadArgument, "need a >= b > 0");
  if (j < 3) fail(ErrCode::BadArgument, "solve_zeta needs j >= 3");
  auto g = [&](double z) {
    double k = modulus_of(a, b, z);
    return elliptic_F(std::asin(std::min(1.0, z / b)), k) /
               (2.0 * elliptic_K(k)) -
           1.0 / j;
  };
  double lo = 1e-12, hi = b * (1.0 - 1e-12);
  double glo = g(lo), ghi = g(hi);
  if (!(glo < 0 && ghi > 0))
    fail(ErrCode::NoConvergence, "solve_zeta: no sign change on (0,b)");
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  double z = 0.5 * (lo + hi);
  // Newton cleanup with a finite-difference derivative
  for (int it = 0; it < 4; ++it) {
    double fz = g(z);
    double hstep = 1e-7 * b;
    double df = (g(z + hstep) - g(z - hstep)) / (2.0 * hstep);
    if (df == 0.0) break;
    double znew = z - fz / df;
    if (znew > lo && znew < hi) z = znew;
  }
  if (std::abs(g(z)) > 1e-12)
    fail(ErrCode::NoConvergence, "solve_zeta: residual above 1e-12");
  CausticParam cp;
  cp.zeta = z;
  cp.k = modulus_of(a, b, z);
  cp.j = j;
  cp.semi_major = std::sqrt(a * a - z * z);
  cp.semi_minor = std::sqrt(b * b - z * z);
  return cp;
}

double omega_of_phi(const CausticParam& cp, double a, double b, double phi) {
  double s3 = b * b + (a * a - b * b) * std::sin(phi) * std::sin(phi);
  return std::asin(std::min(1.0, cp.zeta / std::sqrt(s3)));
}

double G_of_zeta(const CausticParam& cp, double a, double b, int j) {
  double k2 = cp.k * cp.k;
  double quad = 0.0;
  if (k2 > 0) {
    auto f = [&](double tau) {
      double st = std::sin(tau);
      return st * st / std::pow(1.0 - k2 * st * st, 1.5);
    };
    quad = refine_trapezoid(f, 2.0 * kPi, 512, nullptr);
  }
  double term1 = -k2 / (a * a - cp.zeta * cp.zeta) * quad;
  double u = cp.zeta * cp.zeta;
  double term2 =
      (2.0 * j + 2.0) * ddu([&](double uu) { return h_of_u(a, b, uu); }, u);
  return term1 + term2;
}

double G_corrected(const CausticParam& cp, double a, double b, int j) {
  double u = cp.zeta * cp.zeta;
  double dF = ddu([&](double uu) { return h_of_u(a, b, uu); }, u);
  double dK = ddu([&](double uu) { return K_of_u(a, b, uu); }, u);
  return j * dF - 2.0 * dK;
}

double c_j_closed_form(double a, double b, int j, int quad_n,
                       RadicandVariant variant, double* convergence_out) {
  if (quad_n < 128) fail(ErrCode::BadArgument, "quad_n must be >= 128");
  CausticParam cp = solve_zeta(a, b, j);
  double zeta = cp.zeta, k2 = cp.k * cp.k;
  double sign = (j % 2 == 0) ? -1.0 : 1.0;

  double G = (variant == RadicandVariant::kCorrected)
                 ? G_corrected(cp, a, b, j)
                 : G_of_zeta(cp, a, b, j);

  auto integrand = [&](double phi) -> double {
    double sp = std::sin(phi), cpg = std::cos(phi);
    double s3 = b * b + (a * a - b * b) * sp * sp;
    double om = std::asin(std::min(1.0, zeta / std::sqrt(s3)));
    double speed2 = a * a * sp * sp + b * b * cpg * cpg;
    if (variant == RadicandVariant::kCorrected) {
      double rad = zeta * (s3 - zeta * zeta) * std::sqrt(speed2) * G;
      if (!(rad > 0)) {
        std::ostringstream os;
        os << "negative radicand at phi=" << phi;
        fail(ErrCode::NegativeRadicand, os.str());
      }
      return 2.0 * a * b * std::pow(std::sin(om), 1.5) *
             std::pow(a * a - zeta * zeta, 0.25) / std::sqrt(rad);
    }
    double pos2 = a * a * cpg * cpg + b * b * sp * sp;
    double inner = (variant == RadicandVariant::kPaper)
                       ? std::sqrt(1.0 - k2 * sp)
                       : std::sqrt(1.0 - k2 * sp * sp);
    double rad = std::cos(om) * speed2 * s3 * G * inner;
    if (!(rad > 0)) {
      std::ostringstream os;
      os << "negative radicand at phi=" << phi;
      fail(ErrCode::NegativeRadicand, os.str());
    }
    return 2.0 * a * b * std::sin(om) * std::sqrt(pos2) / std::sqrt(rad);
  };

  double val = refine_trapezoid(integrand, 2.0 * kPi, quad_n, convergence_out);
  return sign * val;
}

double poncelet_length(double a, double b, int j) {
  CausticParam cp = solve_zeta(a, b, j);
  Domain d = Domain::ellipse(a, b);
  double s = 0.0;
  double theta = omega_of_phi(cp, a, b, 0.0);
  double total = 0.0;
  Vec2 P = d.point(s);
  for (int k = 0; k < j; ++k) {
    double s2 = next_arclength(d, s, theta);
    Vec2 Q = d.point(s2);
    total += norm(Q - P);
    Vec2 u = normalized(Q - P);
    Vec2 T = d.tangent(s2);
    theta = std::atan2(-dot(u, perp(T)), dot(u, T));
    s = s2;
    P = Q;
  }
  return total;
}

OracleReport oracle_report(double a, double b, int j, int quad_n) {
  OracleReport r;
  r.a = a;
  r.b = b;
  r.j = j;
  CausticParam cp = solve_zeta(a, b, j);
  r.zeta = cp.zeta;
  r.k = cp.k;
  r.omega_at_phi0 = omega_of_phi(cp, a, b, 0.0);
  r.G = G_of_zeta(cp, a, b, j);
  r.G_corrected = G_corrected(cp, a, b, j);
  r.c_j_paper_radical =
      c_j_closed_form(a, b, j, quad_n, RadicandVariant::kPaper);
  r.c_j_sin_squared_radical =
      c_j_closed_form(a, b, j, quad_n, RadicandVariant::kSinSquared);
  r.c_j_corrected =
      c_j_closed_form(a, b, j, quad_n, RadicandVariant::kCorrected);
  r.L_j = poncelet_length(a, b, j);
  return r;
}

std::string OracleReport::json() const {
  nlohmann::json o;
  o["a"] = a;
  o["b"] = b;
  o["j"] = j;
  o["zeta"] = zeta;
  o["k"] = k;
  o["omega_at_phi0"] = omega_at_phi0;
  o["G"] = G;
  o["G_corrected"] = G_corrected;
  o["c_j_paper_radical"] = c_j_paper_radical;
  o["c_j_sin_squared_radical"] = c_j_sin_squared_radical;
  o["c_j_corrected"] = c_j_corrected;
  o["L_j"] = L_j;
  return o.dump(2);
}

}  // namespace bil
