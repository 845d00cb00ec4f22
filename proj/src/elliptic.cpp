#include "elliptic.hpp"

#include <cmath>

#include "errors.hpp"

namespace bil {

double carlson_rf(double x, double y, double z) {
  if (x < 0 || y < 0 || z < 0 || (x + y <= 0) || (y + z <= 0) || (x + z <= 0))
    fail(ErrCode::BadArgument, "carlson_rf: invalid arguments");
  // duplication theorem; ERRTOL^6 controls the truncation of the Taylor tail
  const double ERRTOL = 1e-3;
  double xt = x, yt = y, zt = z;
  double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  for (int it = 0; it < 200; ++it) {
    mu = (xt + yt + zt) / 3.0;
    dx = 1.0 - xt / mu;
    dy = 1.0 - yt / mu;
    dz = 1.0 - zt / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < ERRTOL) break;
    double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    double lam = sx * (sy + sz) + sy * sz;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
  }
  double e2 = dx * dy - dz * dz;
  double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) /
         std::sqrt(mu);
}

double elliptic_F(double s, double k) {
  if (!(k >= 0.0) || k >= 1.0)
    fail(ErrCode::CoordinateOutOfRange, "elliptic modulus must be in [0,1)");
  if (s == 0.0) return 0.0;
  if (s < 0.0) return -elliptic_F(-s, k);
  // reduce to [0, pi/2] via F(s + pi) = F(s) + 2K
  const double pi = 3.14159265358979323846;
  double periods = std::floor((s + 0.5 * pi) / pi);
  double r = s - periods * pi;  // r in [-pi/2, pi/2)
  double base = (periods != 0.0) ? 2.0 * periods * elliptic_K(k) : 0.0;
  if (r == 0.0) return base;
  double sign = (r > 0) ? 1.0 : -1.0;
  double phi = std::abs(r);
  double sp = std::sin(phi), cp = std::cos(phi);
  double val = sp * carlson_rf(cp * cp, 1.0 - k * k * sp * sp, 1.0);
  return base + sign * val;
}

double elliptic_K(double k) {
  if (!(k >= 0.0) || k >= 1.0)
    fail(ErrCode::CoordinateOutOfRange, "elliptic modulus must be in [0,1)");
  return carlson_rf(0.0, 1.0 - k * k, 1.0);
}

}  // namespace bil
