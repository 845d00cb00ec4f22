#include "invariants.hpp"

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "orbits.hpp"
#include "json.hpp"

namespace bil {

double principal_symbol(const Domain& d, int j, double q, double xi,
                        const Vec2& origin) {
  if (!(xi > 0)) fail(ErrCode::BadArgument, "principal_symbol needs xi > 0");
  BoundaryOrbit o = loop_orbit(d, q, j);
  double dw = domega1_dqprime(d, q, j);
  double xn = d.position_dot_normal(q, origin);
  return 4.0 * std::sqrt(xi) * std::sin(o.omega1) *
         std::sqrt(std::sin(o.omega2)) * std::sqrt(std::abs(dw)) * xn;
}

double a_factor_boundary(const Domain& d, int j, double q) {
  double ell = d.length();
  BoundaryOrbit o = loop_orbit(d, q, j);
  double dw1 = domega1_dqprime(d, q, j);
  double primary = std::abs(dw1) / std::sin(o.omega2);

  // symmetric form: vary the base point with the lifted endpoint fixed
  double h = 1e-5 * ell;
  auto omega2_at = [&](double dq) {
    return connect_boundary(d, q + dq, q + ell, j).omega2;
  };
  double D1 = (omega2_at(h) - omega2_at(-h)) / (2 * h);
  double D2 = (omega2_at(2 * h) - omega2_at(-2 * h)) / (4 * h);
  double dw2 = (4.0 * D1 - D2) / 3.0;
  double alt = std::abs(dw2) / std::sin(o.omega1);
  if (std::abs(alt - primary) > 1e-5 * std::abs(primary))
    fail(ErrCode::CrossCheckFailed,
         "a_factor_boundary: symmetric identity violated");
  return primary;
}

InvariantReport wave_invariant(const Domain& d, int j, const Vec2& origin,
                               int quad_n, bool force) {
  if (quad_n < 16) fail(ErrCode::BadArgument, "quad_n too small");
  if (j < 3) fail(ErrCode::BadArgument, "need j >= 3");
  InvariantReport rep;
  rep.j = j;
  rep.origin = origin;
  rep.quad_n = quad_n;

  PeriodicReport per = find_periodic(d, j);
  rep.caustic = per.caustic;
  rep.t_j = per.t_j;
  rep.T_j = per.T_j;
  if (!per.caustic && !force)
    fail(ErrCode::NotCausticFamily,
         "loop function is non-constant; pass force to evaluate anyway");

  double ell = d.length();
  auto table = loop_function(d, j, quad_n, /*include_derivative=*/true);
  double sum = 0.0;
  rep.samples.reserve(table.size());
  for (const auto& smp : table) {
    double xn = d.position_dot_normal(smp.q, origin);
    double f = std::pow(std::sin(smp.omega1), 1.5) *
               std::sqrt(std::abs(smp.domega1_dqprime)) * xn;
    rep.samples.emplace_back(smp.q, f);
    sum += f;
  }
  double integral = sum * ell / double(table.size());
  double sign = (j % 2 == 0) ? -1.0 : 1.0;
  rep.c_j = sign * 4.0 * integral;
  return rep;
}

std::vector<double> singularity_profile(double c_j, double L_j,
                                        const std::vector<double>& t_grid,
                                        double eps) {
  if (!(eps > 0)) fail(ErrCode::BadArgument, "eps must be positive");
  std::vector<double> out;
  out.reserve(t_grid.size());
  const std::complex<double> phase =
      std::exp(std::complex<double>(0.0, 3.14159265358979323846 / 4.0));
  for (double t : t_grid) {
    std::complex<double> z(t - L_j, -eps);
    out.push_back(c_j * std::real(phase * std::pow(z, -1.5)));
  }
  return out;
}

std::string InvariantReport::json() const {
  nlohmann::json o;
  o["j"] = j;
  o["t_j"] = t_j;
  o["T_j"] = T_j;
  o["c_j"] = c_j;
  o["caustic"] = caustic;
  o["origin"] = {origin.x, origin.y};
  o["quad_n"] = quad_n;
  return o.dump(2);
}

}  // namespace bil
