#include "orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace bil {

static double posmod(double x, double p) {
  double y = std::fmod(x, p);
  if (y < 0) y += p;
  return y;
}

int j_min(const Domain&) { return 10; }

// ------------------------------------------------------ variational solve --

namespace {

struct VertexGeom {
  Vec2 P, T, Nin;
  double kappa;
};

VertexGeom vgeom(const Domain& d, double s) {
  VertexGeom v;
  double t = d.t_of_s(s);
  Vec2 g1 = d.dpoint_param(t);
  v.P = d.point_param(t);
  v.T = normalized(g1);
  v.Nin = perp(v.T);
  v.kappa = d.curvature_param(t);
  return v;
}

// Thomas algorithm for tridiagonal H x = r (sub a, diag b, super c), n>=1.
void thomas(std::vector<double>& a, std::vector<double>& b,
            std::vector<double>& c, std::vector<double>& r) {
  int n = int(b.size());
  for (int i = 1; i < n; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  r[n - 1] /= b[n - 1];
  for (int i = n - 2; i >= 0; --i) r[i] = (r[i] - c[i] * r[i + 1]) / b[i];
}

// Newton solve for the interior vertices of a j-link path with fixed lifted
// endpoints s0, sj. `s` holds all j+1 lifted arclengths and provides the seed
// for indices 1..j-1. Returns final sup-norm of the gradient.
double solve_interior(const Domain& d, std::vector<double>& s, int j) {
  const int n = j - 1;
  std::vector<VertexGeom> V(j + 1);
  std::vector<Vec2> u(j + 1);     // u[k]: unit vector along link k (k=1..j)
  std::vector<double> L(j + 1);   // link lengths
  std::vector<double> g(n), sub(n), dia(n), sup(n);
  double span = s[j] - s[0];
  double step_cap = 2.0 * span / j;

  auto eval_grad = [&](const std::vector<double>& sv, std::vector<double>& gv) {
    for (int k = 0; k <= j; ++k) V[k] = vgeom(d, sv[k]);
    for (int k = 1; k <= j; ++k) {
      Vec2 diff = V[k].P - V[k - 1].P;
      L[k] = norm(diff);
      u[k] = diff / L[k];
    }
    double gn = 0.0;
    for (int k = 1; k < j; ++k) {
      gv[k - 1] = dot(u[k] - u[k + 1], V[k].T);
      gn = std::max(gn, std::abs(gv[k - 1]));
    }
    return gn;
  };

  double gnorm = eval_grad(s, g);
  std::vector<double> s_try(j + 1), g_try(n);
  for (int iter = 0; iter < 80 && gnorm > 1e-13; ++iter) {
    for (int k = 1; k < j; ++k) {
      double utk = dot(u[k], V[k].T), utk1 = dot(u[k + 1], V[k].T);
      double unk = dot(u[k], V[k].Nin), unk1 = dot(u[k + 1], V[k].Nin);
      dia[k - 1] = (1.0 - utk * utk) / L[k] + V[k].kappa * unk +
                   (1.0 - utk1 * utk1) / L[k + 1] - V[k].kappa * unk1;
      if (k < j - 1) {
        double ta_tb = dot(V[k].T, V[k + 1].T);
        double ua = dot(u[k + 1], V[k].T), ub = dot(u[k + 1], V[k + 1].T);
        sup[k - 1] = (-ta_tb + ua * ub) / L[k + 1];
        sub[k] = sup[k - 1];
      }
    }
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -g[i];
    std::vector<double> A(sub), B(dia), C(sup), R(rhs);
    thomas(A, B, C, R);
    // trust region on the Newton step
    double mx = 0.0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(R[i]));
    double scale = (mx > step_cap) ? step_cap / mx : 1.0;
    double t = scale;
    bool accepted = false;
    for (int ls = 0; ls < 14; ++ls) {
      s_try = s;
      for (int i = 0; i < n; ++i) s_try[i + 1] += t * R[i];
      bool ordered = true;
      for (int k = 0; k < j; ++k)
        if (!(s_try[k + 1] > s_try[k])) ordered = false;
      if (ordered) {
        double gn_try = eval_grad(s_try, g_try);
        if (gn_try < gnorm || gn_try < 1e-13) {
          s = s_try;
          g = g_try;
          gnorm = gn_try;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      // damped gradient ascent fallback (critical points are length maxima
      // in the Birkhoff sense)
      double hscale = 0.0;
      for (int i = 0; i < n; ++i) hscale = std::max(hscale, std::abs(dia[i]));
      double tau = (hscale > 0) ? 0.5 / hscale : 0.1;
      bool improved = false;
      for (int ls = 0; ls < 10; ++ls) {
        s_try = s;
        for (int i = 0; i < n; ++i) s_try[i + 1] += tau * g[i];
        double gn_try = eval_grad(s_try, g_try);
        if (gn_try < gnorm) {
          s = s_try;
          g = g_try;
          gnorm = gn_try;
          improved = true;
          break;
        }
        tau *= 0.5;
      }
      if (!improved) break;
      // restore link state for the next Hessian assembly
      eval_grad(s, g);
    }
  }
  return gnorm;
}

BoundaryOrbit finish_orbit(const Domain& d, const std::vector<double>& s,
                           int j) {
  BoundaryOrbit o;
  o.s = s;
  std::vector<Vec2> P(j + 1);
  for (int k = 0; k <= j; ++k) P[k] = d.point(s[k]);
  o.length = 0.0;
  std::vector<Vec2> u(j + 1);
  for (int k = 1; k <= j; ++k) {
    double L = norm(P[k] - P[k - 1]);
    o.length += L;
    u[k] = (P[k] - P[k - 1]) / L;
  }
  Vec2 T0 = d.tangent(s[0]), Tj = d.tangent(s[j]);
  o.omega1 = std::atan2(dot(u[1], perp(T0)), dot(u[1], T0));
  o.omega2 = std::atan2(-dot(u[j], perp(Tj)), dot(u[j], Tj));
  o.angles.resize(j - 1);
  for (int k = 1; k < j; ++k) {
    Vec2 Tk = d.tangent(s[k]);
    o.angles[k - 1] = std::atan2(-dot(u[k], perp(Tk)), dot(u[k], Tk));
  }
  return o;
}

BoundaryOrbit connect_with_seed(const Domain& d, double q, double qp_lift,
                                int j, const std::vector<double>* seed) {
  if (j < 2) fail(ErrCode::BadArgument, "connect_boundary needs j >= 2 links");
  double span = qp_lift - q;
  if (!(span > 0))
    fail(ErrCode::BadArgument, "lifted endpoint must exceed base point");
  std::vector<double> s(j + 1);
  s[0] = q;
  s[j] = qp_lift;
  if (seed && int(seed->size()) == j + 1) {
    for (int k = 1; k < j; ++k) s[k] = (*seed)[k];
    // keep seed strictly inside the span
    for (int k = 1; k < j; ++k)
      if (!(s[k] > s[k - 1])) s[k] = q + span * k / j;
  } else {
    for (int k = 1; k < j; ++k) s[k] = q + span * k / j;
  }
  double gn = solve_interior(d, s, j);
  if (gn > 1e-11) {
    std::ostringstream os;
    os << "connect_boundary: Newton stalled, |grad|=" << gn;
    fail(ErrCode::NoConvergence, os.str());
  }
  return finish_orbit(d, s, j);
}

}  // namespace

BoundaryOrbit connect_boundary(const Domain& d, double q, double qp_lift,
                               int j) {
  return connect_with_seed(d, q, qp_lift, j, nullptr);
}

BoundaryOrbit loop_orbit(const Domain& d, double q, int j) {
  return connect_with_seed(d, q, q + d.length(), j, nullptr);
}

// --------------------------------------------------------- loop function ---

double domega1_dqprime(const Domain& d, double q, int j,
                       double* crosscheck_rel) {
  double ell = d.length();
  BoundaryOrbit base = loop_orbit(d, q, j);
  double h = 1e-5 * ell;

  auto omega1_at = [&](double dq_prime) {
    std::vector<double> seed = base.s;
    seed[j] = q + ell + dq_prime;
    return connect_with_seed(d, q, q + ell + dq_prime, j, &seed).omega1;
  };
  double D1 = (omega1_at(h) - omega1_at(-h)) / (2 * h);
  double D2 = (omega1_at(2 * h) - omega1_at(-2 * h)) / (4 * h);
  double a = (4.0 * D1 - D2) / 3.0;

  // cross-check: d2 Psi/dq dq' = sin(omega1) * domega1/dq'. The mixed second
  // difference needs a larger step than 1e-5*ell to stay above roundoff in
  // Psi; one Richardson level in the larger step keeps truncation small.
  double H = 1e-3 * ell;
  auto psi_at = [&](double dq, double dqp) {
    std::vector<double> seed = base.s;
    for (double& sv : seed) sv += dq;
    seed[0] = q + dq;
    seed[j] = q + dq + ell + (dqp - dq);
    return connect_with_seed(d, q + dq, q + ell + dqp, j, &seed).length;
  };
  auto mixed = [&](double hh) {
    return (psi_at(hh, hh) - psi_at(hh, -hh) - psi_at(-hh, hh) +
            psi_at(-hh, -hh)) /
           (4 * hh * hh);
  };
  double M1 = mixed(H), M2 = mixed(2 * H);
  double b = (4.0 * M1 - M2) / 3.0 / std::sin(base.omega1);
  double rel = std::abs(a - b) / std::max(std::abs(a), 1e-300);
  if (crosscheck_rel) *crosscheck_rel = rel;
  if (rel > 1e-5) {
    std::ostringstream os;
    os << "domega1_dqprime cross-check failed: fd=" << a << " mixed=" << b
       << " rel=" << rel;
    fail(ErrCode::CrossCheckFailed, os.str());
  }
  return a;
}

std::vector<LoopFunctionSample> loop_function(const Domain& d, int j,
                                              int grid_n,
                                              bool include_derivative) {
  if (grid_n < 16) fail(ErrCode::BadArgument, "loop_function needs grid_n >= 16");
  double ell = d.length();
  std::vector<LoopFunctionSample> out(grid_n);
  std::vector<double> seed;
  for (int i = 0; i < grid_n; ++i) {
    double q = ell * i / grid_n;
    BoundaryOrbit o;
    if (i == 0) {
      o = connect_with_seed(d, q, q + ell, j, nullptr);
    } else {
      for (double& sv : seed) sv += ell / grid_n;
      o = connect_with_seed(d, q, q + ell, j, &seed);
    }
    seed = o.s;
    out[i].q = q;
    out[i].psi = o.length;
    out[i].omega1 = o.omega1;
    out[i].omega2 = o.omega2;
    if (include_derivative) {
      double h = 1e-5 * ell;
      auto omega1_at = [&](double dqp) {
        std::vector<double> sd = o.s;
        sd[j] = q + ell + dqp;
        return connect_with_seed(d, q, q + ell + dqp, j, &sd).omega1;
      };
      double D1 = (omega1_at(h) - omega1_at(-h)) / (2 * h);
      double D2 = (omega1_at(2 * h) - omega1_at(-2 * h)) / (4 * h);
      out[i].domega1_dqprime = (4.0 * D1 - D2) / 3.0;
    }
  }
  return out;
}

// -------------------------------------------------------------- periodic ---

PeriodicReport find_periodic(const Domain& d, int j, int nseeds) {
  double ell = d.length();
  PeriodicReport rep;
  // dPsi/dq = cos(omega2) - cos(omega1) (both endpoint derivatives act at q)
  std::vector<double> qs(nseeds), psi(nseeds), dpsi(nseeds);
  std::vector<double> seed;
  std::vector<std::vector<double>> sols(nseeds);
  for (int i = 0; i < nseeds; ++i) {
    double q = ell * i / nseeds;
    BoundaryOrbit o;
    if (i == 0)
      o = connect_with_seed(d, q, q + ell, j, nullptr);
    else {
      for (double& sv : seed) sv += ell / nseeds;
      o = connect_with_seed(d, q, q + ell, j, &seed);
    }
    seed = o.s;
    sols[i] = o.s;
    qs[i] = q;
    psi[i] = o.length;
    dpsi[i] = std::cos(o.omega2) - std::cos(o.omega1);
  }
  double pmin = *std::min_element(psi.begin(), psi.end());
  double pmax = *std::max_element(psi.begin(), psi.end());
  if (pmax - pmin < 1e-9) {
    rep.caustic = true;
    rep.t_j = pmin;
    rep.T_j = pmax;
    rep.critical_q = {0.0};
    rep.orbits.push_back(connect_with_seed(d, 0.0, ell, j, &sols[0]));
    return rep;
  }
  // bisect each sign change of dPsi/dq
  for (int i = 0; i < nseeds; ++i) {
    int i2 = (i + 1) % nseeds;
    double f1 = dpsi[i], f2 = dpsi[i2];
    if (f1 == 0.0) f1 = -1e-300;
    if (f1 * f2 >= 0) continue;
    double lo = qs[i], hi = qs[i] + ell / nseeds;
    std::vector<double> sd = sols[i];
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      std::vector<double> sm = sd;
      double shift = mid - sm[0];
      for (double& sv : sm) sv += shift;
      BoundaryOrbit om = connect_with_seed(d, mid, mid + ell, j, &sm);
      double fm = std::cos(om.omega2) - std::cos(om.omega1);
      if (f1 * fm <= 0)
        hi = mid;
      else {
        lo = mid;
        f1 = fm;
      }
      sd = om.s;
      if (hi - lo < 1e-13 * ell) break;
    }
    double qc = 0.5 * (lo + hi);
    std::vector<double> sm = sd;
    double shift = qc - sm[0];
    for (double& sv : sm) sv += shift;
    BoundaryOrbit oc = connect_with_seed(d, qc, qc + ell, j, &sm);
    rep.critical_q.push_back(qc);
    rep.orbits.push_back(oc);
  }
  if (rep.orbits.empty())
    fail(ErrCode::NoConvergence,
         "non-degenerate loop function but no critical points found");
  rep.t_j = 1e300;
  rep.T_j = -1e300;
  for (const auto& o : rep.orbits) {
    rep.t_j = std::min(rep.t_j, o.length);
    rep.T_j = std::max(rep.T_j, o.length);
  }
  return rep;
}

// --------------------------------------------------------- eight orbits ----

namespace {

struct Shot {
  bool valid = false;        // crossings exist and orbit stayed non-tangential
  double land_lift = 0.0;    // lifted foot coordinate of the chosen crossing
  std::vector<double> s_hits;     // lifted bounce arclengths (j of them)
  std::vector<double> thetas;     // reflection angles
  Vec2 w;                         // the crossing point (candidate y)
  double apex_height = 0.0;
};

// Simulate j reflections from interior point x with tilt psi, then locate the
// requested crossing (w1 = rising / w2 = falling) of y's distance level.
Shot shoot(const Domain& d, const Vec2& x, double sx, double psi, int j,
           bool ccw, bool want_w2, double mu_y) {
  Shot shot;
  double ell = d.length();
  Vec2 T0 = d.tangent(sx), Nout0 = -perp(T0);
  Vec2 dir = ccw ? std::cos(psi) * T0 + std::sin(psi) * Nout0
                 : -std::cos(psi) * T0 + std::sin(psi) * Nout0;
  double foot1 = 0.0;
  try {
    foot1 = ray_hit_boundary(d, x, dir);
  } catch (const BilError&) {
    return shot;
  }
  double s_lift = ccw ? sx + posmod(foot1 - sx, ell) : sx - posmod(sx - foot1, ell);
  Vec2 P1 = d.point(foot1);
  Vec2 u = normalized(P1 - x);
  Vec2 T1 = d.tangent(foot1);
  double theta = std::atan2(-dot(u, perp(T1)), dot(u, T1));
  shot.s_hits.push_back(s_lift);
  shot.thetas.push_back(theta);
  try {
    for (int k = 1; k < j; ++k) {
      double s2 = next_arclength(d, s_lift, theta);
      double ds = s2 - s_lift;
      Vec2 Pa = d.point(s_lift), Pb = d.point(s2);
      Vec2 uu = normalized(Pb - Pa);
      Vec2 Tb = d.tangent(s2);
      theta = std::atan2(-dot(uu, perp(Tb)), dot(uu, Tb));
      s_lift = ccw ? s_lift + ds : s_lift - (ell - ds);
      shot.s_hits.push_back(s_lift);
      shot.thetas.push_back(theta);
    }
  } catch (const BilError&) {
    return shot;
  }
  // final link: ray from the j-th bounce
  double sj = shot.s_hits.back();
  Vec2 Pj = d.point(sj), Tj = d.tangent(sj), Ninj = perp(Tj);
  Vec2 dj = std::cos(theta) * Tj + std::sin(theta) * Ninj;
  // distance-to-boundary along the ray is concave: find exit, apex, crossings
  double t_hint = d.t_of_s(posmod(sj, ell));
  auto dist_at = [&](double tau) {
    return d.signed_inner_distance_hinted(Pj + tau * dj, &t_hint);
  };
  double tau_exit = 0.25 * ell;
  {
    double Dv = dist_at(tau_exit);
    int guard = 0;
    while (Dv > 0 && guard++ < 10) {
      tau_exit *= 1.5;
      Dv = dist_at(tau_exit);
    }
    if (Dv > 0) return shot;
    double lo = 0.0, hi = tau_exit;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (dist_at(mid) > 0)
        lo = mid;
      else
        hi = mid;
    }
    tau_exit = 0.5 * (lo + hi);
  }
  double lo = 0.0, hi = tau_exit;
  for (int it = 0; it < 90; ++it) {  // ternary search for the apex
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (dist_at(m1) < dist_at(m2))
      lo = m1;
    else
      hi = m2;
  }
  double tau_apex = 0.5 * (lo + hi);
  shot.apex_height = dist_at(tau_apex);
  if (shot.apex_height <= mu_y) return shot;  // no crossings on this shot
  double a = want_w2 ? tau_apex : 0.0;
  double b = want_w2 ? tau_exit : tau_apex;
  // D - mu_y changes sign once on [a,b] (rising before apex, falling after);
  // note D(0)=0 < mu_y on the rising side.
  double fa = dist_at(a) - mu_y;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (a + b);
    double fm = dist_at(mid) - mu_y;
    if ((fa <= 0 && fm <= 0) || (fa > 0 && fm > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double tau_w = 0.5 * (a + b);
  shot.w = Pj + tau_w * dj;
  double foot_w = 0.0;
  d.signed_inner_distance_hinted(shot.w, &t_hint, &foot_w);
  shot.land_lift =
      ccw ? sj + posmod(foot_w - posmod(sj, ell), ell)
          : sj - posmod(posmod(sj, ell) - foot_w, ell);
  shot.valid = true;
  return shot;
}

// Newton polish of a converged shot: critical point of the full length
// functional over the j bounce arclengths with the interior endpoints X, Y
// held fixed. The psi bisection's landing foot is limited by the ulp of psi
// (the foot is ~1e8 times more sensitive than psi when the first link grazes
// the boundary); this removes that floor and lands the orbit exactly on Y.
double polish_shot(const Domain& d, const Vec2& X, const Vec2& Y,
                   std::vector<double>& s) {
  const int n = int(s.size());
  std::vector<VertexGeom> V(n);
  std::vector<Vec2> uin(n), uout(n);
  std::vector<double> Lin(n), Lout(n);
  std::vector<double> g(n), sub(n), dia(n), sup(n);

  auto eval = [&](const std::vector<double>& sv, std::vector<double>& gv) {
    for (int k = 0; k < n; ++k) V[k] = vgeom(d, sv[k]);
    double gn = 0.0;
    for (int k = 0; k < n; ++k) {
      Vec2 prev = (k == 0) ? X : V[k - 1].P;
      Vec2 next = (k == n - 1) ? Y : V[k + 1].P;
      Vec2 a = V[k].P - prev, b = next - V[k].P;
      Lin[k] = norm(a);
      Lout[k] = norm(b);
      uin[k] = a / Lin[k];
      uout[k] = b / Lout[k];
      gv[k] = dot(uin[k] - uout[k], V[k].T);
      gn = std::max(gn, std::abs(gv[k]));
    }
    return gn;
  };

  double gnorm = eval(s, g);
  std::vector<double> s_try(n), g_try(n);
  for (int iter = 0; iter < 40 && gnorm > 1e-14; ++iter) {
    for (int k = 0; k < n; ++k) {
      double uti = dot(uin[k], V[k].T), uto = dot(uout[k], V[k].T);
      double uni = dot(uin[k], V[k].Nin), uno = dot(uout[k], V[k].Nin);
      dia[k] = (1.0 - uti * uti) / Lin[k] + V[k].kappa * uni +
               (1.0 - uto * uto) / Lout[k] - V[k].kappa * uno;
      if (k + 1 < n) {
        double tt = dot(V[k].T, V[k + 1].T);
        double ua = dot(uout[k], V[k].T), ub = dot(uout[k], V[k + 1].T);
        sup[k] = (-tt + ua * ub) / Lout[k];
        sub[k + 1] = sup[k];
      }
    }
    std::vector<double> A(sub), B(dia), C(sup), R(n);
    for (int i = 0; i < n; ++i) R[i] = -g[i];
    thomas(A, B, C, R);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 8; ++ls) {
      s_try = s;
      for (int i = 0; i < n; ++i) s_try[i] += t * R[i];
      double gn_try = eval(s_try, g_try);
      if (gn_try < gnorm) {
        s = s_try;
        g = g_try;
        gnorm = gn_try;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return gnorm;
}

}  // namespace

std::vector<Orbit> find_eight_orbits(const Domain& d, const Vec2& x,
                                     const Vec2& y, int j) {
  if (j < j_min(d)) fail(ErrCode::BadArgument, "j below j_min for this domain");
  double ell = d.length();
  double sx = 0.0, sy = 0.0;
  double mux = d.signed_inner_distance(x, &sx);
  double muy = d.signed_inner_distance(y, &sy);
  if (!(mux > 0) || !(muy > 0))
    fail(ErrCode::BadArgument, "x and y must be interior points");

  std::vector<Orbit> out;
  int found_per_class = 0;
  (void)found_per_class;
  for (int dir_i = 0; dir_i < 2; ++dir_i) {
    bool ccw = (dir_i == 0);
    // lifted landing target: y's foot, one full rotation from x's foot
    double target = ccw ? sx + posmod(sy - sx, ell) : sx - posmod(sx - sy, ell);
    if (ccw && target - sx < 0.5 * ell) target += ell;
    if (ccw && target - sx > 1.5 * ell) target -= ell;
    if (!ccw && sx - target < 0.5 * ell) target -= ell;
    if (!ccw && sx - target > 1.5 * ell) target += ell;

    for (int first_T = 0; first_T < 2; ++first_T) {
      // psi > 0 tilts toward the boundary: first link N; psi < 0: first T
      double lo_mag = 1e-8, hi_mag = 12.0 / j;
      for (int last_T = 0; last_T < 2; ++last_T) {
        bool want_w2 = (last_T == 1);
        auto resid = [&](double mag) -> std::pair<bool, double> {
          double psi = first_T ? -mag : mag;
          Shot s = shoot(d, x, sx, psi, j, ccw, want_w2, muy);
          if (!s.valid) return {false, 0.0};
          return {true, ccw ? s.land_lift - target : target - s.land_lift};
        };
        // scan for a bracket; Lemma 4.5 monotonicity means one sign change
        const int NS = 64;
        double prev_mag = 0.0, prev_r = 0.0;
        bool have_prev = false;
        double blo = 0.0, bhi = 0.0;
        int nbrackets = 0;
        for (int i = 0; i < NS; ++i) {
          double mag = lo_mag + (hi_mag - lo_mag) * i / (NS - 1);
          auto [ok, r] = resid(mag);
          if (!ok) {
            have_prev = false;
            continue;
          }
          if (have_prev && prev_r * r <= 0.0 && prev_r != r) {
            ++nbrackets;
            blo = prev_mag;
            bhi = mag;
          }
          prev_mag = mag;
          prev_r = r;
          have_prev = true;
        }
        if (nbrackets != 1) {
          std::ostringstream os;
          os << "find_eight_orbits: " << nbrackets
             << " landing brackets in cone (dir=" << (ccw ? "ccw" : "cw")
             << " first=" << (first_T ? "T" : "N")
             << " last=" << (want_w2 ? "T" : "N") << ")";
          fail(ErrCode::WrongCount, os.str());
        }
        double rlo = resid(blo).second;
        for (int it = 0; it < 70; ++it) {
          double mid = 0.5 * (blo + bhi);
          auto [ok, rm] = resid(mid);
          if (!ok) break;
          if ((rlo <= 0) == (rm <= 0)) {
            blo = mid;
            rlo = rm;
          } else {
            bhi = mid;
          }
        }
        double mag = 0.5 * (blo + bhi);
        double psi = first_T ? -mag : mag;
        Shot s = shoot(d, x, sx, psi, j, ccw, want_w2, muy);
        if (!s.valid) fail(ErrCode::WrongCount, "converged shot became invalid");
        // polish with the endpoints fixed at x and y; accept only if the
        // Newton converged without leaving the shot's neighborhood
        std::vector<double> sp = s.s_hits;
        Vec2 wv = s.w;
        std::vector<double> ang = s.thetas;
        double gn = polish_shot(d, x, y, sp);
        double shift = 0.0;
        for (int k = 0; k < j; ++k)
          shift = std::max(shift, std::abs(sp[k] - s.s_hits[k]));
        // gradient noise floor is ~eps/L_min for the short grazing links;
        // with Hessian diagonal ~1/L_min the position error stays ~eps
        if (gn <= 1e-10 && shift < 1e-4 * ell) {
          wv = y;
          for (int k = 0; k < j; ++k) {
            Vec2 prev = (k == 0) ? x : d.point(sp[k - 1]);
            Vec2 uu = normalized(d.point(sp[k]) - prev);
            Vec2 Tk = d.tangent(sp[k]);
            ang[k] = std::atan2(-dot(uu, perp(Tk)), dot(uu, Tk));
          }
        } else {
          sp = s.s_hits;  // keep the raw shot
        }
        Orbit o;
        o.vertices.push_back(x);
        for (double sh : sp) o.vertices.push_back(d.point(sh));
        o.vertices.push_back(wv);
        o.s_boundary = sp;
        o.angles = ang;
        o.length = 0.0;
        for (size_t k = 0; k + 1 < o.vertices.size(); ++k)
          o.length += norm(o.vertices[k + 1] - o.vertices[k]);
        o.winding = ccw ? 1 : -1;
        o.direction = ccw ? "ccw" : "cw";
        o.config = std::string(first_T ? "T" : "N") + (want_w2 ? "T" : "N");
        out.push_back(std::move(o));
      }
    }
  }
  if (out.size() != 8)
    fail(ErrCode::WrongCount, "expected 8 orbits, found " +
                                  std::to_string(out.size()));
  return out;
}

// ---------------------------------------------------- noncoincidence sweep -

NoncoincidenceReport noncoincidence_check(const Domain& d, double eps0,
                                          int m_max, int n_max) {
  if (m_max < 2) fail(ErrCode::BadArgument, "noncoincidence needs m_max >= 2");
  double ell = d.length();
  NoncoincidenceReport rep;
  rep.eps0 = eps0;
  rep.pass = true;
  rep.min_distance_to_window = 1e300;
  for (int m = 2; m <= m_max; ++m) {
    for (int n = m + 1; n <= n_max; ++n) {
      if (std::gcd(m, n) != 1) continue;
      if (2 * m > n) continue;  // rotation number <= 1/2 families
      // maximize perimeter of the (m,n) star polygon by coordinate ascent
      std::vector<double> s(n);
      for (int k = 0; k < n; ++k) s[k] = double(k) * m * ell / n;
      double gmax = 1.0;
      for (int sweep = 0; sweep < 400 && gmax > 1e-10; ++sweep) {
        gmax = 0.0;
        for (int k = 0; k < n; ++k) {
          double sp = s[(k - 1 + n) % n] + ((k == 0) ? -m * ell : 0.0);
          double sn = s[(k + 1) % n] + ((k == n - 1) ? m * ell : 0.0);
          VertexGeom a = vgeom(d, sp), b = vgeom(d, s[k]), c = vgeom(d, sn);
          Vec2 ui = b.P - a.P, uo = c.P - b.P;
          double Li = norm(ui), Lo = norm(uo);
          ui = ui / Li;
          uo = uo / Lo;
          double g = dot(ui - uo, b.T);
          double utb_i = dot(ui, b.T), utb_o = dot(uo, b.T);
          double h = (1.0 - utb_i * utb_i) / Li + b.kappa * dot(ui, b.Nin) +
                     (1.0 - utb_o * utb_o) / Lo - b.kappa * dot(uo, b.Nin);
          double step = (std::abs(h) > 1e-14) ? -g / h : g;
          if (step > 0.1 * ell / n) step = 0.1 * ell / n;
          if (step < -0.1 * ell / n) step = -0.1 * ell / n;
          s[k] += step;
          gmax = std::max(gmax, std::abs(g));
        }
      }
      double len = 0.0;
      for (int k = 0; k < n; ++k) {
        Vec2 A = d.point(s[k]);
        Vec2 B = d.point(s[(k + 1) % n] + ((k == n - 1) ? m * ell : 0.0));
        len += norm(B - A);
      }
      rep.entries.push_back({m, n, len});
      double distw;
      if (len >= ell)
        distw = len - ell;
      else if (len <= ell - eps0)
        distw = (ell - eps0) - len;
      else {
        distw = 0.0;
        rep.pass = false;
      }
      rep.min_distance_to_window = std::min(rep.min_distance_to_window, distw);
    }
  }
  return rep;
}

}  // namespace bil
