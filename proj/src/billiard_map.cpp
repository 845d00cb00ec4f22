#include "billiard_map.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "errors.hpp"
#include "quadrature.hpp"

namespace bil {

static constexpr double kTwoPi = 2.0 * M_PI;

Mat2 mat_mul(const Mat2& A, const Mat2& B) {
  Mat2 C{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
  return C;
}

double mat_det(const Mat2& A) { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }

double mat_norm_inf(const Mat2& A) {
  return std::max(std::abs(A[0][0]) + std::abs(A[0][1]),
                  std::abs(A[1][0]) + std::abs(A[1][1]));
}

static Mat2 mat_inv(const Mat2& A) {
  double det = mat_det(A);
  return {{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
}

static void check_angle(double theta) {
  if (!(theta > kTangentialGuard && theta < M_PI - kTangentialGuard))
    fail(ErrCode::TangentialState,
         "state within 1e-9 rad of tangency rejected");
}

// ------------------------------------------------------------ chord solve --

double next_arclength(const Domain& d, double s, double theta) {
  check_angle(theta);
  const double ell = d.length();
  double sw = std::fmod(s, ell);
  if (sw < 0) sw += ell;
  double ts = d.t_of_s(sw);
  Vec2 P = d.point(sw);
  Vec2 T = d.tangent(sw), Nin = perp(T);
  Vec2 dir = std::cos(theta) * T + std::sin(theta) * Nin;

  // h(t) = cross(dir, gamma(t) - P) is < 0 on (ts, t') and > 0 on (t', ts+2pi)
  // where t' is the far chord endpoint.
  auto h = [&](double t) { return cross(dir, d.point_param(t) - P); };

  // Margins strictly between the trivial root at ts and the far endpoint t';
  // a grazing chord subtends parameter ~ 2*theta/(kappa*speed).
  double mean_speed = d.length() / kTwoPi;
  double mlo =
      std::min(0.25 * std::min(theta, 1.0) / (d.kappa_max() * mean_speed), 0.5);
  double mhi = std::min(
      0.25 * std::min(M_PI - theta, 1.0) / (d.kappa_max() * mean_speed), 0.5);
  double lo = ts + mlo, hi = ts + kTwoPi - mhi;
  double hlo = h(lo), hhi = h(hi);
  // Widen toward the endpoints if the margins overshot (very short chords).
  int guard_iter = 0;
  while (hlo > 0 && guard_iter++ < 60) {
    mlo *= 0.5;
    lo = ts + mlo;
    hlo = h(lo);
  }
  guard_iter = 0;
  while (hhi < 0 && guard_iter++ < 60) {
    mhi *= 0.5;
    hi = ts + kTwoPi - mhi;
    hhi = h(hi);
  }
  if (!(hlo < 0 && hhi > 0))
    fail(ErrCode::NoConvergence, "chord solver failed to bracket");

  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double hp = cross(dir, d.dpoint_param(t));
    double dt = h(t) / hp;
    t -= dt;
    if (t <= lo || t >= hi) {  // keep Newton inside the certified bracket
      t = 0.5 * (lo + hi);
      break;
    }
    if (std::abs(dt) < 1e-15) break;
  }
  double s_next = d.s_of_t(t);  // in (sw, sw + ell)
  return s + (s_next - sw);
}

// forward step returning arclength increment and next angle
static void step(const Domain& d, double s, double theta, double* ds_out,
                 double* theta_out) {
  double s2 = next_arclength(d, s, theta);
  Vec2 P1 = d.point(s), P2 = d.point(s2);
  Vec2 u = normalized(P2 - P1);  // travel direction
  Vec2 T2 = d.tangent(s2), Nin2 = perp(T2);
  double theta2 = std::atan2(-dot(u, Nin2), dot(u, T2));
  *ds_out = s2 - s;
  *theta_out = theta2;
}

PhasePoint billiard_map(const Domain& d, const PhasePoint& p) {
  double ds = 0, th = 0;
  step(d, p.s, p.theta, &ds, &th);
  double ell = d.length();
  double s2 = std::fmod(p.s + ds, ell);
  if (s2 < 0) s2 += ell;
  return {s2, th};
}

PhasePoint billiard_map_inverse(const Domain& d, const PhasePoint& p) {
  // time reversal: conjugate by theta -> pi - theta
  PhasePoint q = billiard_map(d, {p.s, M_PI - p.theta});
  return {q.s, M_PI - q.theta};
}

LiftedPhasePoint iterate_lifted(const Domain& d, const LiftedPhasePoint& p,
                                int n) {
  LiftedPhasePoint cur = p;
  double ell = d.length();
  if (n >= 0) {
    for (int k = 0; k < n; ++k) {
      double ds = 0, th = 0;
      step(d, cur.s_lift, cur.theta, &ds, &th);
      cur.s_lift += ds;
      cur.theta = th;
    }
  } else {
    for (int k = 0; k < -n; ++k) {
      double ds = 0, th = 0;
      step(d, cur.s_lift, M_PI - cur.theta, &ds, &th);
      cur.s_lift -= ell - ds;
      cur.theta = M_PI - th;
    }
  }
  return cur;
}

// --------------------------------------------------------------- Jacobian --

Mat2 jacobian(const Domain& d, const PhasePoint& p) {
  check_angle(p.theta);
  double s2 = next_arclength(d, p.s, p.theta);
  double L = norm(d.point(s2) - d.point(p.s));
  Vec2 u = normalized(d.point(s2) - d.point(p.s));
  double st = std::sin(p.theta);
  double st2 = -dot(u, perp(d.tangent(s2)));  // sin theta'
  double k1 = d.curvature(p.s), k2 = d.curvature(s2);
  Mat2 J;
  J[0][0] = (L * k1 - st) / st2;
  J[0][1] = L / st2;
  J[1][0] = (L * k1 * k2 - k1 * st2 - k2 * st) / st2;
  J[1][1] = (L * k2 - st2) / st2;
  return J;
}

// ------------------------------------------------------ Lazutkin tables ----

namespace {

struct LazTable {
  double C = 0.0;                  // integral of kappa^{2/3} ds
  std::vector<double> cum;         // cumulative at t_i = 2pi i / N
  double fp_len = 0, fp_area = 0;  // fingerprint of the source domain
  static constexpr int N = 512;
};

const LazTable& laz_table(const Domain& d) {
  static std::map<const Domain*, LazTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(&d);
  if (it != cache.end() && it->second.fp_len == d.length() &&
      it->second.fp_area == d.area())
    return it->second;
  LazTable tab;
  tab.fp_len = d.length();
  tab.fp_area = d.area();
  tab.cum.assign(LazTable::N + 1, 0.0);
  auto f = [&](double t) {
    return std::pow(d.curvature_param(t), 2.0 / 3.0) * norm(d.dpoint_param(t));
  };
  for (int i = 0; i < LazTable::N; ++i) {
    double t0 = kTwoPi * i / LazTable::N, t1 = kTwoPi * (i + 1) / LazTable::N;
    tab.cum[i + 1] = tab.cum[i] + gl_integrate(f, t0, t1, 16);
  }
  tab.C = tab.cum[LazTable::N];
  auto [pos, ok] = cache.insert_or_assign(&d, std::move(tab));
  return pos->second;
}

double laz_x_of_t(const Domain& d, const LazTable& tab, double t) {
  double tw = std::fmod(t, kTwoPi);
  if (tw < 0) tw += kTwoPi;
  int panel = std::min(int(tw / (kTwoPi / LazTable::N)), LazTable::N - 1);
  double t0 = kTwoPi * panel / LazTable::N;
  auto f = [&](double u) {
    return std::pow(d.curvature_param(u), 2.0 / 3.0) * norm(d.dpoint_param(u));
  };
  return (tab.cum[panel] + gl_integrate(f, t0, tw, 16)) / tab.C;
}

}  // namespace

double lazutkin_constant(const Domain& d) { return laz_table(d).C; }

LazutkinPoint to_lazutkin(const Domain& d, const PhasePoint& p) {
  const LazTable& tab = laz_table(d);
  double t = d.t_of_s(p.s);
  double x = laz_x_of_t(d, tab, t);
  double kappa = d.curvature(p.s);
  double alpha = 4.0 * std::pow(kappa, -1.0 / 3.0) * std::sin(0.5 * p.theta) / tab.C;
  if (x >= 1.0) x -= 1.0;
  return {x, alpha};
}

PhasePoint from_lazutkin(const Domain& d, const LazutkinPoint& lp) {
  const LazTable& tab = laz_table(d);
  // invert x: binary search on cumulative table + Newton in t
  double target = lp.x - std::floor(lp.x);
  double X = target * tab.C;
  int lo = 0, hi = LazTable::N;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (tab.cum[mid] <= X)
      lo = mid;
    else
      hi = mid;
  }
  double t = kTwoPi * (lo + (X - tab.cum[lo]) /
                                std::max(tab.cum[lo + 1] - tab.cum[lo], 1e-300)) /
             LazTable::N;
  for (int it = 0; it < 50; ++it) {
    double fx = laz_x_of_t(d, tab, t) - target;
    double fp = std::pow(d.curvature_param(t), 2.0 / 3.0) *
                norm(d.dpoint_param(t)) / tab.C;
    double dt = fx / fp;
    t -= dt;
    if (std::abs(dt) < 1e-14) break;
  }
  double s = d.s_of_t(t);
  double kappa = d.curvature(s);
  double arg = lp.alpha * tab.C * std::pow(kappa, 1.0 / 3.0) / 4.0;
  arg = std::min(std::max(arg, -1.0), 1.0);
  double theta = 2.0 * std::asin(arg);
  double ell = d.length();
  double sw = std::fmod(s, ell);
  if (sw < 0) sw += ell;
  return {sw, theta};
}

// Jacobian of the (s,theta) -> (x,alpha) change at p.
static Mat2 lazutkin_dphi(const Domain& d, const PhasePoint& p) {
  const LazTable& tab = laz_table(d);
  double kappa = d.curvature(p.s);
  double dkds = d.dcurvature_ds(p.s);
  Mat2 M;
  M[0][0] = std::pow(kappa, 2.0 / 3.0) / tab.C;
  M[0][1] = 0.0;
  M[1][0] = -(4.0 / (3.0 * tab.C)) * std::pow(kappa, -4.0 / 3.0) * dkds *
            std::sin(0.5 * p.theta);
  M[1][1] = (2.0 / tab.C) * std::pow(kappa, -1.0 / 3.0) *
            std::cos(0.5 * p.theta);
  return M;
}

double lazutkin_iterated_jacobian_defect(const Domain& d, const PhasePoint& p,
                                         int j) {
  if (j == 0) return 0.0;
  if (j < 0) fail(ErrCode::BadArgument, "defect requires j >= 0");
  double ell = d.length();
  Mat2 M{{{1, 0}, {0, 1}}};
  Mat2 phi0 = lazutkin_dphi(d, p);
  double s_lift = p.s;
  PhasePoint cur = p;
  for (int k = 0; k < j; ++k) {
    Mat2 J = jacobian(d, cur);
    M = mat_mul(J, M);
    double ds = 0, th = 0;
    step(d, cur.s, cur.theta, &ds, &th);
    s_lift += ds;
    double sw = std::fmod(s_lift, ell);
    if (sw < 0) sw += ell;
    cur = {sw, th};
  }
  if (std::abs(s_lift - p.s - ell) > ell / 100.0)
    fail(ErrCode::NotOneRotation,
         "j-fold orbit does not make approximately one rotation");
  Mat2 A = mat_mul(lazutkin_dphi(d, cur), mat_mul(M, mat_inv(phi0)));
  Mat2 defect{{{A[0][0] - 1.0, A[0][1] - double(j)},
               {A[1][0], A[1][1] - 1.0}}};
  return mat_norm_inf(defect);
}

double rotation_number(const Domain& d, const PhasePoint& p, int n_iters) {
  if (n_iters < 1) fail(ErrCode::BadArgument, "rotation_number needs n >= 1");
  LiftedPhasePoint lp{p.s, p.theta};
  LiftedPhasePoint out = iterate_lifted(d, lp, n_iters);
  return (out.s_lift - lp.s_lift) / (n_iters * d.length());
}

double ray_hit_boundary(const Domain& d, const Vec2& p, const Vec2& dir_in) {
  Vec2 dir = normalized(dir_in);
  double D0 = d.signed_inner_distance(p);
  if (!(D0 > 0)) fail(ErrCode::BadArgument, "ray origin must be interior");
  // inner distance along the ray is concave; unique positive root
  double lo = 0.0, hi = 0.75 * d.length();
  double Dhi = d.signed_inner_distance(p + hi * dir);
  int guard = 0;
  while (Dhi > 0 && guard++ < 8) {
    hi *= 1.5;
    Dhi = d.signed_inner_distance(p + hi * dir);
  }
  if (Dhi > 0) fail(ErrCode::NoConvergence, "ray never exits the domain?");
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (d.signed_inner_distance(p + mid * dir) > 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * d.length()) break;
  }
  double foot = 0.0;
  d.signed_inner_distance(p + 0.5 * (lo + hi) * dir, &foot);
  return foot;
}

}  // namespace bil
