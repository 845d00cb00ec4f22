#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "billiard_map.hpp"
#include "domain.hpp"
#include "ellipse_oracle.hpp"
#include "errors.hpp"
#include "invariants.hpp"
#include "orbits.hpp"
#include "trace_check.hpp"

namespace bil {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Suite {
  SuiteResult r;
  explicit Suite(std::string name) { r.suite = std::move(name); }
  void check(const std::string& name, bool ok, const std::string& detail) {
    r.checks.push_back({name, ok, detail});
    if (!ok) r.pass = false;
  }
  void check_le(const std::string& name, double value, double bound) {
    std::ostringstream os;
    os << value << " <= " << bound;
    check(name, value <= bound, os.str());
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------- criterion 1 ----
SuiteResult suite_circle_closed_forms() {
  Suite s("circle-closed-forms");
  for (double R : {1.0, 2.5}) {
    Domain d = Domain::ellipse(R, R);
    double worst_len = 0.0, worst_om = 0.0, worst_dw = 0.0;
    for (int j = 5; j <= 40; ++j) {
      PeriodicReport per = find_periodic(d, j, 32);
      double exact = 2.0 * j * R * std::sin(kPi / j);
      worst_len = std::max(worst_len,
                           std::max(std::abs(per.t_j / exact - 1.0),
                                    std::abs(per.T_j / exact - 1.0)));
      if (!per.caustic) s.check("caustic R=" + fmt(R), false, "j=" + fmt(j));
    }
    for (int j : {5, 10, 20, 40}) {
      auto table = loop_function(d, j, 16, true);
      for (const auto& t : table) {
        worst_om = std::max(worst_om, std::abs(t.omega1 - kPi / j));
        worst_om = std::max(worst_om, std::abs(t.omega2 - kPi / j));
        worst_dw = std::max(
            worst_dw, std::abs(t.domega1_dqprime - 1.0 / (2.0 * j * R)));
      }
    }
    s.check_le("t_j=T_j=2jR sin(pi/j) rel err, R=" + fmt(R), worst_len, 1e-9);
    s.check_le("omega = pi/j abs err, R=" + fmt(R), worst_om, 1e-8);
    s.check_le("domega1/dq' = 1/(2jR) abs err, R=" + fmt(R), worst_dw, 1e-8);
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 2 ----
SuiteResult suite_circle_wave_invariant() {
  Suite s("circle-wave-invariant");
  for (double R : {1.0, 2.5}) {
    Domain d = Domain::ellipse(R, R);
    double worst = 0.0;
    for (int j = 5; j <= 40; ++j) {
      InvariantReport rep = wave_invariant(d, j, {0.0, 0.0}, 16);
      double sign = (j % 2 == 0) ? -1.0 : 1.0;
      double exact = sign * 8.0 * kPi * std::pow(R, 1.5) *
                     std::pow(std::sin(kPi / j), 1.5) / std::sqrt(2.0 * j);
      worst = std::max(worst, std::abs(rep.c_j / exact - 1.0));
    }
    s.check_le("c_j circle closed form rel err, R=" + fmt(R), worst, 1e-8);
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 3 ----
SuiteResult suite_ellipse_cross_pipeline() {
  Suite s("ellipse-cross-pipeline");
  Domain d = Domain::ellipse(2.0, 1.0);
  for (int j : {10, 20, 30}) {
    InvariantReport rep = wave_invariant(d, j, {0.0, 0.0}, 128);
    double oracle =
        c_j_closed_form(2.0, 1.0, j, 256, RadicandVariant::kCorrected);
    double rel = std::abs(rep.c_j / oracle - 1.0);
    s.check("wave_invariant vs closed form (corrected reading), j=" + fmt(j),
            rel <= 1e-4, "rel err " + fmt(rel));
  }
  // circle-limit continuity: Richardson in delta (the closed form is
  // analytic in delta through k^2 ~ 2 delta)
  for (int j : {10, 20}) {
    auto c_at = [&](double delta) {
      return c_j_closed_form(1.0 + delta, 1.0, j, 256,
                             RadicandVariant::kCorrected);
    };
    double c1 = c_at(1e-3), c2 = c_at(5e-4), c3 = c_at(2.5e-4);
    double e1 = 2.0 * c2 - c1, e2 = 2.0 * c3 - c2;
    double extrap = 2.0 * e2 - e1;  // second-level Richardson
    double sign = (j % 2 == 0) ? -1.0 : 1.0;
    double circle = sign * 8.0 * kPi * std::pow(std::sin(kPi / j), 1.5) /
                    std::sqrt(2.0 * j);
    double rel = std::abs(extrap / circle - 1.0);
    s.check("circle-limit continuity j=" + fmt(j), rel <= 1e-6,
            "rel err " + fmt(rel));
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 4 ----
double resimulate_vertex_error(const Domain& d, const Orbit& o) {
  // re-simulate from the first boundary vertex onward with the chord solver
  double err = 0.0;
  double ell = d.length();
  int nb = int(o.s_boundary.size());
  double s = o.s_boundary.front();
  Vec2 prev = o.vertices.front();
  bool ccw = o.direction == "ccw";
  for (int k = 1; k < nb; ++k) {
    Vec2 P = d.point(s);
    Vec2 u = normalized(P - prev);
    Vec2 T = d.tangent(s);
    double theta = std::atan2(-dot(u, perp(T)), dot(u, T));
    prev = P;
    double s2 = next_arclength(d, s, theta);
    double ds = s2 - s;
    s = ccw ? s + ds : s - (ell - ds);
    err = std::max(err, norm(d.point(s) - d.point(o.s_boundary[k])));
  }
  return err;
}

SuiteResult suite_eight_orbits() {
  Suite s("eight-orbits");
  Domain d = Domain::ellipse(1.5, 1.0);
  double ell = d.length();
  for (double mu : {1e-6, 5e-7}) {
    double sq = 0.31;
    Vec2 x = d.point(sq) + mu * d.normal_in(sq);
    auto orbits = find_eight_orbits(d, x, x, 20);
    s.check("count = 8 at mu=" + fmt(mu), orbits.size() == 8,
            fmt(double(orbits.size())) + " orbits");
    // one per direction x config
    std::vector<std::string> seen;
    for (const auto& o : orbits) seen.push_back(o.direction + o.config);
    std::sort(seen.begin(), seen.end());
    bool unique_ok =
        std::adjacent_find(seen.begin(), seen.end()) == seen.end();
    s.check("one per {TT,TN,NT,NN}x{ccw,cw} at mu=" + fmt(mu),
            unique_ok && seen.size() == 8, "");
    if (mu == 1e-6) {
      double worst = 0.0;
      for (const auto& o : orbits)
        worst = std::max(worst, resimulate_vertex_error(d, o));
      s.check_le("re-simulation vertex error / ell", worst / ell, 1e-8);
    }
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 5 ----
// tune theta so the j-fold iterate makes exactly one rotation
PhasePoint one_rotation_state(const Domain& d, double s0, int j) {
  double ell = d.length();
  auto over = [&](double theta) {
    LiftedPhasePoint p{s0, theta};
    return iterate_lifted(d, p, j).s_lift - s0 - ell;
  };
  double lo = 0.5 * kPi / j, hi = 2.0 * kPi / j;
  // ensure bracketing
  while (over(lo) > 0) lo *= 0.8;
  while (over(hi) < 0) hi *= 1.2;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (over(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return {s0, 0.5 * (lo + hi)};
}

SuiteResult suite_lazutkin_defect() {
  Suite s("lazutkin-defect");
  Domain d = Domain::ellipse(1.2, 1.0);
  std::vector<int> js = {64, 128, 256};
  std::vector<double> defects;
  for (int j : js) {
    PhasePoint p = one_rotation_state(d, 0.37, j);
    defects.push_back(lazutkin_iterated_jacobian_defect(d, p, j));
  }
  // fitted decay exponent of defect vs j (expect >= 0.8 for the C/j law)
  double x1 = std::log(double(js.front())), x2 = std::log(double(js.back()));
  double y1 = std::log(defects.front()), y2 = std::log(defects.back());
  double decay = -(y2 - y1) / (x2 - x1);
  s.check("defect decay exponent >= 0.8", decay >= 0.8,
          "exponent " + fmt(decay) + ", defects " + fmt(defects[0]) + ", " +
              fmt(defects[1]) + ", " + fmt(defects[2]));
  // symplecticity in (s, -cos theta): det J * sin(theta')/sin(theta) = 1
  double worst = 0.0;
  unsigned long long state = 88172645463325252ull;
  auto rnd = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return double(state % 1000000007ull) / 1000000007.0;
  };
  for (int i = 0; i < 1000; ++i) {
    PhasePoint p{rnd() * d.length(), 0.05 + 0.9 * kPi * rnd()};
    Mat2 J = jacobian(d, p);
    PhasePoint p2 = billiard_map(d, p);
    double det_symp = mat_det(J) * std::sin(p2.theta) / std::sin(p.theta);
    worst = std::max(worst, std::abs(det_symp - 1.0));
  }
  s.check_le("|det - 1| over 1000 random states", worst, 1e-9);
  return s.r;
}

// ---------------------------------------------------------- criterion 6 ----
SuiteResult suite_angle_band() {
  Suite s("angle-band");
  std::vector<Domain> doms;
  doms.push_back(Domain::ellipse(1.0, 1.0));
  doms.push_back(Domain::ellipse(1.5, 1.0));
  doms.push_back(Domain::fourier(1.0, {0.0, 0.0, 0.01}, {}));
  const char* names[] = {"circle", "ellipse", "perturbed"};
  std::vector<int> js = {50, 100, 200, 400};
  int di = 0;
  for (const auto& d : doms) {
    double c1_first = 0.0, c2_first = 0.0;
    double c1_glob = 1e300, c2_glob = 0.0;
    bool stable = true;
    for (int j : js) {
      BoundaryOrbit o = loop_orbit(d, 0.0, j);
      double lo = 1e300, hi = 0.0;
      for (size_t k = 0; k < o.angles.size(); ++k) {
        LazutkinPoint lp = to_lazutkin(
            d, PhasePoint{std::fmod(o.s[k + 1], d.length()), o.angles[k]});
        double v = j * lp.alpha;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (j == js.front()) {
        c1_first = lo;
        c2_first = hi;
      } else {
        // the same constants must keep working: per-j band within 25%
        if (lo < 0.75 * c1_first || hi > 1.25 * c2_first) stable = false;
      }
      c1_glob = std::min(c1_glob, lo);
      c2_glob = std::max(c2_glob, hi);
    }
    std::ostringstream os;
    os << "C1=" << fmt(c1_glob) << " C2=" << fmt(c2_glob);
    s.check(std::string("band C1/j <= alpha_k <= C2/j stable, ") + names[di],
            stable && c1_glob > 0.0 && c2_glob / c1_glob < 4.0, os.str());
    ++di;
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 7 ----
SuiteResult suite_stationary_phase() {
  Suite s("stationary-phase-order");
  // degenerate family: circle
  Domain circ = Domain::ellipse(1.0, 1.0);
  TraceCheckOptions o1;
  o1.lambda_min = 200.0;
  o1.lambda_max = 1600.0;
  auto deg = run_trace_check(circ, 5, o1);
  s.check("degenerate slope = 0.5 +- 0.05",
          std::abs(deg.fit.fitted_slope - 0.5) <= 0.05,
          "slope " + fmt(deg.fit.fitted_slope) + " +- " +
              fmt(deg.fit.slope_stderr));
  TraceCheckOptions o1b = o1;
  o1b.roll = 0.05;
  auto deg2 = run_trace_check(circ, 5, o1b);
  double comb1 = 2.0 * std::max(deg.fit.slope_stderr, deg2.fit.slope_stderr);
  s.check("degenerate window independence (2 stderr)",
          std::abs(deg.fit.fitted_slope - deg2.fit.fitted_slope) <=
              std::max(comb1, 1e-3),
          "slopes " + fmt(deg.fit.fitted_slope) + " vs " +
              fmt(deg2.fit.fitted_slope));
  // simple nondegenerate: mode-3 perturbed circle, j = 15
  Domain pert = Domain::fourier(1.0, {0.0, 0.0, 0.01}, {});
  TraceCheckOptions o2;
  auto nd = run_trace_check(pert, 15, o2);
  s.check("nondegenerate slope = 0.0 +- 0.05",
          std::abs(nd.fit.fitted_slope) <= 0.05,
          "slope " + fmt(nd.fit.fitted_slope) + " +- " +
              fmt(nd.fit.slope_stderr));
  TraceCheckOptions o2b = o2;
  o2b.roll = 1.5e-3;
  o2b.eta_span = 66000.0;
  o2b.n_eta = 3001;
  auto nd2 = run_trace_check(pert, 15, o2b);
  double comb2 = 2.0 * std::max(nd.fit.slope_stderr, nd2.fit.slope_stderr);
  s.check("nondegenerate window independence (2 stderr)",
          std::abs(nd.fit.fitted_slope - nd2.fit.fitted_slope) <= comb2,
          "slopes " + fmt(nd.fit.fitted_slope) + " vs " +
              fmt(nd2.fit.fitted_slope));
  double gap = std::abs(deg.fit.fitted_slope - nd.fit.fitted_slope);
  double sep = 5.0 * std::max(deg.fit.slope_stderr, nd.fit.slope_stderr);
  s.check("dichotomy separated by >= 5 stderr", gap >= sep,
          "gap " + fmt(gap) + " vs " + fmt(sep));
  return s.r;
}

// ---------------------------------------------------------- criterion 8 ----
SuiteResult suite_poncelet() {
  Suite s("poncelet");
  double a = 2.0, b = 1.0;
  Domain d = Domain::ellipse(a, b);
  double ell = d.length();
  for (int j : {5, 12, 25}) {
    CausticParam cp = solve_zeta(a, b, j);
    double worst_close = 0.0, worst_rot = 0.0;
    double len_min = 1e300, len_max = 0.0;
    for (int i = 0; i < 16; ++i) {
      double s0 = ell * i / 16.0;
      double phi = d.t_of_s(s0);
      double theta = omega_of_phi(cp, a, b, phi);
      double s_lift = s0, th = theta, total = 0.0;
      Vec2 prev = d.point(s0);
      for (int k = 0; k < j; ++k) {
        double s2 = next_arclength(d, s_lift, th);
        Vec2 P = d.point(s2);
        total += norm(P - prev);
        Vec2 u = normalized(P - prev);
        Vec2 T = d.tangent(s2);
        th = std::atan2(-dot(u, perp(T)), dot(u, T));
        s_lift = s2;
        prev = P;
      }
      worst_close = std::max(worst_close, std::abs(s_lift - s0 - ell));
      worst_rot =
          std::max(worst_rot, std::abs((s_lift - s0) / (j * ell) - 1.0 / j));
      len_min = std::min(len_min, total);
      len_max = std::max(len_max, total);
    }
    s.check_le("closure error / ell, j=" + fmt(j), worst_close / ell, 1e-8);
    s.check_le("rotation number error, j=" + fmt(j), worst_rot, 1e-8);
    s.check_le("length spread (rel), j=" + fmt(j),
               (len_max - len_min) / len_max, 1e-9);
  }
  return s.r;
}

// ---------------------------------------------------------- criterion 9 ----
SuiteResult suite_ft_identity() {
  Suite s("ft-identity");
  double worst = 0.0;
  for (double a : {0.0, 0.5, 1.0, 1.5})
    for (double t : {1.0, -1.0, 2.0, -2.0})
      worst = std::max(worst, std::abs(ft_chi_plus(a, t, 1e-3)));
  s.check_le("max residual over a in {0,1/2,1,3/2}, t in {+-1,+-2}", worst,
             1e-8);
  return s.r;
}

// --------------------------------------------------------- criterion 10 ----
SuiteResult suite_properties() {
  Suite s("properties");
  Domain ell = Domain::ellipse(2.0, 1.0);
  Domain four = Domain::fourier(1.0, {0.0, 0.02, 0.01}, {0.0, 0.0, 0.005});

  // geometry round-trips
  double worst_rt = 0.0;
  for (const Domain* dp : {&ell, &four}) {
    const Domain& d = *dp;
    for (int i = 0; i < 64; ++i) {
      double sv = d.length() * i / 64.0;
      worst_rt = std::max(worst_rt, std::abs(d.s_of_t(d.t_of_s(sv)) - sv));
      BoundaryNormalCoords c{0.05, sv};
      Vec2 p = d.from_boundary_normal(c);
      BoundaryNormalCoords c2 = d.to_boundary_normal(p);
      double dphi = std::abs(c2.phi - c.phi);
      dphi = std::min(dphi, d.length() - dphi);
      worst_rt = std::max(worst_rt, std::abs(c2.mu - c.mu));
      worst_rt = std::max(worst_rt, dphi);
    }
  }
  s.check_le("geometry round-trips", worst_rt, 1e-9);

  // divergence identity: oint X.N ds = 2 Area
  double worst_div = 0.0;
  for (const Domain* dp : {&ell, &four}) {
    const Domain& d = *dp;
    for (Vec2 org : {Vec2{0.0, 0.0}, Vec2{0.2, -0.1}}) {
      int n = 4096;
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += d.position_dot_normal(d.length() * i / n, org);
      acc *= d.length() / n;
      worst_div =
          std::max(worst_div, std::abs(acc - 2.0 * d.area()) / d.area());
    }
  }
  s.check_le("oint X.N ds = 2 Area (rel)", worst_div, 1e-8);

  // xi-homogeneity of the principal symbol
  double v1 = principal_symbol(ell, 12, 0.4, 1.0, {0.0, 0.0});
  double v4 = principal_symbol(ell, 12, 0.4, 4.0, {0.0, 0.0});
  s.check_le("principal symbol xi^{1/2} homogeneity",
             std::abs(v4 / v1 - 2.0), 1e-12);

  // dilation covariance of c_j and |A_j|
  double r = 1.3;
  Domain big = Domain::ellipse(2.0 * r, 1.0 * r);
  InvariantReport c_small = wave_invariant(ell, 12, {0.0, 0.0}, 64);
  InvariantReport c_big = wave_invariant(big, 12, {0.0, 0.0}, 64);
  double cov_c = std::abs(c_big.c_j / (std::pow(r, 1.5) * c_small.c_j) - 1.0);
  s.check_le("c_j dilation covariance r^{3/2} (rel)", cov_c, 1e-8);
  double a_small = a_factor_boundary(ell, 12, 0.4);
  double a_big = a_factor_boundary(big, 12, 0.4 * r);
  double cov_a = std::abs(a_big * r / a_small - 1.0);
  s.check_le("|A_j| dilation covariance 1/r (rel)", cov_a, 1e-6);

  // singularity profile sanity
  std::vector<double> grid = {1.0};
  double prof = singularity_profile(1.0, 0.0, grid, 1e-9)[0];
  s.check_le("profile principal branch at t=1", std::abs(prof - std::cos(kPi / 4.0)),
             1e-6);
  return s.r;
}

}  // namespace

std::vector<SuiteResult> run_verify(const std::string& suite) {
  struct Entry {
    const char* name;
    SuiteResult (*fn)();
  };
  static const Entry entries[] = {
      {"circle-closed-forms", suite_circle_closed_forms},
      {"circle-wave-invariant", suite_circle_wave_invariant},
      {"ellipse-cross-pipeline", suite_ellipse_cross_pipeline},
      {"eight-orbits", suite_eight_orbits},
      {"lazutkin-defect", suite_lazutkin_defect},
      {"angle-band", suite_angle_band},
      {"stationary-phase-order", suite_stationary_phase},
      {"poncelet", suite_poncelet},
      {"ft-identity", suite_ft_identity},
      {"properties", suite_properties},
  };
  std::vector<SuiteResult> out;
  for (const auto& e : entries) {
    bool match = suite == "all" || suite == e.name ||
                 (suite == "circle" &&
                  std::string(e.name).rfind("circle", 0) == 0);
    if (match) out.push_back(e.fn());
  }
  if (out.empty()) fail(ErrCode::BadArgument, "unknown suite: " + suite);
  return out;
}

std::string format_verify_table(const std::vector<SuiteResult>& results) {
  std::ostringstream os;
  for (const auto& sr : results) {
    os << (sr.pass ? "PASS" : "FAIL") << "  " << sr.suite << "\n";
    for (const auto& c : sr.checks)
      os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name
         << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
  }
  return os.str();
}

bool all_passed(const std::vector<SuiteResult>& results) {
  for (const auto& sr : results)
    if (!sr.pass) return false;
  return true;
}

}  // namespace bil
