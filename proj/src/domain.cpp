#include "domain.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "quadrature.hpp"
#include "json.hpp"

namespace bil {

static constexpr double kTwoPi = 2.0 * M_PI;

static double wrap(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0) y += period;
  return y;
}

// ---------------------------------------------------------------- curve ----

Vec2 Domain::gamma(double t) const {
  if (kind_ == "ellipse") return {a_ * std::cos(t), b_ * std::sin(t)};
  double c = std::cos(t), s = std::sin(t);
  double rv = 1.0;
  for (size_t k = 0; k < cosc_.size(); ++k)
    rv += cosc_[k] * std::cos((k + 1) * t);
  for (size_t k = 0; k < sinc_.size(); ++k)
    rv += sinc_[k] * std::sin((k + 1) * t);
  double r = R_ * rv;
  return {r * c, r * s};
}

Vec2 Domain::dgamma(double t) const {
  if (kind_ == "ellipse") return {-a_ * std::sin(t), b_ * std::cos(t)};
  double c = std::cos(t), s = std::sin(t);
  double r = 1.0, dr = 0.0;
  for (size_t k = 0; k < cosc_.size(); ++k) {
    double m = double(k + 1);
    r += cosc_[k] * std::cos(m * t);
    dr -= cosc_[k] * m * std::sin(m * t);
  }
  for (size_t k = 0; k < sinc_.size(); ++k) {
    double m = double(k + 1);
    r += sinc_[k] * std::sin(m * t);
    dr += sinc_[k] * m * std::cos(m * t);
  }
  r *= R_;
  dr *= R_;
  return {dr * c - r * s, dr * s + r * c};
}

Vec2 Domain::d2gamma(double t) const {
  if (kind_ == "ellipse") return {-a_ * std::cos(t), -b_ * std::sin(t)};
  double c = std::cos(t), s = std::sin(t);
  double r = 1.0, dr = 0.0, d2r = 0.0;
  for (size_t k = 0; k < cosc_.size(); ++k) {
    double m = double(k + 1);
    r += cosc_[k] * std::cos(m * t);
    dr -= cosc_[k] * m * std::sin(m * t);
    d2r -= cosc_[k] * m * m * std::cos(m * t);
  }
  for (size_t k = 0; k < sinc_.size(); ++k) {
    double m = double(k + 1);
    r += sinc_[k] * std::sin(m * t);
    dr += sinc_[k] * m * std::cos(m * t);
    d2r -= sinc_[k] * m * m * std::sin(m * t);
  }
  r *= R_;
  dr *= R_;
  d2r *= R_;
  return {d2r * c - 2 * dr * s - r * c, d2r * s + 2 * dr * c - r * s};
}

Vec2 Domain::d3gamma(double t) const {
  if (kind_ == "ellipse") return {a_ * std::sin(t), -b_ * std::cos(t)};
  double c = std::cos(t), s = std::sin(t);
  double r = 1.0, dr = 0.0, d2r = 0.0, d3r = 0.0;
  for (size_t k = 0; k < cosc_.size(); ++k) {
    double m = double(k + 1);
    r += cosc_[k] * std::cos(m * t);
    dr -= cosc_[k] * m * std::sin(m * t);
    d2r -= cosc_[k] * m * m * std::cos(m * t);
    d3r += cosc_[k] * m * m * m * std::sin(m * t);
  }
  for (size_t k = 0; k < sinc_.size(); ++k) {
    double m = double(k + 1);
    r += sinc_[k] * std::sin(m * t);
    dr += sinc_[k] * m * std::cos(m * t);
    d2r -= sinc_[k] * m * m * std::sin(m * t);
    d3r -= sinc_[k] * m * m * m * std::cos(m * t);
  }
  r *= R_;
  dr *= R_;
  d2r *= R_;
  d3r *= R_;
  // third derivative of (r cos t, r sin t)
  return {d3r * c - 3 * d2r * s - 3 * dr * c + r * s,
          d3r * s + 3 * d2r * c - 3 * dr * s - r * c};
}

double Domain::curvature_t(double t) const {
  Vec2 g1 = dgamma(t), g2 = d2gamma(t);
  double sp = norm(g1);
  return cross(g1, g2) / (sp * sp * sp);
}

// ----------------------------------------------------------- construction --

Domain Domain::ellipse(double a, double b) {
  if (!(a >= b && b > 0))
    fail(ErrCode::SpecError, "ellipse requires a >= b > 0");
  Domain d;
  d.kind_ = "ellipse";
  d.a_ = a;
  d.b_ = b;
  d.build();
  return d;
}

Domain Domain::fourier(double R, std::vector<double> cos_coeffs,
                       std::vector<double> sin_coeffs) {
  if (!(R > 0)) fail(ErrCode::SpecError, "fourier requires R > 0");
  Domain d;
  d.kind_ = "fourier";
  d.R_ = R;
  d.cosc_ = std::move(cos_coeffs);
  d.sinc_ = std::move(sin_coeffs);
  d.build();
  return d;
}

Domain Domain::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrCode::SpecError, std::string("domain spec parse error: ") + e.what());
  }
  std::string kind = j.value("kind", "");
  if (kind == "ellipse") {
    if (!j.contains("a") || !j.contains("b"))
      fail(ErrCode::SpecError, "ellipse spec needs fields a and b");
    return ellipse(j["a"].get<double>(), j["b"].get<double>());
  }
  if (kind == "fourier") {
    if (!j.contains("R")) fail(ErrCode::SpecError, "fourier spec needs field R");
    std::vector<double> cc, sc;
    if (j.contains("cos")) cc = j["cos"].get<std::vector<double>>();
    if (j.contains("sin")) sc = j["sin"].get<std::vector<double>>();
    return fourier(j["R"].get<double>(), std::move(cc), std::move(sc));
  }
  fail(ErrCode::SpecError, "domain spec kind must be 'ellipse' or 'fourier'");
}

Domain Domain::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::SpecError, "cannot open domain spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Domain::spec_json() const {
  nlohmann::json j;
  j["kind"] = kind_;
  if (kind_ == "ellipse") {
    j["a"] = a_;
    j["b"] = b_;
  } else {
    j["R"] = R_;
    j["cos"] = cosc_;
    j["sin"] = sinc_;
  }
  return j.dump();
}

void Domain::build() {
  // Convexity + curvature extremes on a dense parameter grid.
  kappa_min_ = 1e300;
  kappa_max_ = -1e300;
  for (int i = 0; i < kConvexityGrid; ++i) {
    double t = kTwoPi * i / kConvexityGrid;
    if (kind_ == "fourier") {
      double rv = 1.0;
      for (size_t k = 0; k < cosc_.size(); ++k)
        rv += cosc_[k] * std::cos((k + 1) * t);
      for (size_t k = 0; k < sinc_.size(); ++k)
        rv += sinc_[k] * std::sin((k + 1) * t);
      if (rv <= 0) {
        std::ostringstream os;
        os << "fourier radius non-positive at grid point " << i
           << " (theta=" << t << ")";
        fail(ErrCode::SpecError, os.str());
      }
    }
    double k = curvature_t(t);
    if (!(k > 0)) {
      std::ostringstream os;
      os << "boundary not strictly convex: curvature " << k
         << " at grid point " << i << " (t=" << t << ")";
      fail(ErrCode::SpecError, os.str());
    }
    kappa_min_ = std::min(kappa_min_, k);
    kappa_max_ = std::max(kappa_max_, k);
  }

  // Cumulative arclength at panel boundaries.
  panel_s_.assign(kPanels + 1, 0.0);
  for (int i = 0; i < kPanels; ++i) {
    double t0 = kTwoPi * i / kPanels, t1 = kTwoPi * (i + 1) / kPanels;
    panel_s_[i + 1] =
        panel_s_[i] +
        gl_integrate([this](double t) { return norm(dgamma(t)); }, t0, t1, 16);
  }
  length_ = panel_s_[kPanels];

  // Area and centroid (shoelace integrals).
  double A = 0.0, Cx = 0.0, Cy = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    double t0 = kTwoPi * i / kPanels, t1 = kTwoPi * (i + 1) / kPanels;
    A += gl_integrate(
        [this](double t) { return 0.5 * cross(gamma(t), dgamma(t)); }, t0, t1,
        16);
    Cx += gl_integrate(
        [this](double t) {
          Vec2 g = gamma(t);
          return 0.5 * g.x * g.x * dgamma(t).y;
        },
        t0, t1, 16);
    Cy += gl_integrate(
        [this](double t) {
          Vec2 g = gamma(t);
          return -0.5 * g.y * g.y * dgamma(t).x;
        },
        t0, t1, 16);
  }
  area_ = A;
  centroid_ = {Cx / A, Cy / A};

  // Dense inverse table t(s) by Newton, seeded by continuation.
  inv_t_.assign(kInvSamples + 1, 0.0);
  inv_dtds_.assign(kInvSamples + 1, 0.0);
  double t = 0.0;
  for (int k = 0; k <= kInvSamples; ++k) {
    double target = length_ * k / kInvSamples;
    if (k > 0) {
      for (int it = 0; it < 60; ++it) {
        double res = s_of_t(t) - target;
        double dt = res / norm(dgamma(t));
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
    }
    inv_t_[k] = (k == kInvSamples) ? kTwoPi : t;
    inv_dtds_[k] = 1.0 / norm(dgamma(t));
    t += kTwoPi / kInvSamples;  // seed for next sample
  }
  inv_dtds_[kInvSamples] = inv_dtds_[0];
}

// ----------------------------------------------------- arclength mapping ---

double Domain::s_of_t(double t) const {
  double tw = wrap(t, kTwoPi);
  double laps = std::floor((t - tw) / kTwoPi + 0.5);
  int panel = std::min(int(tw / (kTwoPi / kPanels)), kPanels - 1);
  double t0 = kTwoPi * panel / kPanels;
  double s = panel_s_[panel] +
             gl_integrate([this](double u) { return norm(dgamma(u)); }, t0, tw,
                          16);
  return s + laps * length_;
}

double Domain::t_of_s(double s) const {
  double sw = wrap(s, length_);
  double laps = std::floor((s - sw) / length_ + 0.5);
  double u = sw / length_ * kInvSamples;
  int k = std::min(int(u), kInvSamples - 1);
  double h = length_ / kInvSamples;
  double x = (sw - k * h) / h;  // in [0,1]
  // cubic Hermite on [t_k, t_{k+1}] with slopes dt/ds
  double p0 = inv_t_[k], p1 = inv_t_[k + 1];
  if (k == kInvSamples - 1) p1 = kTwoPi;  // monotone endpoint
  double m0 = inv_dtds_[k] * h, m1 = inv_dtds_[k + 1] * h;
  double x2 = x * x, x3 = x2 * x;
  double t = (2 * x3 - 3 * x2 + 1) * p0 + (x3 - 2 * x2 + x) * m0 +
             (-2 * x3 + 3 * x2) * p1 + (x3 - x2) * m1;
  // one Newton polish: s(t) = sw
  t -= (s_of_t(t) - sw) / norm(dgamma(t));
  return t + laps * kTwoPi;
}

// ------------------------------------------------------------- geometry ----

Vec2 Domain::point(double s) const { return gamma(t_of_s(s)); }

Vec2 Domain::tangent(double s) const { return normalized(dgamma(t_of_s(s))); }

Vec2 Domain::normal_in(double s) const { return perp(tangent(s)); }

Vec2 Domain::normal_out(double s) const { return -perp(tangent(s)); }

double Domain::curvature(double s) const { return curvature_t(t_of_s(s)); }

double Domain::dcurvature_ds(double s) const {
  double t = t_of_s(s);
  Vec2 g1 = dgamma(t), g2 = d2gamma(t), g3 = d3gamma(t);
  double sp = norm(g1);
  double kappa = cross(g1, g2) / (sp * sp * sp);
  double dkappa_dt =
      cross(g1, g3) / (sp * sp * sp) - 3.0 * kappa * dot(g1, g2) / (sp * sp);
  return dkappa_dt / sp;
}

double Domain::position_dot_normal(double s, const Vec2& origin) const {
  if (!contains(origin))
    fail(ErrCode::OriginOutside, "origin for X(q) is not interior");
  Vec2 X = point(s) - origin;
  return dot(X, normal_out(s));
}

double Domain::warp_factor(const BoundaryNormalCoords& c) const {
  double k = curvature(c.phi);
  if (!(c.mu >= 0.0) || c.mu >= 1.0 / k)
    fail(ErrCode::CoordinateOutOfRange,
         "warp_factor requires 0 <= mu < 1/kappa(phi)");
  double f = 1.0 - c.mu * k;
  return f * f;
}

Vec2 Domain::from_boundary_normal(const BoundaryNormalCoords& c) const {
  return point(c.phi) + c.mu * normal_in(c.phi);
}

double Domain::signed_inner_distance(const Vec2& p, double* foot_s) const {
  // Coarse scan for the nearest boundary point, then Newton on
  // g(t) = (gamma(t) - p) . gamma'(t) = 0.
  const int N = 256;
  double best_t = 0.0, best_d2 = 1e300;
  for (int i = 0; i < N; ++i) {
    double t = kTwoPi * i / N;
    double d2 = norm2(gamma(t) - p);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = t;
    }
  }
  double t = best_t;
  for (int it = 0; it < 60; ++it) {
    Vec2 g = gamma(t), g1 = dgamma(t), g2 = d2gamma(t);
    double f = dot(g - p, g1);
    double fp = norm2(g1) + dot(g - p, g2);
    // fp can vanish for points near the evolute/far outside: fall back to a
    // small damped step, and keep the iterate within one period of the seed.
    double dt = (std::abs(fp) > 1e-12) ? f / fp : (f > 0 ? 0.01 : -0.01);
    if (dt > 0.5) dt = 0.5;
    if (dt < -0.5) dt = -0.5;
    t -= dt;
    if (t < best_t - M_PI) t = best_t - M_PI;
    if (t > best_t + M_PI) t = best_t + M_PI;
    if (std::abs(dt) < 1e-15) break;
  }
  double s = s_of_t(t);
  if (foot_s) *foot_s = wrap(s, length_);
  Vec2 diff = p - gamma(t);
  // positive when p lies on the inward side of the foot point
  double mu = dot(diff, perp(normalized(dgamma(t))));
  return mu;
}

double Domain::signed_inner_distance_hinted(const Vec2& p, double* t_hint,
                                            double* foot_s) const {
  double t = *t_hint;
  bool converged = false;
  for (int it = 0; it < 40; ++it) {
    Vec2 g = gamma(t), g1 = dgamma(t), g2 = d2gamma(t);
    double f = dot(g - p, g1);
    double fp = norm2(g1) + dot(g - p, g2);
    if (!(std::abs(fp) > 1e-12)) break;
    double dt = f / fp;
    if (std::abs(dt) > 0.3) break;  // hint too far off; use global search
    t -= dt;
    if (std::abs(dt) < 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged) return signed_inner_distance(p, foot_s);
  *t_hint = t;
  if (foot_s) {
    double s = s_of_t(t);
    double sw = std::fmod(s, length_);
    if (sw < 0) sw += length_;
    *foot_s = sw;
  }
  return dot(p - gamma(t), perp(normalized(dgamma(t))));
}

BoundaryNormalCoords Domain::to_boundary_normal(const Vec2& p) const {
  double foot = 0.0;
  double mu = signed_inner_distance(p, &foot);
  if (mu < 0 || mu >= 1.0 / kappa_max_)
    fail(ErrCode::CoordinateOutOfRange,
         "point outside the tubular neighborhood mu in [0, 1/kappa_max)");
  return {mu, foot};
}

double Domain::ellipse_a() const {
  if (kind_ != "ellipse") fail(ErrCode::BadArgument, "not an ellipse domain");
  return a_;
}

double Domain::ellipse_b() const {
  if (kind_ != "ellipse") fail(ErrCode::BadArgument, "not an ellipse domain");
  return b_;
}

}  // namespace bil
