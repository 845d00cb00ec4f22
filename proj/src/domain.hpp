#pragma once
#include <memory>
#include <string>
#include <vector>

#include "vec2.hpp"

namespace bil {

struct BoundaryNormalCoords {
  double mu = 0.0;   // distance into the domain
  double phi = 0.0;  // arclength of the foot point
};

// Smooth strictly convex planar domain, arclength-parametrized.
// Analytic kinds only: ellipse (a cos t, b sin t) and Fourier-radial
// r(theta) = R (1 + sum eps_k cos k theta + delta_k sin k theta).
class Domain {
 public:
  static Domain ellipse(double a, double b);
  static Domain fourier(double R, std::vector<double> cos_coeffs,
                        std::vector<double> sin_coeffs);
  static Domain from_json_text(const std::string& text);
  static Domain from_json_file(const std::string& path);

  const std::string& kind() const { return kind_; }
  std::string spec_json() const;  // round-trippable domain spec

  double length() const { return length_; }
  double area() const { return area_; }
  Vec2 centroid() const { return centroid_; }
  double kappa_min() const { return kappa_min_; }
  double kappa_max() const { return kappa_max_; }

  // parameter <-> arclength (both accept any real, periodic)
  double s_of_t(double t) const;
  double t_of_s(double s) const;

  // Direct parameter-space access (t is the analytic parameter, not
  // arclength); used by solvers that bracket roots in t.
  Vec2 point_param(double t) const { return gamma(t); }
  Vec2 dpoint_param(double t) const { return dgamma(t); }
  double curvature_param(double t) const { return curvature_t(t); }

  // All of the following take arclength s (any real, wrapped mod length).
  Vec2 point(double s) const;
  Vec2 tangent(double s) const;     // unit, ccw orientation
  Vec2 normal_in(double s) const;   // inward unit normal
  Vec2 normal_out(double s) const;  // outward unit normal
  double curvature(double s) const;
  double dcurvature_ds(double s) const;

  // X(q).N(q) with X measured from `origin`; origin must be interior.
  double position_dot_normal(double s, const Vec2& origin) const;

  // Boundary normal coordinates.
  double warp_factor(const BoundaryNormalCoords& c) const;
  Vec2 from_boundary_normal(const BoundaryNormalCoords& c) const;
  BoundaryNormalCoords to_boundary_normal(const Vec2& p) const;

  // Signed distance into the domain (positive inside); foot point returned
  // through *foot_s if non-null.
  double signed_inner_distance(const Vec2& p, double* foot_s = nullptr) const;

  // Same, but Newton-seeded from *t_hint (parameter space); updates *t_hint
  // with the converged foot parameter. Falls back to the global search if the
  // local iteration leaves the hint's neighborhood.
  double signed_inner_distance_hinted(const Vec2& p, double* t_hint,
                                      double* foot_s = nullptr) const;
  bool contains(const Vec2& p) const { return signed_inner_distance(p) > 0.0; }

  // Ellipse accessors (BadArgument on other kinds).
  double ellipse_a() const;
  double ellipse_b() const;

 private:
  Domain() = default;
  void build();  // tables, perimeter, area, convexity validation

  // parameter-space curve and derivatives
  Vec2 gamma(double t) const;
  Vec2 dgamma(double t) const;
  Vec2 d2gamma(double t) const;
  Vec2 d3gamma(double t) const;
  double curvature_t(double t) const;

  std::string kind_;  // "ellipse" | "fourier"
  double a_ = 0.0, b_ = 0.0;                 // ellipse
  double R_ = 0.0;                           // fourier base radius
  std::vector<double> cosc_, sinc_;          // fourier harmonics

  double length_ = 0.0, area_ = 0.0;
  double kappa_min_ = 0.0, kappa_max_ = 0.0;
  Vec2 centroid_;

  // cumulative arclength at panel boundaries t_i = 2 pi i / Npanel
  std::vector<double> panel_s_;
  // dense inverse table: t and dt/ds at s = length * k / Minv
  std::vector<double> inv_t_, inv_dtds_;

  static constexpr int kPanels = 1024;
  static constexpr int kInvSamples = 8192;
  static constexpr int kConvexityGrid = 4096;
};

}  // namespace bil
