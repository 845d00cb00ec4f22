#pragma once
#include <array>
#include <vector>

#include "domain.hpp"

namespace bil {

// Boundary billiard state: arclength s (mod length) and angle theta in (0,pi)
// measured from the positively oriented tangent to the outgoing ray.
struct PhasePoint {
  double s = 0.0;
  double theta = 0.0;
};

// Lifted state on the universal cover: s_lift is not wrapped.
struct LiftedPhasePoint {
  double s_lift = 0.0;
  double theta = 0.0;
};

struct LazutkinPoint {
  double x = 0.0;      // in [0,1)
  double alpha = 0.0;  // >= 0
};

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mat_mul(const Mat2& A, const Mat2& B);
double mat_det(const Mat2& A);
double mat_norm_inf(const Mat2& A);

constexpr double kTangentialGuard = 1e-9;  // radians

// Next reflection state. Throws TangentialState within the guard.
PhasePoint billiard_map(const Domain& d, const PhasePoint& p);
PhasePoint billiard_map_inverse(const Domain& d, const PhasePoint& p);

// Lifted n-fold iterate (n may be negative).
LiftedPhasePoint iterate_lifted(const Domain& d, const LiftedPhasePoint& p,
                                int n);

// Exact single-bounce Jacobian d(s',theta')/d(s,theta).
Mat2 jacobian(const Domain& d, const PhasePoint& p);

LazutkinPoint to_lazutkin(const Domain& d, const PhasePoint& p);
PhasePoint from_lazutkin(const Domain& d, const LazutkinPoint& lp);

// Normalization constant C = integral of kappa^{2/3} ds over the boundary.
double lazutkin_constant(const Domain& d);

// || D(beta^j) in Lazutkin coordinates - [[1,j],[0,1]] ||_inf along the orbit
// from p; requires the j-fold orbit to make approximately one rotation.
double lazutkin_iterated_jacobian_defect(const Domain& d, const PhasePoint& p,
                                         int j);

// Birkhoff average (s_lift(n) - s_lift(0)) / (n * length).
double rotation_number(const Domain& d, const PhasePoint& p, int n_iters);

// Chord solver: arclength s' > s (lifted) hit by the ray leaving point(s) at
// angle theta. Exposed for reuse by interior shooting.
double next_arclength(const Domain& d, double s, double theta);

// Ray from an interior point: first boundary hit, as arclength. The direction
// must not be tangent to the boundary at the hit (generic for interior rays).
double ray_hit_boundary(const Domain& d, const Vec2& p, const Vec2& dir);

}  // namespace bil
