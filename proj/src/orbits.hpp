#pragma once
#include <string>
#include <vector>

#include "billiard_map.hpp"
#include "domain.hpp"

namespace bil {

// Boundary-to-boundary broken geodesic with j links (j-1 interior
// reflections). Arclengths are lifted (strictly increasing for ccw).
struct BoundaryOrbit {
  std::vector<double> s;       // size j+1; s[0]=q, s[j]=q'_lift
  double length = 0.0;         // total Euclidean length
  double omega1 = 0.0;         // angle of first link vs tangent at q
  double omega2 = 0.0;         // angle of last link vs tangent at q'
  std::vector<double> angles;  // reflection angles at interior vertices
};

struct LoopFunctionSample {
  double q = 0.0;
  double psi = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double domega1_dqprime = 0.0;
};

// General polyline orbit (endpoints may be interior points).
struct Orbit {
  std::vector<Vec2> vertices;
  std::vector<double> s_boundary;  // lifted arclengths of boundary vertices
  std::vector<double> angles;      // reflection angles at boundary vertices
  double length = 0.0;
  int winding = 0;
  std::string direction;  // "ccw" | "cw"
  std::string config;     // "TT","TN","NT","NN","boundary"
};

struct PeriodicReport {
  std::vector<BoundaryOrbit> orbits;  // one per critical point (or one if caustic)
  std::vector<double> critical_q;
  double t_j = 0.0, T_j = 0.0;
  bool caustic = false;
};

struct NoncoincidenceEntry {
  int m = 0, n = 0;
  double length = 0.0;
};

struct NoncoincidenceReport {
  bool pass = false;
  double eps0 = 0.0;
  double min_distance_to_window = 0.0;  // min over entries of dist to (l-eps0,l)
  std::vector<NoncoincidenceEntry> entries;
};

// Unique j-link orbit from q to the lifted endpoint qp_lift (the winding is
// round((qp_lift-q)/length)); Newton over interior vertices with tridiagonal
// Hessian, damped-gradient fallback. Gradient at solution <= 1e-11.
BoundaryOrbit connect_boundary(const Domain& d, double q, double qp_lift,
                               int j);

// Loop function table on a uniform grid of base points, with continuation.
// include_derivative controls whether domega1_dqprime is computed (4 extra
// solves per sample).
std::vector<LoopFunctionSample> loop_function(const Domain& d, int j,
                                              int grid_n,
                                              bool include_derivative = true);

// Psi_j(q,q) and endpoint angles for a single base point.
BoundaryOrbit loop_orbit(const Domain& d, double q, int j);

PeriodicReport find_periodic(const Domain& d, int j, int nseeds = 64);

// d omega_{j,1}(q,q')/dq' at q'=q: central FD with one Richardson level
// (primary), cross-checked against the mixed second difference of Psi_j
// divided by sin omega1; CrossCheckFailed beyond 1e-5 relative.
double domega1_dqprime(const Domain& d, double q, int j,
                       double* crosscheck_rel = nullptr);

// The 8-Orbit Theorem sweep: interior points x,y near the boundary diagonal.
std::vector<Orbit> find_eight_orbits(const Domain& d, const Vec2& x,
                                     const Vec2& y, int j);

NoncoincidenceReport noncoincidence_check(const Domain& d, double eps0,
                                          int m_max, int n_max);

// default minimal j for the constructive solvers
int j_min(const Domain& d);

}  // namespace bil
