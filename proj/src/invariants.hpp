#pragma once
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace bil {

struct SymbolSample {
  double q = 0.0;
  double xi = 0.0;
  double value = 0.0;
};

struct InvariantReport {
  int j = 0;
  double t_j = 0.0, T_j = 0.0;  // min/max loop-length; equal for caustics
  double c_j = 0.0;             // units length^{3/2}
  bool caustic = false;
  Vec2 origin;
  int quad_n = 0;
  std::vector<std::pair<double, double>> samples;  // (q, a0 factor)
  std::string json() const;
};

// a_0^j(q,xi) = 4 xi^{1/2} sin w1 sin^{1/2} w2 |dw1/dq'|^{1/2} X(q).N(q).
double principal_symbol(const Domain& d, int j, double q, double xi,
                        const Vec2& origin);

// |A_j| on the boundary diagonal: |dw1/dq'| / sin w2; cross-checked against
// the symmetric form |dw2/dq| / sin w1 (1e-5 relative).
double a_factor_boundary(const Domain& d, int j, double q);

// c_j = (-1)^{j+1} 4 int sin^{3/2} w1 |dw1/dq'|^{1/2} X.N dq over the
// boundary; refuses on non-caustic loop functions unless force is set.
InvariantReport wave_invariant(const Domain& d, int j, const Vec2& origin,
                               int quad_n, bool force = false);

// c_j Re{ e^{i pi/4} (t - L_j - i eps)^{-3/2} } on a grid.
std::vector<double> singularity_profile(double c_j, double L_j,
                                        const std::vector<double>& t_grid,
                                        double eps);

}  // namespace bil
