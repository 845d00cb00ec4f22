#pragma once
#include <string>

namespace bil {

// Confocal-caustic parameter for the ellipse x^2/a^2 + y^2/b^2 = 1: the
// caustic is the confocal ellipse with semi-axes (sqrt(a^2-zeta^2),
// sqrt(b^2-zeta^2)), and k^2 = (a^2-b^2)/(a^2-zeta^2).
struct CausticParam {
  double zeta = 0.0;
  double k = 0.0;
  int j = 0;
  double semi_major = 0.0;  // sqrt(a^2 - zeta^2)
  double semi_minor = 0.0;  // sqrt(b^2 - zeta^2)
};

// Radicand conventions for the closed-form c_j integrand.
enum class RadicandVariant {
  kPaper,       // sqrt(1 - k^2 sin(phi)) exactly as printed
  kSinSquared,  // sqrt(1 - k^2 sin^2(phi))
  kCorrected,   // dimensionally consistent re-derivation (see notes)
};

struct OracleReport {
  double a = 0.0, b = 0.0;
  int j = 0;
  double zeta = 0.0;
  double k = 0.0;
  double omega_at_phi0 = 0.0;
  double G = 0.0;            // printed form of G(zeta_j)
  double G_corrected = 0.0;  // j dF0/du - 2 dK/du, u = zeta^2
  double c_j_paper_radical = 0.0;
  double c_j_sin_squared_radical = 0.0;
  double c_j_corrected = 0.0;
  double L_j = 0.0;  // common length of the tangent j-orbits
  std::string json() const;
};

// Solve 1/j = F(arcsin(zeta/b); k_zeta) / (2 K(k_zeta)) for zeta in (0,b).
CausticParam solve_zeta(double a, double b, int j);

// omega_j(phi) = arcsin(zeta / sqrt(b^2 + (a^2-b^2) sin^2 phi)).
double omega_of_phi(const CausticParam& cp, double a, double b, double phi);

// G(zeta_j) exactly as printed: quadrature term + (2j+2) d/du F(arcsin
// sqrt(u)/b; k_sqrt(u)) at u = zeta^2.
double G_of_zeta(const CausticParam& cp, double a, double b, int j);

// Corrected companion: j dF0/du - 2 dK/du (used by the corrected radicand).
double G_corrected(const CausticParam& cp, double a, double b, int j);

// Closed-form c_j by periodic quadrature; quad_n is the starting node count
// (doubled until the change is below 1e-10 relative). convergence_out, if
// non-null, receives the last refinement change.
double c_j_closed_form(double a, double b, int j, int quad_n,
                       RadicandVariant variant,
                       double* convergence_out = nullptr);

// Common length of the j-bounce Poncelet orbits tangent to C_zeta_j,
// measured dynamically from phi = 0.
double poncelet_length(double a, double b, int j);

OracleReport oracle_report(double a, double b, int j, int quad_n = 256);

}  // namespace bil
