#pragma once

namespace bil {

// Carlson symmetric integral R_F(x,y,z) by duplication; relative error
// ~1e-15 for non-negative arguments with at most one zero.
double carlson_rf(double x, double y, double z);

// Incomplete elliptic integral of the first kind F(s;k) = int_0^s
// dtau/sqrt(1-k^2 sin^2 tau), any real s, 0 <= k < 1.
double elliptic_F(double s, double k);

// Complete integral K(k) = F(pi/2;k).
double elliptic_K(double k);

}  // namespace bil
