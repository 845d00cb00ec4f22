#pragma once
#include <functional>
#include <vector>

namespace bil {

// Gauss-Legendre nodes/weights on [-1,1]; cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Integrate f over [a,b] with a single Gauss-Legendre panel.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int order = 16);

// Periodic trapezoid rule on [0, period) with n nodes.
double periodic_trapezoid(const std::function<double(double)>& f, double period,
                          int n);

}  // namespace bil
