#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace bil {

static GaussRule make_rule(int order) {
  // Newton iteration on Legendre polynomials; standard Golub-Welsch-free
  // construction, accurate to machine precision for moderate orders.
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int order) {
  const GaussRule& r = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < order; ++i)
    acc += r.weights[i] * f(mid + half * r.nodes[i]);
  return acc * half;
}

double periodic_trapezoid(const std::function<double(double)>& f, double period,
                          int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f(period * i / n);
  return acc * period / n;
}

}  // namespace bil
