#include "betaplane/cutoff.hpp"

#include <cmath>

namespace betaplane::cutoff {

namespace {
double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = psi(t);
  const double b = psi(1.0 - t);
  return a / (a + b);
}

double phi(double x) {
  const double r = std::abs(x);
  if (r <= kPlateau) return 1.0;
  if (r >= kSupport) return 0.0;
  return smooth_step((kSupport - r) / (kSupport - kPlateau));
}

double phi_k(double x, int k) { return phi(std::ldexp(x, -k)) - phi(std::ldexp(x, 1 - k)); }

double phi_le(double x, int a) { return phi(std::ldexp(x, -a)); }

double phi_ge(double x, int a) { return 1.0 - phi(std::ldexp(x, 1 - a)); }

double phi_range(double x, int a, int b) { return phi(std::ldexp(x, -b)) - phi(std::ldexp(x, 1 - a)); }

double phi_jk(double x, int k, int j) { return j == min_j(k) ? phi_le(x, j) : phi_k(x, j); }

}  // namespace betaplane::cutoff
