#include "betaplane/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "betaplane/errors.hpp"

namespace betaplane {

void GridSpec::validate() const {
  if (n < 16 || (n & (n - 1)) != 0) {
    throw ConfigurationError("grid: n must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw ConfigurationError("grid: torus length l must be positive and finite");
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw ConfigurationError("grid: dealias_fraction must lie in (0, 1]");
  }
}

int GridSpec::max_retained() const {
  // Small epsilon so that fraction 1 keeps n/2 - 1 and 2/3 keeps floor(n/3).
  const int m = static_cast<int>(std::floor(dealias_fraction * (n / 2) + 1e-12));
  return m < n / 2 ? m : n / 2 - 1;
}

bool GridSpec::retained(int i, int j) const {
  const int m = max_retained();
  return std::abs(wavenumber(i)) <= m && std::abs(wavenumber(j)) <= m;
}

}  // namespace betaplane
