#pragma once

#include <span>

namespace betaplane {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares line y = slope * x + intercept. Needs at least two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// Fit of log y against log x; points with y <= 0 are skipped.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace betaplane
