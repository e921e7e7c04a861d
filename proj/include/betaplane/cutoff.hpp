#pragma once

namespace betaplane::cutoff {

inline constexpr double kPlateau = 5.0 / 4.0;
inline constexpr double kSupport = 8.0 / 5.0;

/// Smooth step built from exp(-1/t): 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

/// Even bump: 1 on [-5/4, 5/4], 0 outside (-8/5, 8/5), monotone in between.
double phi(double x);

/// phi_k(x) = phi(2^-k x) - phi(2^(-k+1) x), the dyadic shell |x| ~ 2^k.
double phi_k(double x, int k);
/// phi(2^-a x)
double phi_le(double x, int a);
/// 1 - phi(2^(1-a) x)
double phi_ge(double x, int a);
/// phi(2^-b x) - phi(2^(1-a) x), i.e. the sum of phi_k over a <= k <= b.
double phi_range(double x, int a, int b);

/// Spatial cutoff attached to the atom (k, j): the ball phi_{<= j} at the
/// smallest admissible j = max(0, -k), the shell phi_j above it.
double phi_jk(double x, int k, int j);

/// Smallest admissible spatial index for frequency level k.
inline int min_j(int k) { return k < 0 ? -k : 0; }

}  // namespace betaplane::cutoff
