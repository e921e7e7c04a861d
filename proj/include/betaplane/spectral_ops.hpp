#pragma once

#include <functional>

#include "betaplane/spectral_field.hpp"

namespace betaplane::spectral {

using Symbol = std::function<Complex(Vec2)>;

/// coeff(xi) -> symbol(xi) * coeff(xi) on every mode.
///
/// Throws PreconditionError naming the mode when the symbol is not finite at
/// a retained mode whose coefficient is nonzero. Non-finite values elsewhere
/// map the mode to zero.
SpectralField apply_multiplier(const SpectralField& g, const Symbol& symbol);

/// Zeroes every mode outside the dealiasing box.
SpectralField dealias(const SpectralField& g);

/// u = grad^perp (-Laplacian)^-1 omega, i.e. u^(xi) = i(-xi2, xi1)|xi|^-2 omega^(xi).
/// Requires a mean-zero omega.
VelocityField biot_savart(const SpectralField& omega);

/// Left inverse of biot_savart on mean-zero fields: omega = d2 u1 - d1 u2.
SpectralField curl(const VelocityField& u);
SpectralField divergence(const VelocityField& u);
SpectralField partial(const SpectralField& g, int axis);

/// Multiplier of L1 = d_x / Laplacian, i.e. -i xi1/|xi|^2 (zero at xi = 0).
Complex l1_symbol(Vec2 xi);
/// exp(t L1) applied mode by mode. Requires a mean-zero g.
SpectralField l1_semigroup(const SpectralField& g, double t);

/// Dealiased spectral representation of -u.grad(omega), u = biot_savart(omega).
/// The input is truncated to the dealiasing box before the products are
/// formed so that the quadratic term carries no aliasing error.
SpectralField transport_nonlinearity(const SpectralField& omega);

/// Spectral L2 norm and inner product under the fixed normalization.
double l2_norm(const SpectralField& g);
double inner_product(const SpectralField& a, const SpectralField& b);
double l2_norm(const VelocityField& u);
/// Grid L2 norm sqrt(dx^2 * sum g^2).
double l2_norm(const PhysicalField& g);
double linf_norm(const PhysicalField& g);
double l1_norm(const PhysicalField& g);
double linf_norm(const SpectralField& g);

/// max over the grid of |u(x)|.
double max_speed(const VelocityField& u);
/// max over the grid and all index pairs of |d_a u_b|.
double linf_velocity_gradient(const VelocityField& u);

/// Fraction of the L2 mass of g lying outside the centered box
/// |x_i - l/2| < l/4 (the central half of each axis).
double tail_mass(const PhysicalField& g);

/// Evaluates the Fourier series of g at an arbitrary point x by direct
/// summation over the nonzero modes.
double evaluate_at(const SpectralField& g, Vec2 x);

void require_mean_zero(const SpectralField& g, const char* op);

}  // namespace betaplane::spectral
