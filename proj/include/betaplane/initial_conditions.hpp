#pragma once

#include "betaplane/sim_config.hpp"
#include "betaplane/spectral_field.hpp"

namespace betaplane {

/// Mean-zero initial vorticity centered on the torus, normalized to
/// max |omega_0| = config.amplitude. Families:
///  vortex-pair          two opposite Gaussians of width ic_scale, offset +-ic_scale along x1
///  random               seeded white noise projected to P_ic_k, times a Gaussian envelope of width 2^ic_j
///  wave-packet          cos(2^ic_k x1) times a Gaussian envelope of width 2^ic_j
///  gaussian-derivative  omega^ ~ (i xi1)^ic_aniso |xi|^(2 ic_order) exp(-ic_scale^2 |xi|^2 / 2)
SpectralField make_initial_condition(const SimConfig& config);

/// Multiplies the coefficients by exp(-i c.xi), moving a field concentrated
/// at the origin to the point c.
SpectralField translate(const SpectralField& g, Vec2 c);

}  // namespace betaplane
