#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "betaplane/vec2.hpp"

namespace betaplane::resonance {

inline constexpr double kGuard = 1e-9;

struct FreqPair {
  Vec2 xi;
  Vec2 eta;
};

/// Throws SingularConfigurationError when |xi|, |eta| or |xi - eta| < guard.
void check_pair(const FreqPair& p);

/// Dispersion relation L(x) = x1 / |x|^2 and its gradient.
double dispersion(Vec2 x);
Vec2 dispersion_gradient(Vec2 x);

/// Phi = L(xi) - L(xi - eta) - L(eta).
double phase(const FreqPair& p);
Vec2 grad_xi(const FreqPair& p);
Vec2 grad_eta(const FreqPair& p);
/// |eta||eta - 2 xi| / (|xi - eta|^2 |xi|^2)
double grad_xi_magnitude(const FreqPair& p);
/// |xi||xi - 2 eta| / (|xi - eta|^2 |eta|^2)
double grad_eta_magnitude(const FreqPair& p);

/// xi . eta^perp / |eta|^2
double symbol_orig(const FreqPair& p);
/// (1/2)(xi . eta^perp)(xi . (xi - 2 eta)) / (|eta|^2 |xi - eta|^2)
double symbol_sym(const FreqPair& p);

/// Entry (a, b) = d^2 Phi / d xi_a d eta_b, central differences of the
/// analytic eta-gradient in xi with relative step rel_step.
struct Mat2 {
  double a[2][2]{};
};
Mat2 mixed_hessian(const FreqPair& p, double rel_step = 1e-6);

struct ResonanceDiagnostics {
  FreqPair pair;
  double phi = 0.0;
  Vec2 grad_xi;
  Vec2 grad_eta;
  double m_orig = 0.0;
  double m_sym = 0.0;
  double gamma = 0.0;
  double theta = 0.0;
  double upsilon = 0.0;
  double identity_residual = 0.0;
};

/// Curvature quantities: Upsilon = v_xi^T H v_eta with v = grad^perp Phi / |grad Phi|,
/// Gamma = Upsilon |xi - eta|^8 |grad_xi Phi||grad_eta Phi|, Theta = Phi |xi - eta|^2,
/// residual = |Gamma / 2 - 2 Theta - 3 (xi1 - eta1)|. Also guards |xi - 2 eta|
/// and |eta - 2 xi|.
ResonanceDiagnostics curvature(const FreqPair& p);

/// Worst relative error of the analytic gradients against fourth-order
/// central differences of phase() and against the closed-form magnitudes.
/// The step is rel_step times the distance to the nearest singularity.
double grad_check(const FreqPair& p, double rel_step = 1e-3);

using PairSymbol = std::function<double(const FreqPair&)>;

struct NullScan {
  std::vector<double> eps;
  std::vector<double> sup_values;
  double slope = 0.0;
  double r2 = 0.0;
  bool degenerate = false;
};

/// For each eps, sup over 16 directions (the given one rotated by multiples
/// of pi/8) of |symbol(2 eta + eps d, eta)|; fits log sup against log eps.
/// eps values must lie in (0, 0.1] and span at least two decades.
NullScan null_order_scan(const PairSymbol& symbol, Vec2 eta, Vec2 direction, std::span<const double> eps);

/// |grad_eta Phi| seen as a function of the pair, for order scans.
double grad_eta_norm(const FreqPair& p);

/// Uniform random pairs in [-box, box]^4 rejecting anything within `margin`
/// of the singular sets (including xi = 2 eta and eta = 2 xi).
std::vector<FreqPair> sample_pairs(std::size_t count, double box, double margin, std::uint64_t seed);

void write_scan(const std::filesystem::path& path, const std::vector<ResonanceDiagnostics>& rows);

}  // namespace betaplane::resonance
