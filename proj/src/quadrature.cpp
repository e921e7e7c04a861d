#include "betaplane/quadrature.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>

namespace betaplane::quad {

namespace {

struct Rule {
  std::array<double, kNodesPerPanel> x{};
  std::array<double, kNodesPerPanel> w{};
  Rule() {
    using G = boost::math::quadrature::gauss<double, kNodesPerPanel>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    // Boost stores the nonnegative half of the symmetric rule.
    int i = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == 0.0) {
        x[i] = 0.0;
        w[i++] = b[k];
        continue;
      }
      x[i] = a[k];
      w[i++] = b[k];
      x[i] = -a[k];
      w[i++] = b[k];
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

}  // namespace

std::span<const double> gl_nodes() { return rule().x; }
std::span<const double> gl_weights() { return rule().w; }

}  // namespace betaplane::quad
