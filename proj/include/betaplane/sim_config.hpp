#pragma once

#include <cstdint>
#include <string>

#include "betaplane/grid.hpp"
#include "betaplane/kv_config.hpp"

namespace betaplane {

struct SimConfig {
  GridSpec grid;
  double dt = 0.05;
  double t_end = 20.0;
  /// Initial vorticity is scaled so that max |omega_0| equals this value.
  double amplitude = 1e-2;
  /// vortex-pair, random, wave-packet or gaussian-derivative.
  std::string ic_kind = "vortex-pair";
  double n_index = 4.0;
  double delta = 0.5e-4;
  int diag_stride = 10;
  bool linear_only = false;
  std::uint64_t seed = 1;

  // Shape parameters of the initial-condition families.
  double ic_scale = 2.0;  // Gaussian width (vortex-pair, gaussian-derivative)
  int ic_order = 0;       // |xi|^(2 ic_order) factor (gaussian-derivative)
  int ic_aniso = 0;       // extra (i xi1)^ic_aniso factor (gaussian-derivative)
  int ic_k = 0;           // frequency level (random, wave-packet)
  int ic_j = 2;           // spatial level (random, wave-packet)

  /// Throws ConfigurationError on any violated invariant.
  void validate() const;

  /// Reads the SimConfig keys present in kv; the others keep the values of base.
  /// Does not call kv.finish().
  static SimConfig from_kv(KvConfig& kv, const SimConfig& base);
  static SimConfig from_kv(KvConfig& kv) { return from_kv(kv, SimConfig{}); }
  /// "key = value" lines that reproduce this config.
  std::string to_kv() const;
};

}  // namespace betaplane
