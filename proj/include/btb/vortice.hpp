#pragma once

#include <optional>

#include "btb/iteration.hpp"
#include "btb/rfn.hpp"

namespace btb {

struct VorticeConfig {
  RfnConfig rfn;
  double alpha = 0.4;
  double beta = 0.4;  // accumulator scale, speckle-focused loop only
  /// Unset means 1e-3 * sqrt(n) * peak / 255, as for the denoising loop.
  std::optional<double> delta;
  std::size_t max_iters = 5;

  void validate() const;
};

/// x_{t+1} = x_t - alpha g(x_t), starting from x_0 = y.
IterationTrace vortice_run(const Image& y, const VorticeConfig& cfg);

/// Speckle-focused variant that keeps returning to the observation:
///   z_{t+1} = g(x_t) + z_t,  v_{t+1} = y - beta z_{t+1},
///   x_{t+1} = (1 - alpha) x_t + alpha v_{t+1},  z_0 = 0.
IterationTrace speckle_focused_run(const Image& y, const VorticeConfig& cfg);

/// ||g(x)||_1 / n.
double speckle_level(const Image& x, const RfnConfig& rfn);

}  // namespace btb
