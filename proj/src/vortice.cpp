#include "btb/vortice.hpp"

namespace btb {

void VorticeConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  if (max_iters == 0) throw ConfigError("max_iters must be positive");
  if (delta && !(*delta >= 0.0)) throw ConfigError("delta must be nonnegative");
  if (!(rfn.tau > 0.0)) throw ConfigError("RFN threshold tau must be positive");
}

namespace {

double resolve_delta(const VorticeConfig& cfg, const Image& y) {
  if (cfg.delta) return *cfg.delta;
  IterationConfig defaults;
  return defaults.delta_for(y);
}

}  // namespace

IterationTrace vortice_run(const Image& y, const VorticeConfig& cfg) {
  cfg.validate();
  const double delta = resolve_delta(cfg, y);
  IterationTrace trace;
  trace.iterates.push_back(y);
  for (;;) {
    const Image& x = trace.iterates.back();
    Image next = axpby(1.0, x, -cfg.alpha, rfn_operator_unchecked(x, cfg.rfn));
    if (record_step(trace, std::move(next), delta, cfg.max_iters)) break;
  }
  return trace;
}

IterationTrace speckle_focused_run(const Image& y, const VorticeConfig& cfg) {
  cfg.validate();
  const double delta = resolve_delta(cfg, y);
  IterationTrace trace;
  trace.iterates.push_back(y);
  Image accumulated(y.height(), y.width(), y.peak(), 0.0);
  for (;;) {
    const Image& x = trace.iterates.back();
    accumulated = axpby(1.0, rfn_operator_unchecked(x, cfg.rfn), 1.0, accumulated);
    const Image v = axpby(1.0, y, -cfg.beta, accumulated);
    Image next = relax(x, cfg.alpha, v);
    if (record_step(trace, std::move(next), delta, cfg.max_iters)) break;
  }
  return trace;
}

double speckle_level(const Image& x, const RfnConfig& rfn) {
  return l1_norm(rfn_operator_unchecked(x, rfn)) / static_cast<double>(x.size());
}

}  // namespace btb
