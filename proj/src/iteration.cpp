#include "btb/iteration.hpp"

#include <cmath>

#include "btb/random.hpp"

namespace btb {

UpdateMode parse_update_mode(std::string_view text) {
  if (text == "successive") return UpdateMode::Successive;
  if (text == "simple") return UpdateMode::Simple;
  if (text == "anchored") return UpdateMode::Anchored;
  if (text == "langevin") return UpdateMode::Langevin;
  throw ConfigError("unknown update mode '" + std::string(text) + "'");
}

std::string_view to_string(UpdateMode mode) {
  switch (mode) {
    case UpdateMode::Successive:
      return "successive";
    case UpdateMode::Simple:
      return "simple";
    case UpdateMode::Anchored:
      return "anchored";
    case UpdateMode::Langevin:
      return "langevin";
  }
  return "?";
}

std::string_view to_string(StopReason reason) { return reason == StopReason::Delta ? "delta" : "max_iters"; }

StepSchedule::StepSchedule(double constant) : values_{constant} {}

StepSchedule::StepSchedule(std::vector<double> per_iteration) : values_(std::move(per_iteration)) {
  if (values_.empty()) throw ConfigError("step schedule must not be empty");
}

double StepSchedule::at(std::size_t t) const { return values_[std::min(t, values_.size() - 1)]; }

void IterationConfig::validate() const {
  if (max_iters == 0) throw ConfigError("max_iters must be positive");
  for (double m : mu.values()) {
    if (!(m > 0.0 && m <= 1.0)) throw ConfigError("step sizes must lie in (0, 1]");
  }
  if (!(beta >= 0.0)) throw ConfigError("langevin beta must be nonnegative");
  if (delta && !(*delta >= 0.0)) throw ConfigError("delta must be nonnegative");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
}

double IterationConfig::delta_for(const Image& y) const {
  if (delta) return *delta;
  return 1e-3 * std::sqrt(static_cast<double>(y.size())) * y.peak() / 255.0;
}

bool record_step(IterationTrace& trace, Image next, double delta, std::size_t max_iters) {
  const double step = l2_distance(next, trace.iterates.back());
  trace.iterates.push_back(std::move(next));
  trace.step_norms.push_back(step);
  ++trace.iters_run;
  // A zero step is an exact fixed point; stop even when delta is 0.
  if (step < delta || step == 0.0) {
    trace.stopped_by = StopReason::Delta;
    return true;
  }
  if (trace.iters_run >= max_iters) {
    trace.stopped_by = StopReason::MaxIters;
    return true;
  }
  return false;
}

IterationTrace btb_run(const Image& y, const DenoiserEngine& f, const IterationConfig& cfg) {
  cfg.validate();
  const double delta = cfg.delta_for(y);
  IterationTrace trace;
  trace.iterates.push_back(y);
  for (std::size_t t = 0;; ++t) {
    const Image& x = trace.iterates.back();
    const Image fx = f.denoise(x);
    if (!fx.same_shape(x)) throw ShapeError("denoiser changed the image shape");
    const double mu = cfg.mode == UpdateMode::Successive ? 1.0 : cfg.mu.at(t);
    Image next;
    switch (cfg.mode) {
      case UpdateMode::Successive:
        next = fx;
        break;
      // (1 - mu) a + mu b evaluated as a + mu (b - a) so fixed points stay exact.
      case UpdateMode::Simple:
        next = relax(x, mu, fx);
        break;
      case UpdateMode::Anchored:
        next = relax(y, mu, fx);
        break;
      case UpdateMode::Langevin:
        next = relax(x, mu, fx);
        if (cfg.beta > 0.0) {
          const auto tag = static_cast<std::uint32_t>(StreamTag::Langevin) + static_cast<std::uint32_t>(t);
          auto px = next.pixels();
          for (std::size_t i = 0; i < px.size(); ++i) {
            RandomStream rng(cfg.seed, tag, static_cast<std::uint32_t>(i));
            px[i] += cfg.beta * rng.normal();
          }
        }
        break;
    }
    next.set_peak(y.peak());
    if (record_step(trace, std::move(next), delta, cfg.max_iters)) break;
  }
  return trace;
}

bool check_epsilon_fixed(const Image& x, const DenoiserEngine& f, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  return l2_distance(x, f.denoise(x)) <= epsilon;
}

}  // namespace btb
