#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btb/denoiser.hpp"
#include "btb/image.hpp"

namespace btb {

enum class UpdateMode { Successive, Simple, Anchored, Langevin };

UpdateMode parse_update_mode(std::string_view text);
std::string_view to_string(UpdateMode mode);

/// Step sizes: a single constant, or one value per iteration (the last value
/// repeats once the list runs out).
class StepSchedule {
 public:
  StepSchedule(double constant = 0.8);  // NOLINT: implicit from a number
  StepSchedule(std::vector<double> per_iteration);
  double at(std::size_t t) const;
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct IterationConfig {
  UpdateMode mode = UpdateMode::Simple;
  StepSchedule mu{0.8};
  double beta = 0.0;
  /// Unset means the scale-aware default 1e-3 * sqrt(n) * peak / 255.
  std::optional<double> delta;
  std::size_t max_iters = 40;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  double delta_for(const Image& y) const;
};

enum class StopReason { Delta, MaxIters };

std::string_view to_string(StopReason reason);

struct IterationTrace {
  std::vector<Image> iterates;    // x_0 ... x_final
  std::vector<double> step_norms; // ||x_{t+1} - x_t||_2, one per iteration
  StopReason stopped_by = StopReason::MaxIters;
  std::size_t iters_run = 0;

  const Image& final_image() const { return iterates.back(); }
};

/// Runs the fixed-point denoising loop from x_0 = y:
///   successive  x_{t+1} = f(x_t)
///   simple      x_{t+1} = (1 - mu_t) x_t + mu_t f(x_t)
///   anchored    x_{t+1} = (1 - mu_t) y + mu_t f(x_t)
///   langevin    simple + beta e_t, e_t ~ N(0, I)
/// Stops after max_iters or as soon as a step is shorter than delta.
IterationTrace btb_run(const Image& y, const DenoiserEngine& f, const IterationConfig& cfg);

/// ||x - f(x)||_2 <= epsilon.
bool check_epsilon_fixed(const Image& x, const DenoiserEngine& f, double epsilon);

/// Records one more step in `trace` and reports whether the loop should stop.
bool record_step(IterationTrace& trace, Image next, double delta, std::size_t max_iters);

}  // namespace btb
