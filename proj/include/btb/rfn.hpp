#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "btb/image.hpp"

namespace btb {

/// Receptive-field normalization window. A 1D kernel runs along image rows
/// (a 1D signal is a 1 x n image); a 2D kernel covers a side x side block.
class RfnKernel {
 public:
  static RfnKernel one_d(std::vector<double> weights);
  static RfnKernel two_d(std::size_t side, std::vector<double> weights);
  /// 2D kernel equal to the outer product of `profile` with itself.
  static RfnKernel separable(std::vector<double> profile);

  int dims() const noexcept { return dims_; }
  std::size_t side() const noexcept { return side_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& profile() const noexcept { return profile_; }

 private:
  RfnKernel(int dims, std::size_t side, std::vector<double> weights, std::vector<double> profile);

  int dims_;
  std::size_t side_;
  std::vector<double> weights_;
  std::vector<double> profile_;  // 1D kernels and separable 2D kernels
};

enum class RfnAxiom { OddSide, Positivity, Symmetry, CenterMaximum, FiniteWeight };

struct RfnViolation {
  RfnAxiom axiom;
  std::vector<std::size_t> index;  // offending position (1 or 2 coordinates)
  std::string message;
};

/// Empty result iff the kernel satisfies every axiom.
std::vector<RfnViolation> validate_rfn_kernel(const RfnKernel& k);

/// Truncated Gaussian window, std = side / 4, normalized to unit sum.
RfnKernel make_gaussian_rfn_kernel(std::size_t side, int dims);
/// Rectangular window with weights 1 / side^dims.
RfnKernel make_rect_rfn_kernel(std::size_t side, int dims);
/// "gaussian:15" or "rect:7".
RfnKernel parse_rfn_window(std::string_view spec, int dims);

struct RfnConfig {
  RfnKernel kernel = make_gaussian_rfn_kernel(15, 2);
  double tau = 0.25;
  bool signed_variant = false;
};

/// sqrt(h * v^2), symmetric padding.
Image rfn_local_energy(const Image& v, const RfnKernel& k);

/// v / clip(sigma_v), clip(s) = s if s >= tau else 1.
Image rfn_normalize(const Image& v, const RfnConfig& cfg);

/// (v_normalized - 1) .* v, or (v_normalized - sign(v)) .* v for the signed
/// variant. The unsigned form rejects negative input.
Image rfn_operator(const Image& v, const RfnConfig& cfg);

/// rfn_operator without the nonnegativity check; the despeckling loops apply
/// the unsigned formula to iterates that may dip below zero.
Image rfn_operator_unchecked(const Image& v, const RfnConfig& cfg);

/// |v_normalized - 1|, the speckle-pattern visualization.
Image rfn_visualization(const Image& v, const RfnConfig& cfg);

}  // namespace btb
