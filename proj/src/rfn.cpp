#include "btb/rfn.hpp"

#include <algorithm>
#include <cmath>

#include "btb/convolve.hpp"
#include "btb/simd.hpp"

namespace btb {
namespace {

void require_valid(const RfnConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw ConfigError("RFN threshold tau must be positive");
  const auto violations = validate_rfn_kernel(cfg.kernel);
  if (!violations.empty()) throw ConfigError("invalid RFN kernel: " + violations.front().message);
}

std::string position(const std::vector<std::size_t>& idx) {
  std::string s = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + "]";
}

// Weight sums within rounding of 1 count as exactly 1, so that the energy of a
// constant signal c is exactly c^2 under a normalized window.
double effective_total(const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  return std::fabs(total - 1.0) <= 1e-12 ? 1.0 : total;
}

Image energy_sq(const Image& v, const RfnKernel& k) {
  Image sq = v;
  for (double& x : sq.pixels()) x *= x;
  if (k.dims() == 1) return centered_convolve_rows(sq, k.profile(), effective_total(k.profile()));
  if (!k.profile().empty()) {
    const double t = effective_total(k.profile());
    return centered_convolve_cols(centered_convolve_rows(sq, k.profile(), t), k.profile(), t);
  }
  return centered_convolve2d(sq, Kernel2D(k.side(), k.weights()), effective_total(k.weights()));
}

std::vector<double> normalized_gaussian(std::size_t side) {
  const double sigma = static_cast<double>(side) / 4.0;
  const auto radius = static_cast<std::ptrdiff_t>(side / 2);
  std::vector<double> p(side);
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i) / sigma;
    p[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * x * x);
  }
  for (double w : p) total += w;
  for (double& w : p) w /= total;
  return p;
}

}  // namespace

RfnKernel::RfnKernel(int dims, std::size_t side, std::vector<double> weights, std::vector<double> profile)
    : dims_(dims), side_(side), weights_(std::move(weights)), profile_(std::move(profile)) {}

RfnKernel RfnKernel::one_d(std::vector<double> weights) {
  const std::size_t side = weights.size();
  if (side == 0) throw ConfigError("RFN kernel must have at least one weight");
  std::vector<double> profile = weights;
  return RfnKernel(1, side, std::move(weights), std::move(profile));
}

RfnKernel RfnKernel::two_d(std::size_t side, std::vector<double> weights) {
  if (side == 0 || weights.size() != side * side) throw ConfigError("2D RFN kernel needs side*side weights");
  return RfnKernel(2, side, std::move(weights), {});
}

RfnKernel RfnKernel::separable(std::vector<double> profile) {
  const std::size_t side = profile.size();
  if (side == 0) throw ConfigError("RFN kernel must have at least one weight");
  std::vector<double> w(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) w[i * side + j] = profile[i] * profile[j];
  }
  return RfnKernel(2, side, std::move(w), std::move(profile));
}

std::vector<RfnViolation> validate_rfn_kernel(const RfnKernel& k) {
  std::vector<RfnViolation> out;
  const std::size_t side = k.side();
  if (side % 2 == 0) {
    out.push_back({RfnAxiom::OddSide, {side}, "kernel side " + std::to_string(side) + " is not odd"});
    return out;
  }
  const auto& w = k.weights();
  auto coords = [&](std::size_t flat) -> std::vector<std::size_t> {
    if (k.dims() == 1) return {flat};
    return {flat / side, flat % side};
  };
  const std::size_t n = w.size();
  const std::size_t center = n / 2;  // odd side => flat center index in both layouts

  double total = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(w[i])) {
      finite = false;
      out.push_back({RfnAxiom::FiniteWeight, coords(i), "weight at " + position(coords(i)) + " is not finite"});
    } else {
      total += w[i];
    }
  }
  if (finite && !std::isfinite(total)) out.push_back({RfnAxiom::FiniteWeight, {}, "total weight is not finite"});

  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] < 0.0) {
      out.push_back({RfnAxiom::Positivity, coords(i), "negative weight at " + position(coords(i))});
    }
  }
  double max_abs = 0.0;
  for (double v : w) {
    if (std::isfinite(v)) max_abs = std::max(max_abs, std::fabs(v));
  }
  const double tol = 1e-12 * max_abs;
  // Index negation maps flat index i to n - 1 - i for both layouts.
  for (std::size_t i = 0; i < center; ++i) {
    if (std::fabs(w[i] - w[n - 1 - i]) > tol) {
      out.push_back({RfnAxiom::Symmetry, coords(i),
                     "weights at " + position(coords(i)) + " and " + position(coords(n - 1 - i)) + " differ"});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != center && w[i] > w[center]) {
      out.push_back({RfnAxiom::CenterMaximum, coords(i), "weight at " + position(coords(i)) + " exceeds the center"});
    }
  }
  return out;
}

RfnKernel make_gaussian_rfn_kernel(std::size_t side, int dims) {
  if (side == 0 || side % 2 == 0) throw ConfigError("RFN window length must be odd and positive");
  if (dims != 1 && dims != 2) throw ConfigError("RFN kernel dims must be 1 or 2");
  std::vector<double> p = normalized_gaussian(side);
  return dims == 1 ? RfnKernel::one_d(std::move(p)) : RfnKernel::separable(std::move(p));
}

RfnKernel make_rect_rfn_kernel(std::size_t side, int dims) {
  if (side == 0 || side % 2 == 0) throw ConfigError("RFN window length must be odd and positive");
  if (dims != 1 && dims != 2) throw ConfigError("RFN kernel dims must be 1 or 2");
  std::vector<double> p(side, 1.0 / static_cast<double>(side));
  return dims == 1 ? RfnKernel::one_d(std::move(p)) : RfnKernel::separable(std::move(p));
}

RfnKernel parse_rfn_window(std::string_view spec, int dims) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ConfigError("window spec must look like gaussian:15 or rect:15");
  const std::string shape(spec.substr(0, colon));
  const std::string len(spec.substr(colon + 1));
  std::size_t side = 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(len, &used);
    if (used != len.size() || v <= 0) throw std::invalid_argument("bad");
    side = static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("bad window length '" + len + "'");
  }
  if (shape == "gaussian") return make_gaussian_rfn_kernel(side, dims);
  if (shape == "rect") return make_rect_rfn_kernel(side, dims);
  throw ConfigError("unknown window shape '" + shape + "'");
}

Image rfn_local_energy(const Image& v, const RfnKernel& k) {
  if (!validate_rfn_kernel(k).empty()) throw ConfigError("invalid RFN kernel");
  Image e = energy_sq(v, k);
  for (double& x : e.pixels()) x = std::sqrt(std::max(x, 0.0));
  return e;
}

Image rfn_normalize(const Image& v, const RfnConfig& cfg) {
  require_valid(cfg);
  const Image e = energy_sq(v, cfg.kernel);
  Image out(v.height(), v.width(), v.peak());
  simd::active().rfn_normalize(v.pixels().data(), e.pixels().data(), cfg.tau, out.pixels().data(), v.size());
  return out;
}

Image rfn_operator_unchecked(const Image& v, const RfnConfig& cfg) {
  require_valid(cfg);
  const Image e = energy_sq(v, cfg.kernel);
  Image out(v.height(), v.width(), v.peak());
  simd::active().rfn_response(v.pixels().data(), e.pixels().data(), cfg.tau, cfg.signed_variant,
                              out.pixels().data(), v.size());
  return out;
}

Image rfn_operator(const Image& v, const RfnConfig& cfg) {
  if (!cfg.signed_variant) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v.pixels()[i] < 0.0) {
        throw DomainError("unsigned RFN operator needs nonnegative input (pixel " + std::to_string(i) + ")");
      }
    }
  }
  return rfn_operator_unchecked(v, cfg);
}

Image rfn_visualization(const Image& v, const RfnConfig& cfg) {
  Image out = rfn_normalize(v, cfg);
  for (double& x : out.pixels()) x = std::fabs(x - 1.0);
  return out;
}

}  // namespace btb
