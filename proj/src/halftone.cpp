#include "hvw/halftone.hpp"

#include <cmath>
#include <stdexcept>

namespace hvw {

double Kernel::weight_sum() const {
  double sum = 0.0;
  for (const Tap& t : taps) sum += t.weight;
  return sum;
}

void validate_kernel(const Kernel& kernel) {
  if (kernel.taps.empty()) throw std::invalid_argument("kernel '" + kernel.name + "' has no taps");
  for (const Tap& t : kernel.taps) {
    if (!(t.dr > 0 || (t.dr == 0 && t.dc > 0))) {
      throw std::invalid_argument("kernel '" + kernel.name + "' has a non-causal tap");
    }
  }
  if (std::abs(kernel.weight_sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("kernel '" + kernel.name + "' weights do not sum to 1");
  }
}

Kernel kernel_lookup(std::string_view name) {
  if (name == "steinberg") {
    return {"steinberg",
            {{0, 1, 7.0 / 16.0}, {1, -1, 3.0 / 16.0}, {1, 0, 5.0 / 16.0}, {1, 1, 1.0 / 16.0}}};
  }
  if (name == "jarvis") {
    constexpr double d = 48.0;
    return {"jarvis",
            {{0, 1, 7 / d},
             {0, 2, 5 / d},
             {1, -2, 3 / d},
             {1, -1, 5 / d},
             {1, 0, 7 / d},
             {1, 1, 5 / d},
             {1, 2, 3 / d},
             {2, -2, 1 / d},
             {2, -1, 3 / d},
             {2, 0, 5 / d},
             {2, 1, 3 / d},
             {2, 2, 1 / d}}};
  }
  throw std::invalid_argument("unknown kernel '" + std::string(name) +
                              "' (supported: steinberg, jarvis)");
}

DiffusionState::DiffusionState(Index rows, Index cols, Kernel kernel)
    : kernel_(std::move(kernel)), pending_(RealMap::Zero(rows, cols)) {
  validate_kernel(kernel_);
}

StepOutcome DiffusionState::step(double x, double du) {
  const double u = accumulated(x, du);
  const std::uint8_t bit = quantize(u);
  const double e = u - static_cast<double>(bit);
  const Index r = row();
  const Index c = col();
  double discarded = 0.0;
  for (const Tap& t : kernel_.taps) {
    const Index rr = r + t.dr;
    const Index cc = c + t.dc;
    if (rr < rows() && cc >= 0 && cc < cols()) {
      pending_(rr, cc) += t.weight * e;
    } else {
      discarded += t.weight;
    }
  }
  ++cursor_;
  return {bit, u, e, discarded};
}

BitImage error_diffuse(const GrayImage& image, const Kernel& kernel,
                       const std::optional<RealMap>& du) {
  if (du) require_same_shape(image, *du, "error_diffuse");
  DiffusionState state(image.rows(), image.cols(), kernel);
  Plane<std::uint8_t> out(image.rows(), image.cols());
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double delta = du ? (*du)(r, c) : 0.0;
      out(r, c) = state.step(static_cast<double>(image(r, c)), delta).bit;
    }
  }
  return BitImage(std::move(out));
}

}  // namespace hvw
