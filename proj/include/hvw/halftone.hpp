#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hvw/image.hpp"

namespace hvw {

/// One causal error-diffusion tap: error goes to (row + dr, col + dc).
struct Tap {
  int dr;
  int dc;
  double weight;
};

/// Error-diffusion kernel. Taps are strictly causal in raster order and sum to 1.
struct Kernel {
  std::string name;
  std::vector<Tap> taps;

  double weight_sum() const;
};

/// Throws std::invalid_argument if a tap is non-causal or the weights do not sum to 1.
void validate_kernel(const Kernel& kernel);

/// "steinberg" (Floyd-Steinberg, /16) or "jarvis" (Jarvis-Judice-Ninke, /48).
Kernel kernel_lookup(std::string_view name);

/// Threshold quantizer; ties at 128 go white.
inline std::uint8_t quantize(double u) { return u >= 128.0 ? kWhite : kBlack; }

/// What one diffusion step did; used by tests to check error bookkeeping.
struct StepOutcome {
  std::uint8_t bit;
  double u;
  double error;
  /// Total kernel weight whose taps fell outside the image.
  double discarded_weight;
};

/// Pending-error buffer plus raster cursor for a single error-diffusion pass.
///
/// Pixels are visited strictly in raster order. `accumulated()` is a pure trial
/// evaluation at the cursor; only `step()` mutates state, so embedders can
/// probe any number of perturbations before committing one.
class DiffusionState {
 public:
  DiffusionState(Index rows, Index cols, Kernel kernel);

  Index rows() const { return pending_.rows(); }
  Index cols() const { return pending_.cols(); }
  Index row() const { return cursor_ / cols(); }
  Index col() const { return cursor_ % cols(); }
  bool done() const { return cursor_ >= pending_.size(); }

  /// u = (x + du) + pending error at the cursor. Every caller uses this exact
  /// association so trial and committed quantizations agree bit for bit.
  double accumulated(double x, double du = 0.0) const {
    return (x + du) + pending_.data()[cursor_];
  }

  double pending_at_cursor() const { return pending_.data()[cursor_]; }
  const RealMap& pending() const { return pending_; }
  const Kernel& kernel() const { return kernel_; }

  /// Quantize the cursor pixel, diffuse its error, advance.
  StepOutcome step(double x, double du = 0.0);

 private:
  Kernel kernel_;
  RealMap pending_;
  Index cursor_ = 0;
};

/// Regular error diffusion of `image + du` (du optional), raster order, no clamping.
BitImage error_diffuse(const GrayImage& image, const Kernel& kernel,
                       const std::optional<RealMap>& du = std::nullopt);

}  // namespace hvw
