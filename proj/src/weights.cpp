#include "hvw/weights.hpp"

#include <stdexcept>
#include <string>

namespace hvw {

namespace {

void require_mask_window(int window, const char* what) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument(std::string(what) + ": window must be odd and >= 3");
  }
}

}  // namespace

RealMap local_variance(const GrayImage& image, int window) {
  return local_variance(image.pixels(), window);
}

RealMap local_variance(const BitImage& image, int window) {
  return local_variance(image.pixels(), window);
}

WeightMap nvf_map(const GrayImage& image, const NvfParams& params) {
  require_mask_window(params.window, "nvf_map");
  if (!(params.d > 0.0)) throw std::invalid_argument("nvf_map: D must be > 0");
  const RealMap var = local_variance(image, params.window);
  const double max_var = var.maxCoeff();
  if (max_var <= 0.0) return {RealMap::Ones(image.rows(), image.cols()), true};
  const double theta = params.d / max_var;
  return {(1.0 + theta * var).inverse(), false};
}

WeightMap importance_map(const BitImage& w, const IfParams& params) {
  require_mask_window(params.window, "importance_map");
  const RealMap var = local_variance(w, params.window);
  const double max_var = var.maxCoeff();
  if (max_var <= 0.0) return {RealMap::Ones(w.rows(), w.cols()), true};
  return {1.0 + var / max_var, false};
}

}  // namespace hvw
