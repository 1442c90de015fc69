#pragma once

#include "hvw/image.hpp"
#include "hvw/local_stats.hpp"

namespace hvw {

struct NvfParams {
  int window = 3;
  double d = 75.0;
};

struct IfParams {
  int window = 3;
};

/// A weight map plus a flag set when the input had no local variance anywhere,
/// in which case `map` is all ones.
struct WeightMap {
  RealMap map;
  bool degenerate = false;
};

RealMap local_variance(const GrayImage& image, int window);
RealMap local_variance(const BitImage& image, int window);

/// Noise visibility: v = 1 / (1 + theta * var), theta = D / max(var). In (0, 1].
WeightMap nvf_map(const GrayImage& image, const NvfParams& params = {});

/// Importance factor: gamma = 1 + var / max(var). In [1, 2].
WeightMap importance_map(const BitImage& w, const IfParams& params = {});

}  // namespace hvw
