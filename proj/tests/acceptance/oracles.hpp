#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "hvw/embed.hpp"
#include "hvw/image.hpp"

namespace oracle {

using hvw::BitImage;
using hvw::GrayImage;
using hvw::Plane;
using hvw::RealMap;

/// Floyd-Steinberg error diffusion of x + du, coded from scratch.
Plane<std::uint8_t> steinberg(const GrayImage& x, const RealMap& du);

/// DEED with the L-2 cost and XNOR decoding, all four toggle options enumerated.
/// Ties resolve to the option listed first: none, toggle y2, toggle y1, both.
std::pair<Plane<std::uint8_t>, Plane<std::uint8_t>> deed_xnor(const GrayImage& x1,
                                                               const GrayImage& x2,
                                                               const BitImage& w, double lambda);

struct OptimalityReport {
  long pixels = 0;
  long optimal = 0;
  long outside_candidates = 0;
};

/// Replays the committed perturbations with a private Floyd-Steinberg state and,
/// at each pixel, re-evaluates every admissible candidate of the relaxed problem.
OptimalityReport check_optimality(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                                  const hvw::EmbedConfig& cfg, const hvw::EmbedResult& result);

/// Population variance over the truncated window, by direct summation.
RealMap window_variance(const Plane<std::uint8_t>& img, int window);

}  // namespace oracle
