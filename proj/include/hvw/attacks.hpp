#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hvw/image.hpp"

namespace hvw {

struct Rect {
  Index row = 0;
  Index col = 0;
  Index height = 0;
  Index width = 0;
};

/// Parameters of the simulated print-and-scan channel. Defaults are neutral.
struct ChannelParams {
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;
  double rotate_degrees = 0.0;
  double scale = 1.0;
  int rebinarize_threshold = 128;
  std::uint64_t rng_seed = 0;
};

/// Reads `key = value` lines (keys as the field names; '#' starts a comment)
/// over `base`. Unknown keys are an error.
ChannelParams parse_channel_params(std::string_view text, ChannelParams base = {});

void validate(const ChannelParams& params);

/// Pixels inside `rect` replaced by `fill`.
BitImage crop_attack(const BitImage& y, const Rect& rect, std::uint8_t fill);

/// `count` black discs of `radius` at seeded pseudo-random centers.
BitImage mark_attack(const BitImage& y, int count, int radius, std::uint64_t seed);

/// blur -> additive gaussian noise -> rotate (bilinear) -> scale and back -> binarize.
BitImage print_scan_sim(const BitImage& y, const ChannelParams& params);

}  // namespace hvw
