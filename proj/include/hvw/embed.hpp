#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hvw/analysis.hpp"
#include "hvw/halftone.hpp"
#include "hvw/image.hpp"

namespace hvw {

/// Which perturbation was committed at a pixel.
enum class Candidate : std::uint8_t { None = 0, Toggle1 = 1, Toggle2 = 2 };

inline constexpr double kDefaultToggleEpsilon = 0x1p-20;

/// Knobs of the content-aware double-sided embedder.
///
/// Absent maps are neutral (all ones). `ep` is required whenever beta > 0.
/// `force_identical_on_white` only takes effect when the two covers are equal
/// pixel for pixel; it then restricts white-watermark pixels to y1 == y2.
struct EmbedConfig {
  double p = 2.0;
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  DecodeOp op = DecodeOp::Xnor;
  Kernel kernel = kernel_lookup("steinberg");
  std::optional<RealMap> m1;
  std::optional<RealMap> m2;
  std::optional<RealMap> psi;
  std::optional<ExpectedPattern> ep;
  bool single_sided = false;
  bool force_identical_on_white = false;
  double toggle_epsilon = kDefaultToggleEpsilon;
};

/// Throws std::invalid_argument / DimensionError if `cfg` is unusable for rows x cols covers.
void validate(const EmbedConfig& cfg, Index rows, Index cols);

struct EmbedResult {
  BitImage y1;
  BitImage y2;
  RealMap du1;
  RealMap du2;
  Plane<std::uint8_t> choice;  // Candidate per pixel
  /// Running sum of the per-pixel minimum costs. Diagnostic only.
  double total_cost = 0.0;

  Candidate choice_at(Index r, Index c) const { return static_cast<Candidate>(choice(r, c)); }
};

/// Toggle budget T for the favor mechanism.
struct DhcedConfig {
  double t = 0.0;
  Kernel kernel = kernel_lookup("steinberg");
  double toggle_epsilon = kDefaultToggleEpsilon;
};

/// Smallest perturbation that makes the threshold quantizer emit `target` for u + du.
/// Toward white: 128 - u. Toward black: 128 - u - eps. Zero if u already quantizes there.
double toggle_distortion(double u, std::uint8_t target, double eps = kDefaultToggleEpsilon);

/// Decoded value of one pixel pair.
inline std::uint8_t decode_bit(std::uint8_t b1, std::uint8_t b2, DecodeOp op) {
  if (op == DecodeOp::And) return (b1 == kWhite && b2 == kWhite) ? kWhite : kBlack;
  return b1 == b2 ? kWhite : kBlack;
}

/// Per-pixel weights and targets that enter the cost.
struct PixelContext {
  double m1 = 1.0;
  double m2 = 1.0;
  double psi = 1.0;
  double w = 255.0;
  double ep = 0.0;
};

/// S = m1|du1|^p + m2|du2|^p + lambda*psi*(alpha|d - w|^p + beta|d - ep|^p), d = decode(b1, b2).
double cost_s(double du1, double du2, std::uint8_t b1, std::uint8_t b2, const PixelContext& ctx,
              const EmbedConfig& cfg);

/// Context of pixel (r, c) as the embedder sees it.
PixelContext pixel_context(const EmbedConfig& cfg, const BitImage& w, Index r, Index c);

/// Y1 is regular ED; y2 is favored identical (white W) / conjugate (black W) to y1
/// and toggled when the needed |du| <= T. Forced on white when X1 == X2.
EmbedResult embed_dhced(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                        const DhcedConfig& cfg);

/// Dual-sided favor: toggles whichever of y1, y2 needs the smaller |du|, within T.
EmbedResult embed_dhdced(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                         const DhcedConfig& cfg);

/// Raster-order relaxed minimization of the weighted embedding + decoding cost over
/// the candidates {no toggle, toggle y2, toggle y1}. Ties keep that order.
EmbedResult embed_cadeed(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                         const EmbedConfig& cfg);

enum class Preset { DeedL2, SeedL2, CadeedEc, CadeedNi };

Preset parse_preset(std::string_view name);
std::string to_string(Preset preset);

/// Named configurations: DEED(L-2), SEED(L-2), CaDEED-EC, CaDEED-N&I.
EmbedConfig make_preset(Preset preset, const GrayImage& x1, const GrayImage& x2,
                        const BitImage& w, double lambda, DecodeOp op, const Kernel& kernel);

}  // namespace hvw
