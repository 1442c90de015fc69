#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hvw {

/// Row-major pixel plane. Row index is the image row (i), column index is j.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Continuous per-pixel field (distortions, masks, expected patterns).
using RealMap = Plane<double>;

using Index = Eigen::Index;

inline constexpr std::uint8_t kBlack = 0;
inline constexpr std::uint8_t kWhite = 255;

/// Raised when two images/maps that must align do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 8-bit continuous-tone image.
class GrayImage {
 public:
  GrayImage() = default;
  explicit GrayImage(Plane<std::uint8_t> pixels);

  static GrayImage constant(Index rows, Index cols, std::uint8_t value);

  Index rows() const { return pixels_.rows(); }
  Index cols() const { return pixels_.cols(); }
  std::uint8_t operator()(Index r, Index c) const { return pixels_(r, c); }
  const Plane<std::uint8_t>& pixels() const { return pixels_; }

  /// Pixel values as reals, for arithmetic downstream.
  RealMap to_real() const { return pixels_.cast<double>(); }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.pixels_ == b.pixels_).all();
  }

 private:
  Plane<std::uint8_t> pixels_;
};

/// Bilevel image; every value is exactly 0 or 255.
class BitImage {
 public:
  BitImage() = default;
  explicit BitImage(Plane<std::uint8_t> pixels);

  static BitImage constant(Index rows, Index cols, std::uint8_t value);

  Index rows() const { return pixels_.rows(); }
  Index cols() const { return pixels_.cols(); }
  std::uint8_t operator()(Index r, Index c) const { return pixels_(r, c); }
  bool white(Index r, Index c) const { return pixels_(r, c) == kWhite; }
  const Plane<std::uint8_t>& pixels() const { return pixels_; }

  RealMap to_real() const { return pixels_.cast<double>(); }
  GrayImage to_gray() const { return GrayImage(pixels_); }
  BitImage complement() const;
  double white_fraction() const;

  friend bool operator==(const BitImage& a, const BitImage& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.pixels_ == b.pixels_).all();
  }

 private:
  Plane<std::uint8_t> pixels_;
};

/// 255 where the input is >= threshold, else 0.
BitImage binarize(const GrayImage& image, std::uint8_t threshold);

/// Throws DimensionError naming `what` unless both operands share a shape.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.cols()) +
                         "x" + std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" +
                         std::to_string(b.rows()) + ")");
  }
}

/// Clamp-round a real map to 8 bits.
GrayImage round_to_gray(const RealMap& map);

/// Affine-rescale [min, max] of `map` onto 0..255; constant maps become mid-gray.
GrayImage rescale_to_gray(const RealMap& map);

}  // namespace hvw
