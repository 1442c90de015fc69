#include "hvw/image.hpp"

#include <cmath>

namespace hvw {

namespace {

void require_nonempty(Index rows, Index cols, const char* what) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument(std::string(what) + ": width and height must be >= 1");
  }
}

}  // namespace

GrayImage::GrayImage(Plane<std::uint8_t> pixels) : pixels_(std::move(pixels)) {
  require_nonempty(pixels_.rows(), pixels_.cols(), "GrayImage");
}

GrayImage GrayImage::constant(Index rows, Index cols, std::uint8_t value) {
  return GrayImage(Plane<std::uint8_t>::Constant(rows, cols, value));
}

BitImage::BitImage(Plane<std::uint8_t> pixels) : pixels_(std::move(pixels)) {
  require_nonempty(pixels_.rows(), pixels_.cols(), "BitImage");
  if (!((pixels_ == kBlack) || (pixels_ == kWhite)).all()) {
    throw std::invalid_argument("BitImage: values must be 0 or 255");
  }
}

BitImage BitImage::constant(Index rows, Index cols, std::uint8_t value) {
  return BitImage(Plane<std::uint8_t>::Constant(rows, cols, value));
}

BitImage BitImage::complement() const {
  return BitImage((kWhite - pixels_.cast<int>()).cast<std::uint8_t>());
}

double BitImage::white_fraction() const {
  return static_cast<double>((pixels_ == kWhite).count()) / static_cast<double>(pixels_.size());
}

BitImage binarize(const GrayImage& image, std::uint8_t threshold) {
  Plane<std::uint8_t> out = (image.pixels() >= threshold).select(
      Plane<std::uint8_t>::Constant(image.rows(), image.cols(), kWhite),
      Plane<std::uint8_t>::Constant(image.rows(), image.cols(), kBlack));
  return BitImage(std::move(out));
}

GrayImage round_to_gray(const RealMap& map) {
  Plane<std::uint8_t> out(map.rows(), map.cols());
  for (Index i = 0; i < map.size(); ++i) {
    const double v = std::round(map.data()[i]);
    out.data()[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  return GrayImage(std::move(out));
}

GrayImage rescale_to_gray(const RealMap& map) {
  const double lo = map.minCoeff();
  const double hi = map.maxCoeff();
  if (!(hi > lo)) {
    return GrayImage::constant(map.rows(), map.cols(), 128);
  }
  return round_to_gray((map - lo) * (255.0 / (hi - lo)));
}

}  // namespace hvw
