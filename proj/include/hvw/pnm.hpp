#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hvw/image.hpp"

namespace hvw {

/// Malformed or unsupported PNM stream; `offset` is the byte where parsing stopped.
class PnmError : public std::runtime_error {
 public:
  PnmError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

using PnmImage = std::variant<GrayImage, BitImage>;

/// Parses P1/P4 (bilevel, 1 = black) and P2/P5 (maxval 255).
PnmImage parse_pnm(std::span<const std::byte> bytes);
PnmImage parse_pnm(std::string_view bytes);

/// Canonical binary encoding: P5 for gray, P4 for bilevel, single header line.
std::vector<std::byte> serialize_pnm(const GrayImage& image);
std::vector<std::byte> serialize_pnm(const BitImage& image);

PnmImage read_pnm_file(const std::filesystem::path& path);
void write_pnm_file(const std::filesystem::path& path, const GrayImage& image);
void write_pnm_file(const std::filesystem::path& path, const BitImage& image);

/// Loads a cover. A PBM is accepted and read as 0/255 intensities.
GrayImage load_gray(const std::filesystem::path& path);

/// Loads a bilevel image. A PGM is accepted only if every value is 0 or 255.
BitImage load_bits(const std::filesystem::path& path);

}  // namespace hvw
