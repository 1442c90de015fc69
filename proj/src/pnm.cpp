#include "hvw/pnm.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace hvw {

PnmError::PnmError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at byte " + std::to_string(offset)), detail_(message), offset_(offset) {}

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  unsigned char peek() const { return static_cast<unsigned char>(bytes_[pos_]); }
  unsigned char get() { return static_cast<unsigned char>(bytes_[pos_++]); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  // Whitespace and '#' comments between header tokens.
  void skip_separators() {
    while (!at_end()) {
      const unsigned char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    if (at_end()) throw PnmError(std::string("truncated header, expected ") + what, pos_);
    if (peek() < '0' || peek() > '9') throw PnmError(std::string("expected ") + what, pos_);
    long value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (get() - '0');
      if (value > std::numeric_limits<int>::max()) throw PnmError(std::string(what) + " too large", start);
    }
    return value;
  }

  // Exactly one whitespace byte separates the binary header from the raster.
  void single_separator() {
    if (at_end()) throw PnmError("truncated header", pos_);
    if (!is_space(peek())) throw PnmError("expected whitespace after header", pos_);
    ++pos_;
  }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

PnmImage parse_bilevel(Reader& in, long width, long height, bool binary) {
  Plane<std::uint8_t> px(height, width);
  if (binary) {
    const std::size_t stride = static_cast<std::size_t>((width + 7) / 8);
    if (in.remaining() < stride * static_cast<std::size_t>(height)) {
      throw PnmError("truncated payload", in.pos() + in.remaining());
    }
    for (long r = 0; r < height; ++r) {
      for (std::size_t b = 0; b < stride; ++b) {
        const unsigned char byte = in.get();
        for (int bit = 0; bit < 8; ++bit) {
          const long c = static_cast<long>(b * 8) + bit;
          if (c >= width) break;
          px(r, c) = ((byte >> (7 - bit)) & 1) ? kBlack : kWhite;
        }
      }
    }
  } else {
    for (long k = 0; k < width * height; ++k) {
      in.skip_separators();
      if (in.at_end()) throw PnmError("truncated payload", in.pos());
      const unsigned char c = in.get();
      if (c != '0' && c != '1') throw PnmError("invalid PBM sample", in.pos() - 1);
      px(k / width, k % width) = c == '1' ? kBlack : kWhite;
    }
  }
  return BitImage(std::move(px));
}

PnmImage parse_gray(Reader& in, long width, long height, bool binary) {
  Plane<std::uint8_t> px(height, width);
  if (binary) {
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (in.remaining() < count) throw PnmError("truncated payload", in.pos() + in.remaining());
    for (std::size_t k = 0; k < count; ++k) px.data()[k] = in.get();
  } else {
    for (long k = 0; k < width * height; ++k) {
      const std::size_t at = in.pos();
      long v = 0;
      try {
        v = in.read_uint("sample");
      } catch (const PnmError&) {
        throw PnmError("truncated payload", at);
      }
      if (v > 255) throw PnmError("sample exceeds maxval", at);
      px.data()[k] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(std::move(px));
}

std::vector<std::byte> header(const char* magic, Index width, Index height, bool maxval) {
  std::string h = std::string(magic) + " " + std::to_string(width) + " " + std::to_string(height);
  if (maxval) h += " 255";
  h += "\n";
  std::vector<std::byte> out(h.size());
  std::memcpy(out.data(), h.data(), h.size());
  return out;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::byte>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

PnmImage parse_pnm(std::span<const std::byte> bytes) {
  Reader in(bytes);
  if (in.remaining() < 2 || in.get() != 'P') throw PnmError("malformed magic", 0);
  const unsigned char kind = in.get();
  if (kind != '1' && kind != '2' && kind != '4' && kind != '5') {
    throw PnmError("malformed magic", 1);
  }
  const bool bilevel = kind == '1' || kind == '4';
  const bool binary = kind == '4' || kind == '5';

  in.skip_separators();
  const std::size_t width_at = in.pos();
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  if (width == 0 || height == 0) throw PnmError("zero dimension", width_at);

  if (!bilevel) {
    in.skip_separators();
    const std::size_t maxval_at = in.pos();
    const long maxval = in.read_uint("maxval");
    if (maxval != 255) throw PnmError("unsupported maxval " + std::to_string(maxval), maxval_at);
  }
  if (binary) in.single_separator();

  return bilevel ? parse_bilevel(in, width, height, binary) : parse_gray(in, width, height, binary);
}

PnmImage parse_pnm(std::string_view bytes) {
  return parse_pnm(std::as_bytes(std::span<const char>(bytes.data(), bytes.size())));
}

std::vector<std::byte> serialize_pnm(const GrayImage& image) {
  auto out = header("P5", image.cols(), image.rows(), true);
  const auto& px = image.pixels();
  const auto* first = reinterpret_cast<const std::byte*>(px.data());
  out.insert(out.end(), first, first + px.size());
  return out;
}

std::vector<std::byte> serialize_pnm(const BitImage& image) {
  auto out = header("P4", image.cols(), image.rows(), false);
  const Index stride = (image.cols() + 7) / 8;
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index b = 0; b < stride; ++b) {
      unsigned byte = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const Index c = b * 8 + bit;
        if (c < image.cols() && image(r, c) == kBlack) byte |= 0x80u >> bit;
      }
      out.push_back(static_cast<std::byte>(byte));
    }
  }
  return out;
}

PnmImage read_pnm_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_pnm(std::span<const std::byte>(bytes));
  } catch (const PnmError& e) {
    throw PnmError(path.string() + ": " + e.detail(), e.offset());
  }
}

void write_pnm_file(const std::filesystem::path& path, const GrayImage& image) {
  write_file(path, serialize_pnm(image));
}

void write_pnm_file(const std::filesystem::path& path, const BitImage& image) {
  write_file(path, serialize_pnm(image));
}

GrayImage load_gray(const std::filesystem::path& path) {
  auto image = read_pnm_file(path);
  if (auto* bits = std::get_if<BitImage>(&image)) return bits->to_gray();
  return std::get<GrayImage>(std::move(image));
}

BitImage load_bits(const std::filesystem::path& path) {
  auto image = read_pnm_file(path);
  if (auto* gray = std::get_if<GrayImage>(&image)) {
    try {
      return BitImage(gray->pixels());
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path.string() + ": expected a bilevel image (values 0/255 only)");
    }
  }
  return std::get<BitImage>(std::move(image));
}

}  // namespace hvw
