#include "hvw/attacks.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hvw {

namespace {

// mt19937_64's output sequence is fixed by the standard; the distributions in
// <random> are not, so uniform and gaussian draws are derived here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  Index below(Index n) { return static_cast<Index>(uniform() * static_cast<double>(n)); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Index clamp_index(Index v, Index n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

RealMap gaussian_blur(const RealMap& in, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double norm = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    norm += k[i + radius];
  }
  for (double& v : k) v /= norm;

  const Index rows = in.rows();
  const Index cols = in.cols();
  RealMap tmp(rows, cols);
  RealMap out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * in(r, clamp_index(c + i, cols));
      tmp(r, c) = s;
    }
  }
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * tmp(clamp_index(r + i, rows), c);
      out(r, c) = s;
    }
  }
  return out;
}

// Bilinear sample; coordinates outside the image read as `outside`.
double sample(const RealMap& in, double y, double x, double outside) {
  if (y < -0.5 || x < -0.5 || y > in.rows() - 0.5 || x > in.cols() - 0.5) return outside;
  const double yc = std::clamp(y, 0.0, static_cast<double>(in.rows() - 1));
  const double xc = std::clamp(x, 0.0, static_cast<double>(in.cols() - 1));
  const Index y0 = static_cast<Index>(std::floor(yc));
  const Index x0 = static_cast<Index>(std::floor(xc));
  const Index y1 = std::min<Index>(y0 + 1, in.rows() - 1);
  const Index x1 = std::min<Index>(x0 + 1, in.cols() - 1);
  const double fy = yc - y0;
  const double fx = xc - x0;
  return (1 - fy) * ((1 - fx) * in(y0, x0) + fx * in(y0, x1)) +
         fy * ((1 - fx) * in(y1, x0) + fx * in(y1, x1));
}

RealMap rotate(const RealMap& in, double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  const double cy = 0.5 * (in.rows() - 1);
  const double cx = 0.5 * (in.cols() - 1);
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  RealMap out(in.rows(), in.cols());
  for (Index r = 0; r < in.rows(); ++r) {
    for (Index c = 0; c < in.cols(); ++c) {
      // inverse mapping of a counter-clockwise rotation about the center
      const double dy = r - cy;
      const double dx = c - cx;
      out(r, c) = sample(in, cy + cs * dy - sn * dx, cx + sn * dy + cs * dx, 255.0);
    }
  }
  return out;
}

RealMap resize(const RealMap& in, Index rows, Index cols) {
  RealMap out(rows, cols);
  const double sy = static_cast<double>(in.rows()) / rows;
  const double sx = static_cast<double>(in.cols()) / cols;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = sample(in, (r + 0.5) * sy - 0.5, (c + 0.5) * sx - 0.5, 255.0);
    }
  }
  return out;
}

}  // namespace

ChannelParams parse_channel_params(std::string_view text, ChannelParams base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw std::invalid_argument("channel config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "blur_sigma") base.blur_sigma = std::stod(value);
      else if (key == "noise_sigma") base.noise_sigma = std::stod(value);
      else if (key == "rotate_degrees") base.rotate_degrees = std::stod(value);
      else if (key == "scale") base.scale = std::stod(value);
      else if (key == "rebinarize_threshold") base.rebinarize_threshold = std::stoi(value);
      else if (key == "rng_seed") base.rng_seed = std::stoull(value);
      else throw std::invalid_argument("channel config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e) && std::string(e.what()).starts_with("channel")) throw;
      throw std::invalid_argument("channel config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return base;
}

void validate(const ChannelParams& p) {
  if (!(p.blur_sigma >= 0.0) || !(p.noise_sigma >= 0.0)) {
    throw std::invalid_argument("blur_sigma and noise_sigma must be >= 0");
  }
  if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw std::invalid_argument("scale must be > 0");
  if (!std::isfinite(p.rotate_degrees)) throw std::invalid_argument("rotate_degrees must be finite");
  if (p.rebinarize_threshold < 0 || p.rebinarize_threshold > 255) {
    throw std::invalid_argument("rebinarize_threshold must be in 0..255");
  }
}

BitImage crop_attack(const BitImage& y, const Rect& rect, std::uint8_t fill) {
  if (fill != kBlack && fill != kWhite) throw std::invalid_argument("crop fill must be 0 or 255");
  if (rect.row < 0 || rect.col < 0 || rect.height < 0 || rect.width < 0 ||
      rect.row + rect.height > y.rows() || rect.col + rect.width > y.cols()) {
    throw std::out_of_range("crop rectangle out of bounds");
  }
  Plane<std::uint8_t> px = y.pixels();
  px.block(rect.row, rect.col, rect.height, rect.width).setConstant(fill);
  return BitImage(std::move(px));
}

BitImage mark_attack(const BitImage& y, int count, int radius, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("mark count must be >= 0");
  if (radius < 0) throw std::invalid_argument("mark radius must be >= 0");
  Rng rng(seed);
  Plane<std::uint8_t> px = y.pixels();
  for (int k = 0; k < count; ++k) {
    const Index cr = rng.below(y.rows());
    const Index cc = rng.below(y.cols());
    for (Index dr = -radius; dr <= radius; ++dr) {
      for (Index dc = -radius; dc <= radius; ++dc) {
        const Index r = cr + dr;
        const Index c = cc + dc;
        if (dr * dr + dc * dc <= Index{radius} * radius && r >= 0 && c >= 0 && r < y.rows() &&
            c < y.cols()) {
          px(r, c) = kBlack;
        }
      }
    }
  }
  return BitImage(std::move(px));
}

BitImage print_scan_sim(const BitImage& y, const ChannelParams& params) {
  validate(params);
  RealMap img = y.to_real();
  if (params.blur_sigma > 0.0) img = gaussian_blur(img, params.blur_sigma);
  if (params.noise_sigma > 0.0) {
    Rng rng(params.rng_seed);
    for (Index i = 0; i < img.size(); ++i) img.data()[i] += params.noise_sigma * rng.gaussian();
  }
  if (params.rotate_degrees != 0.0) img = rotate(img, params.rotate_degrees);
  if (params.scale != 1.0) {
    const Index rows = std::max<Index>(1, std::lround(y.rows() * params.scale));
    const Index cols = std::max<Index>(1, std::lround(y.cols() * params.scale));
    img = resize(resize(img, rows, cols), y.rows(), y.cols());
  }
  const double threshold = params.rebinarize_threshold;
  Plane<std::uint8_t> out(y.rows(), y.cols());
  for (Index i = 0; i < img.size(); ++i) out.data()[i] = img.data()[i] >= threshold ? kWhite : kBlack;
  return BitImage(std::move(out));
}

}  // namespace hvw
