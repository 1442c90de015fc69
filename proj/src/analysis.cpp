#include "hvw/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hvw/local_stats.hpp"

namespace hvw {

DecodeOp parse_decode_op(std::string_view name) {
  if (name == "and" || name == "AND") return DecodeOp::And;
  if (name == "xnor" || name == "XNOR") return DecodeOp::Xnor;
  throw std::invalid_argument("unknown decode op '" + std::string(name) + "' (supported: and, xnor)");
}

std::string to_string(DecodeOp op) { return op == DecodeOp::And ? "and" : "xnor"; }

double expected_value(double a, double b, bool in_white, DecodeOp op) {
  if (in_white) {
    return op == DecodeOp::And ? std::min(a, b) : 255.0 - std::abs(a - b);
  }
  if (op == DecodeOp::And) return a + b <= 255.0 ? 0.0 : a + b - 255.0;
  return std::abs((a + b) - 255.0);
}

ExpectedPattern expected_pattern(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                                 DecodeOp op, int window) {
  require_same_shape(x1, x2, "expected_pattern");
  require_same_shape(x1, w, "expected_pattern");
  const RealMap a = local_mean(x1.pixels(), window);
  const RealMap b = local_mean(x2.pixels(), window);
  RealMap ep(w.rows(), w.cols());
  for (Index r = 0; r < w.rows(); ++r) {
    for (Index c = 0; c < w.cols(); ++c) {
      ep(r, c) = expected_value(a(r, c), b(r, c), w.white(r, c), op);
    }
  }
  return {std::move(ep), op, window};
}

double predicted_contrast(double a, double b, DecodeOp op) {
  const double on_white = expected_value(a, b, true, op);
  if (on_white == 0.0) {
    throw UndefinedContrast("contrast undefined: expected white-region value is 0 (A=" +
                            std::to_string(a) + ", B=" + std::to_string(b) + ")");
  }
  return (on_white - expected_value(a, b, false, op)) / on_white;
}

}  // namespace hvw
