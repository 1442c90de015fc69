#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hvw/image.hpp"

namespace hvw {

/// How the two stego halftones are combined to reveal the watermark.
enum class DecodeOp { And, Xnor };

DecodeOp parse_decode_op(std::string_view name);
std::string to_string(DecodeOp op);

/// Expected decoded pattern E[Y1 o Y2] predicted from local cover intensities.
struct ExpectedPattern {
  RealMap values;
  DecodeOp op = DecodeOp::Xnor;
  int window = 1;
};

/// Predicted contrast is undefined when the white-region expectation is zero.
class UndefinedContrast : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Expected decoded value for local intensities A (cover 1) and B (cover 2).
///
/// White watermark pixels are favored identical, black ones conjugate:
///   white, AND : min(A, B)       (both white with probability min(A,B)/255)
///   white, XNOR: 255 - |A - B|
///   black, AND : 0 if A + B <= 255, else A + B - 255
///   black, XNOR: |A + B - 255|
double expected_value(double a, double b, bool in_white, DecodeOp op);

/// Per-pixel expected_value with A, B taken as truncated box means of X1, X2.
ExpectedPattern expected_pattern(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                                 DecodeOp op, int window = 1);

/// (E[white] - E[black]) / E[white] for constant local intensities A, B.
double predicted_contrast(double a, double b, DecodeOp op);

}  // namespace hvw
