#pragma once

#include <optional>
#include <string>

#include "hvw/analysis.hpp"
#include "hvw/image.hpp"

namespace hvw {

/// Reported in place of +inf when the distortion is exactly zero.
inline constexpr double kPsnrCap = 99.0;

BitImage decode(const BitImage& y1, const BitImage& y2, DecodeOp op);

/// Sum of squared pre-quantization distortions over both stego images.
double sse(const RealMap& du1, const RealMap& du2);

/// 10 log10(255^2 / mean(du^2)), capped at kPsnrCap.
double psnr(const RealMap& du);

/// PSNR with each squared distortion weighted by the NVF value v.
double nt_psnr(const RealMap& du, const RealMap& v);

/// Fraction of pixels where the decoded image agrees with the watermark.
double cdr(const BitImage& w, const BitImage& d);

/// Importance-weighted CDR.
double cb_cdr(const BitImage& w, const BitImage& d, const RealMap& gamma);

struct MetricsReport {
  double sse = 0.0;
  double psnr1 = 0.0, psnr2 = 0.0, psnr_avg = 0.0;
  double nt_psnr1 = 0.0, nt_psnr2 = 0.0, nt_psnr_avg = 0.0;
  double cdr = 0.0;
  double cb_cdr = 0.0;

  /// Column order of to_csv_row().
  static std::string csv_header();
  std::string to_csv_row() const;
  std::string to_text() const;
};

/// Full report for an embed. NVF masks come from the covers (window 3, D = 75)
/// and the importance map from the watermark (window 3).
MetricsReport evaluate(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                       const BitImage& y1, const BitImage& y2, const RealMap& du1,
                       const RealMap& du2, DecodeOp op);

}  // namespace hvw
