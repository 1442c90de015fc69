#include "hvw/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "hvw/weights.hpp"

namespace hvw {

namespace {

double psnr_from_mse(double mse) {
  if (!(mse > 0.0)) return kPsnrCap;
  const double db = 10.0 * std::log10(255.0 * 255.0 / mse);
  return db < kPsnrCap ? db : kPsnrCap;
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

BitImage decode(const BitImage& y1, const BitImage& y2, DecodeOp op) {
  require_same_shape(y1, y2, "decode");
  const auto& a = y1.pixels();
  const auto& b = y2.pixels();
  const auto white = Plane<std::uint8_t>::Constant(a.rows(), a.cols(), kWhite);
  const auto black = Plane<std::uint8_t>::Constant(a.rows(), a.cols(), kBlack);
  if (op == DecodeOp::And) return BitImage(((a == kWhite) && (b == kWhite)).select(white, black));
  return BitImage((a == b).select(white, black));
}

double sse(const RealMap& du1, const RealMap& du2) {
  require_same_shape(du1, du2, "sse");
  return du1.square().sum() + du2.square().sum();
}

double psnr(const RealMap& du) {
  return psnr_from_mse(du.square().sum() / static_cast<double>(du.size()));
}

double nt_psnr(const RealMap& du, const RealMap& v) {
  require_same_shape(du, v, "nt_psnr");
  return psnr_from_mse((du.square() * v).sum() / static_cast<double>(du.size()));
}

double cdr(const BitImage& w, const BitImage& d) {
  require_same_shape(w, d, "cdr");
  const auto hits = (w.pixels() == d.pixels()).count();
  return static_cast<double>(hits) / static_cast<double>(w.pixels().size());
}

double cb_cdr(const BitImage& w, const BitImage& d, const RealMap& gamma) {
  require_same_shape(w, d, "cb_cdr");
  require_same_shape(w, gamma, "cb_cdr");
  const RealMap hit = (w.pixels() == d.pixels()).cast<double>();
  return (gamma * hit).sum() / gamma.sum();
}

std::string MetricsReport::csv_header() {
  return "sse,psnr1,psnr2,psnr_avg,nt_psnr1,nt_psnr2,nt_psnr_avg,cdr,cb_cdr";
}

std::string MetricsReport::to_csv_row() const {
  std::string row = format("%.6f", sse);
  for (double v : {psnr1, psnr2, psnr_avg, nt_psnr1, nt_psnr2, nt_psnr_avg}) {
    row += "," + format("%.6f", v);
  }
  row += "," + format("%.6f", cdr) + "," + format("%.6f", cb_cdr);
  return row;
}

std::string MetricsReport::to_text() const {
  std::string s;
  s += "SSE          " + format("%.3f", sse) + "\n";
  s += "PSNR         " + format("%.4f", psnr1) + " / " + format("%.4f", psnr2) + " dB (avg " +
       format("%.4f", psnr_avg) + ")\n";
  s += "NT-PSNR      " + format("%.4f", nt_psnr1) + " / " + format("%.4f", nt_psnr2) +
       " dB (avg " + format("%.4f", nt_psnr_avg) + ")\n";
  s += "CDR          " + format("%.6f", cdr) + "\n";
  s += "CB-CDR       " + format("%.6f", cb_cdr) + "\n";
  return s;
}

MetricsReport evaluate(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                       const BitImage& y1, const BitImage& y2, const RealMap& du1,
                       const RealMap& du2, DecodeOp op) {
  require_same_shape(x1, x2, "evaluate");
  require_same_shape(x1, w, "evaluate");
  require_same_shape(x1, du1, "evaluate");
  require_same_shape(x1, du2, "evaluate");
  const BitImage d = decode(y1, y2, op);
  const RealMap v1 = nvf_map(x1).map;
  const RealMap v2 = nvf_map(x2).map;
  const RealMap gamma = importance_map(w).map;

  MetricsReport m;
  m.sse = sse(du1, du2);
  m.psnr1 = psnr(du1);
  m.psnr2 = psnr(du2);
  m.psnr_avg = 0.5 * (m.psnr1 + m.psnr2);
  m.nt_psnr1 = nt_psnr(du1, v1);
  m.nt_psnr2 = nt_psnr(du2, v2);
  m.nt_psnr_avg = 0.5 * (m.nt_psnr1 + m.nt_psnr2);
  m.cdr = cdr(w, d);
  m.cb_cdr = cb_cdr(w, d, gamma);
  return m;
}

}  // namespace hvw
