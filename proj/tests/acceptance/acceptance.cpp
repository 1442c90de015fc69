// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hvw/analysis.hpp"
#include "hvw/attacks.hpp"
#include "hvw/embed.hpp"
#include "hvw/halftone.hpp"
#include "hvw/harness.hpp"
#include "hvw/metrics.hpp"
#include "hvw/pnm.hpp"
#include "hvw/weights.hpp"
#include "oracles.hpp"

using namespace hvw;

namespace {

// Tolerances.
constexpr double kToneTol = 0.02;
constexpr double kToneSeconds = 2.0;
constexpr double kAnalysisTol = 16.0;
constexpr double kAnalysisSeconds = 30.0;
constexpr double kCdrGain = 0.15;
constexpr double kMonotoneShare = 0.90;
constexpr double kTradeoffSeconds = 300.0;
constexpr double kMatchedCbCdrAnd = 0.60;
constexpr double kMatchedCbCdrXnor = 0.84;
constexpr double kNiGainDb = 1.0;
constexpr int kImagesRequired = 3;
constexpr double kPrintScanCdr = 0.75;
constexpr double kPsnrTol = 1e-6;
constexpr double kNvfTol = 1e-12;

const std::string kData = HVW_TEST_DATA;
const char* const kImages[] = {"lena", "barbara", "cameraman", "baboon"};

GrayImage cover(const std::string& name) { return load_gray(kData + "/" + name + ".pgm"); }
BitImage secret() { return load_bits(kData + "/secret.pbm"); }

GrayImage crop(const GrayImage& x, Index r, Index c, Index n) {
  return GrayImage(x.pixels().block(r, c, n, n));
}
BitImage crop(const BitImage& x, Index r, Index c, Index n) {
  return BitImage(x.pixels().block(r, c, n, n));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, title, dt, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GrayImage random_cover(Index n, std::mt19937_64& rng) {
  Plane<std::uint8_t> px(n, n);
  for (Index i = 0; i < px.size(); ++i) px.data()[i] = static_cast<std::uint8_t>(rng() & 0xff);
  return GrayImage(std::move(px));
}

BitImage random_bits(Index n, std::mt19937_64& rng) {
  Plane<std::uint8_t> px(n, n);
  for (Index i = 0; i < px.size(); ++i) px.data()[i] = (rng() >> 17) & 1 ? kWhite : kBlack;
  return BitImage(std::move(px));
}

// Reconstruction bookkeeping shared by every criterion that embeds.
long reconstructed = 0;
long reconstruction_mismatches = 0;

void note_reconstruction(const GrayImage& x1, const GrayImage& x2, const EmbedResult& r,
                         const Kernel& kernel) {
  ++reconstructed;
  if (!(error_diffuse(x1, kernel, r.du1) == r.y1)) ++reconstruction_mismatches;
  if (!(error_diffuse(x2, kernel, r.du2) == r.y2)) ++reconstruction_mismatches;
}

EmbedResult embed_noted(Method m, const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                        double param, DecodeOp op, const Kernel& kernel = kernel_lookup("steinberg")) {
  EmbedResult r = embed_with(m, x1, x2, w, param, op, kernel);
  note_reconstruction(x1, x2, r, kernel);
  return r;
}

// y at x = target on the piecewise-linear curve through (x_i, y_i) in sweep order.
std::optional<double> at_level(const std::vector<SweepRow>& rows, const std::string& name,
                               double target, bool nt) {
  std::vector<const SweepRow*> pts;
  for (const auto& r : rows) {
    if (r.cover == name) pts.push_back(&r);
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double x0 = pts[i]->metrics.cb_cdr, x1 = pts[i + 1]->metrics.cb_cdr;
    if ((x0 - target) * (x1 - target) <= 0 && x0 != x1) {
      const double y0 = nt ? pts[i]->metrics.nt_psnr_avg : pts[i]->metrics.psnr_avg;
      const double y1 = nt ? pts[i + 1]->metrics.nt_psnr_avg : pts[i + 1]->metrics.psnr_avg;
      return y0 + (target - x0) / (x1 - x0) * (y1 - y0);
    }
  }
  return std::nullopt;
}

Outcome tone_preservation() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const char* k : {"steinberg", "jarvis"}) {
    for (int a = 16; a <= 240; a += 16) {
      const BitImage y = error_diffuse(GrayImage::constant(256, 256, a), kernel_lookup(k));
      const double dev = std::abs(y.white_fraction() - a / 255.0);
      if (dev > worst) {
        worst = dev;
        where = std::string(k) + " A=" + std::to_string(a);
      }
    }
  }
  const double dt = seconds_since(t0);
  return {worst <= kToneTol && dt < kToneSeconds,
          "max |white - A/255| = " + fmt("%.5f", worst) + " at " + where + ", " + fmt("%.2f", dt) + "s"};
}

Outcome analysis_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  for (DecodeOp op : {DecodeOp::And, DecodeOp::Xnor}) {
    for (const AnalysisRow& r : validate_analysis({64, 128, 192}, op)) {
      // predictions for A = B, worked out by hand from the region probabilities
      const double a = r.a;
      const double white = op == DecodeOp::And ? a : 255.0;
      const double black = op == DecodeOp::And ? std::max(0.0, 2 * a - 255) : std::abs(2 * a - 255);
      ok = ok && r.predicted_white == white && r.predicted_black == black;
      worst = std::max({worst, r.deviation_white(), r.deviation_black()});
      detail += to_string(op) + "/" + std::to_string(r.a) + ":" + fmt("%.1f", r.empirical_white) + "|" +
                fmt("%.1f", r.empirical_black) + " ";
    }
  }
  const double dt = seconds_since(t0);
  ok = ok && worst <= kAnalysisTol && dt < kAnalysisSeconds;
  return {ok, "max deviation " + fmt("%.2f", worst) + " (white|black means: " + detail + ")"};
}

Outcome deed_equivalence() {
  long mismatched = 0;
  long total = 0;
  long toggled = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    const GrayImage x1 = random_cover(64, rng);
    const GrayImage x2 = random_cover(64, rng);
    const BitImage w = random_bits(64, rng);
    for (double lambda : {0.0005, 0.002, 0.01}) {
      const EmbedResult r = embed_noted(Method::DeedL2, x1, x2, w, lambda, DecodeOp::Xnor);
      const auto [o1, o2] = oracle::deed_xnor(x1, x2, w, lambda);
      mismatched += (r.y1.pixels() != o1).count() + (r.y2.pixels() != o2).count();
      toggled += (r.choice != 0).count();
      total += 2 * o1.size();
    }
  }
  return {mismatched == 0, std::to_string(mismatched) + " mismatched of " + std::to_string(total) +
                               " pixels, " + std::to_string(toggled) +
                               " toggles committed (5 seeds x 3 lambdas, XNOR)"};
}

Outcome per_pixel_optimality() {
  const GrayImage lena = crop(cover("lena"), 64, 64, 128);
  const GrayImage barbara = crop(cover("barbara"), 64, 64, 128);
  const BitImage w = crop(secret(), 64, 64, 128);
  const Kernel kernel = kernel_lookup("steinberg");
  bool ok = true;
  std::string detail;
  struct Case {
    Preset preset;
    bool same;
    DecodeOp op;
  };
  for (const Case& k : {Case{Preset::DeedL2, false, DecodeOp::Xnor},
                        Case{Preset::SeedL2, false, DecodeOp::Xnor},
                        Case{Preset::CadeedEc, false, DecodeOp::And},
                        Case{Preset::CadeedNi, false, DecodeOp::Xnor},
                        Case{Preset::CadeedNi, true, DecodeOp::Xnor}}) {
    const GrayImage& x2 = k.same ? lena : barbara;
    const EmbedConfig cfg = make_preset(k.preset, lena, x2, w, 0.002, k.op, kernel);
    const EmbedResult r = embed_cadeed(lena, x2, w, cfg);
    note_reconstruction(lena, x2, r, kernel);
    const auto rep = oracle::check_optimality(lena, x2, w, cfg, r);
    ok = ok && rep.optimal == rep.pixels && rep.outside_candidates == 0;
    detail += to_string(k.preset) + (k.same ? "(X1=X2)" : "") + " " + std::to_string(rep.optimal) + "/" +
              std::to_string(rep.pixels) + "; ";
  }
  return {ok, detail};
}

Outcome reconstruction_identity() {
  // Everything embedded so far, plus a pass over every method and both ops.
  const GrayImage lena = cover("lena");
  const GrayImage baboon = cover("baboon");
  const BitImage w = secret();
  for (Method m : {Method::Dhced, Method::Dhdced, Method::DeedL2, Method::SeedL2, Method::CadeedEc,
                   Method::CadeedNi}) {
    const double param = uses_budget(m) ? 32.0 : 0.0016;
    for (DecodeOp op : {DecodeOp::And, DecodeOp::Xnor}) {
      embed_noted(m, lena, lena, w, param, op);
      embed_noted(m, lena, baboon, w, param, op, kernel_lookup("jarvis"));
    }
  }
  return {reconstructed > 0 && reconstruction_mismatches == 0,
          std::to_string(reconstruction_mismatches) + " mismatching images over " +
              std::to_string(reconstructed) + " embed results"};
}

Outcome lambda_tradeoff() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<NamedCover> covers = {{"lena", cover("lena")}};
  const BitImage w = secret();
  std::vector<double> grid = default_lambda_grid();
  grid.insert(grid.begin(), 0.0);
  bool ok = true;
  std::string detail;
  for (Method m : {Method::DeedL2, Method::CadeedEc}) {
    const auto rows = sweep(m, covers, w, grid, DecodeOp::Xnor, DecodeOp::Xnor,
                            kernel_lookup("steinberg"), sweep_threads());
    const double gain = rows.back().metrics.cdr - rows.front().metrics.cdr;
    int up = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) up += rows[i + 1].metrics.sse >= rows[i].metrics.sse;
    const double share = double(up) / double(rows.size() - 1);
    ok = ok && gain >= kCdrGain && share >= kMonotoneShare;
    detail += to_string(m) + ": CDR " + fmt("%.4f", rows.front().metrics.cdr) + " -> " +
              fmt("%.4f", rows.back().metrics.cdr) + ", SSE nondecreasing " + fmt("%.0f%%", 100 * share) + "; ";
  }
  const double dt = seconds_since(t0);
  return {ok && dt < kTradeoffSeconds, detail};
}

Outcome method_trend() {
  const BitImage w = secret();
  std::vector<NamedCover> covers;
  for (const char* n : kImages) covers.push_back({n, cover(n)});
  std::vector<double> grid = {0.0};
  for (int k = 0; k <= 16; ++k) grid.push_back(1e-4 * std::pow(10.0, k / 4.0));
  const Kernel kernel = kernel_lookup("steinberg");

  bool ok = true;
  std::string detail;
  for (DecodeOp decode_op : {DecodeOp::And, DecodeOp::Xnor}) {
    const double level = decode_op == DecodeOp::And ? kMatchedCbCdrAnd : kMatchedCbCdrXnor;
    // XNOR is the embedding operation; AND only changes how the pair is read.
    auto curve = [&](Method m) {
      return sweep(m, covers, w, grid, DecodeOp::Xnor, decode_op, kernel, sweep_threads());
    };
    const auto deed = curve(Method::DeedL2);
    const auto ec = curve(Method::CadeedEc);
    const auto ni = curve(Method::CadeedNi);
    int ec_wins = 0, ni_wins = 0;
    std::string ec_detail, ni_detail;
    for (const char* n : kImages) {
      const auto d_psnr = at_level(deed, n, level, false);
      const auto e_psnr = at_level(ec, n, level, false);
      const auto d_nt = at_level(deed, n, level, true);
      const auto i_nt = at_level(ni, n, level, true);
      if (d_psnr && e_psnr) {
        ec_wins += *e_psnr >= *d_psnr;
        ec_detail += std::string(n) + fmt(" %+.2f", *e_psnr - *d_psnr) + " ";
      } else {
        ec_detail += std::string(n) + " n/a ";
      }
      if (d_nt && i_nt) {
        ni_wins += *i_nt >= *d_nt + kNiGainDb;
        ni_detail += std::string(n) + fmt(" %+.2f", *i_nt - *d_nt) + " ";
      } else {
        ni_detail += std::string(n) + " n/a ";
      }
    }
    ok = ok && ec_wins >= kImagesRequired && ni_wins >= kImagesRequired;
    detail += to_string(decode_op) + "@" + fmt("%.2f", level) + " EC-DEED PSNR dB {" + ec_detail + "} " +
              std::to_string(ec_wins) + "/4, N&I-DEED NT-PSNR dB {" + ni_detail + "} " +
              std::to_string(ni_wins) + "/4; ";
  }
  return {ok, detail};
}

Outcome forcing_contract() {
  const GrayImage x = cover("lena");
  const BitImage w = secret();
  long violations = 0;
  long checked = 0;
  auto check = [&](const EmbedResult& r) {
    for (Index i = 0; i < w.pixels().size(); ++i) {
      if (w.pixels().data()[i] != kWhite) continue;
      ++checked;
      violations += r.y1.pixels().data()[i] != r.y2.pixels().data()[i];
    }
  };
  for (DecodeOp op : {DecodeOp::And, DecodeOp::Xnor}) {
    for (double lambda : {0.0001, 0.0016, 0.1}) check(embed_noted(Method::CadeedNi, x, x, w, lambda, op));
  }
  for (double t : {0.0, 16.0, 64.0}) {
    check(embed_noted(Method::Dhced, x, x, w, t, DecodeOp::Xnor));
    check(embed_noted(Method::Dhdced, x, x, w, t, DecodeOp::Xnor));
  }
  return {violations == 0,
          std::to_string(violations) + " of " + std::to_string(checked) + " white-watermark pixel pairs differ"};
}

Outcome robustness() {
  const GrayImage x = cover("barbara");
  const BitImage w = secret();
  const EmbedResult r = embed_noted(Method::CadeedNi, x, x, w, 0.3, DecodeOp::Xnor);

  const Rect rect{64, 64, 128, 128};
  const BitImage before = decode(r.y1, r.y2, DecodeOp::Xnor);
  const BitImage after = decode(r.y1, crop_attack(r.y2, rect, kBlack), DecodeOp::Xnor);
  long changed_outside = 0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      const bool inside = i >= rect.row && i < rect.row + rect.height && j >= rect.col && j < rect.col + rect.width;
      if (!inside) changed_outside += (before(i, j) == w(i, j)) != (after(i, j) == w(i, j));
    }
  }

  ChannelParams p;
  p.blur_sigma = 0.6;
  p.noise_sigma = 8.0;
  p.rotate_degrees = 0.3;
  p.scale = 0.98;
  p.rng_seed = 1;
  const BitImage s1 = print_scan_sim(r.y1, p);
  p.rng_seed = 2;
  const BitImage s2 = print_scan_sim(r.y2, p);
  const double scanned = cdr(w, decode(s1, s2, DecodeOp::Xnor));
  return {changed_outside == 0 && scanned >= kPrintScanCdr,
          "crop: " + std::to_string(changed_outside) + " correctness changes outside the rect; print-scan XNOR CDR " +
              fmt("%.4f", scanned) + " (clean " + fmt("%.4f", cdr(w, before)) + ")"};
}

Outcome metric_closed_forms() {
  const double expected = 20.0 * std::log10(255.0);
  const RealMap ones = RealMap::Ones(64, 64);
  const double p = psnr(ones);
  const double nt = nt_psnr(ones, ones);

  std::mt19937_64 rng(11);
  const BitImage w = random_bits(64, rng);
  const BitImage d = random_bits(64, rng);
  const BitImage flat = BitImage::constant(64, 64, kWhite);
  const RealMap uniform = importance_map(flat).map;
  const bool cb_equal = cb_cdr(w, d, uniform) == cdr(w, d) && cb_cdr(w, d, RealMap::Constant(64, 64, 2.0)) == cdr(w, d);

  // checkerboard: the truncated corner windows carry the largest variance
  Plane<std::uint8_t> px(32, 32);
  for (Index i = 0; i < 32; ++i) {
    for (Index j = 0; j < 32; ++j) px(i, j) = (i + j) % 2 ? 255 : 0;
  }
  const RealMap var = oracle::window_variance(px, 3);
  Index r = 0, c = 0;
  var.maxCoeff(&r, &c);
  const double v = nvf_map(GrayImage(px), NvfParams{3, 75.0}).map(r, c);

  const bool ok = std::abs(p - expected) <= kPsnrTol && std::abs(nt - expected) <= kPsnrTol && cb_equal &&
                  std::abs(v - 1.0 / 76.0) <= kNvfTol;
  return {ok, "psnr " + fmt("%.9f", p) + ", nt_psnr " + fmt("%.9f", nt) + " (expect " + fmt("%.9f", expected) +
                  "); cb_cdr==cdr " + (cb_equal ? "yes" : "no") + "; nvf at max variance " + fmt("%.15f", v)};
}

}  // namespace

int main() {
  run(1, "tone preservation", tone_preservation);
  run(2, "analysis agreement", analysis_agreement);
  run(3, "DEED equivalence", deed_equivalence);
  run(4, "per-pixel optimality", per_pixel_optimality);
  run(6, "lambda tradeoff", lambda_tradeoff);
  run(7, "method-comparison trend", method_trend);
  run(8, "forcing contract", forcing_contract);
  run(9, "robustness", robustness);
  run(10, "metric closed forms", metric_closed_forms);
  run(5, "reconstruction identity", reconstruction_identity);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
