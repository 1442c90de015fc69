#include <doctest.h>

#include <cmath>
#include <random>

#include "hvw/embed.hpp"
#include "hvw/metrics.hpp"

using namespace hvw;

namespace {

GrayImage noise_cover(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Plane<std::uint8_t> px(n, n);
  for (Index i = 0; i < px.size(); ++i) px.data()[i] = static_cast<std::uint8_t>(rng() & 0xff);
  return GrayImage(px);
}

GrayImage ramp(Index n) {
  Plane<std::uint8_t> px(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) px(i, j) = static_cast<std::uint8_t>((i * 3 + j * 5) % 256);
  }
  return GrayImage(px);
}

BitImage blocks(Index n) {
  Plane<std::uint8_t> px(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) px(i, j) = ((i / 8) + (j / 8)) % 2 ? kWhite : kBlack;
  }
  return BitImage(px);
}

const Kernel kFs = kernel_lookup("steinberg");

}  // namespace

TEST_CASE("toggle distortion") {
  CHECK(toggle_distortion(100.0, kWhite) == 28.0);
  const double eps = std::ldexp(1.0, -20);
  CHECK(toggle_distortion(200.0, kBlack) == doctest::Approx(-(72.0 + eps)).epsilon(1e-15));
  CHECK(quantize(200.0 + toggle_distortion(200.0, kBlack)) == kBlack);
  CHECK(toggle_distortion(128.0, kWhite) == 0.0);
  CHECK(toggle_distortion(12.0, kBlack) == 0.0);
  for (double u : {-40.3, 0.1, 127.99999, 128.0000001, 131.7, 300.25}) {
    for (std::uint8_t t : {kBlack, kWhite}) CHECK(quantize(u + toggle_distortion(u, t)) == t);
  }
}

TEST_CASE("cost S") {
  EmbedConfig cfg;
  cfg.lambda = 0.5;
  PixelContext ctx;
  ctx.w = 255;
  CHECK(cost_s(0, 0, kWhite, kWhite, ctx, cfg) == 0.0);
  CHECK(cost_s(28, 0, kWhite, kBlack, ctx, cfg) == doctest::Approx(784 + 0.5 * 255 * 255));
  cfg.beta = 1.0;
  ctx.ep = 255;
  CHECK(cost_s(0, 0, kBlack, kBlack, ctx, cfg) == 0.0);
  ctx.m1 = 0.25;
  ctx.psi = 2;
  CHECK(cost_s(4, 0, kWhite, kBlack, ctx, cfg) == doctest::Approx(4 + 0.5 * 2 * 2 * 255 * 255));
}

TEST_CASE("config validation") {
  const GrayImage x = ramp(8);
  const BitImage w = blocks(8);
  EmbedConfig cfg;
  cfg.beta = 1.0;
  CHECK_THROWS_WITH(embed_cadeed(x, x, w, cfg), doctest::Contains("expected pattern"));
  cfg.beta = 0.0;
  cfg.p = 0.5;
  CHECK_THROWS(embed_cadeed(x, x, w, cfg));
  cfg.p = 2.0;
  cfg.m1 = RealMap::Ones(4, 4);
  CHECK_THROWS_AS(embed_cadeed(x, x, w, cfg), DimensionError);
  CHECK_THROWS_AS(embed_cadeed(x, ramp(9), w, EmbedConfig{}), DimensionError);
  CHECK_THROWS_AS(embed_dhced(x, x, blocks(4), DhcedConfig{}), DimensionError);
}

TEST_CASE("lambda zero leaves the halftones alone") {
  const GrayImage x1 = noise_cover(32, 1), x2 = noise_cover(32, 2);
  const BitImage w = blocks(32);
  for (Preset p : {Preset::DeedL2, Preset::SeedL2, Preset::CadeedEc}) {
    const EmbedResult r = embed_cadeed(x1, x2, w, make_preset(p, x1, x2, w, 0.0, DecodeOp::Xnor, kFs));
    CHECK((r.du1 == 0.0).all());
    CHECK((r.du2 == 0.0).all());
    CHECK(r.y1 == error_diffuse(x1, kFs));
    CHECK(r.y2 == error_diffuse(x2, kFs));
  }
}

TEST_CASE("single sided keeps Y1 regular") {
  const GrayImage x1 = noise_cover(32, 3), x2 = noise_cover(32, 4);
  const BitImage w = blocks(32);
  const EmbedResult r =
      embed_cadeed(x1, x2, w, make_preset(Preset::SeedL2, x1, x2, w, 0.01, DecodeOp::Xnor, kFs));
  CHECK((r.du1 == 0.0).all());
  CHECK(r.y1 == error_diffuse(x1, kFs));
  CHECK((r.du2 != 0.0).any());
}

TEST_CASE("presets") {
  const GrayImage x = ramp(16);
  const BitImage w = blocks(16);
  const EmbedConfig ec = make_preset(Preset::CadeedEc, x, x, w, 0.1, DecodeOp::And, kFs);
  CHECK(ec.alpha == 1.0);
  CHECK(ec.beta == 1.0);
  CHECK(ec.ep.has_value());
  CHECK_FALSE(ec.m1.has_value());
  CHECK_FALSE(ec.psi.has_value());
  const EmbedConfig ni = make_preset(Preset::CadeedNi, x, x, w, 0.1, DecodeOp::And, kFs);
  CHECK(ni.m1.has_value());
  CHECK(ni.m2.has_value());
  CHECK(ni.psi.has_value());
  CHECK(ni.force_identical_on_white);
  CHECK(make_preset(Preset::SeedL2, x, x, w, 0.1, DecodeOp::And, kFs).single_sided);
  CHECK(parse_preset("cadeed_ni") == Preset::CadeedNi);
  CHECK(to_string(Preset::DeedL2) == "deed_l2");
  CHECK_THROWS(parse_preset("cadeed"));
}

TEST_CASE("reconstruction and choice bookkeeping") {
  const GrayImage x1 = noise_cover(40, 5), x2 = ramp(40);
  const BitImage w = blocks(40);
  for (const char* k : {"steinberg", "jarvis"}) {
    const Kernel kernel = kernel_lookup(k);
    for (Preset p : {Preset::DeedL2, Preset::SeedL2, Preset::CadeedEc, Preset::CadeedNi}) {
      const EmbedResult r =
          embed_cadeed(x1, x2, w, make_preset(p, x1, x2, w, 0.004, DecodeOp::And, kernel));
      CHECK(error_diffuse(x1, kernel, r.du1) == r.y1);
      CHECK(error_diffuse(x2, kernel, r.du2) == r.y2);
      for (Index i = 0; i < r.du1.size(); ++i) {
        const auto choice = static_cast<Candidate>(r.choice.data()[i]);
        CHECK((r.du1.data()[i] != 0.0) == (choice == Candidate::Toggle1));
        CHECK((r.du2.data()[i] != 0.0) == (choice == Candidate::Toggle2));
      }
    }
  }
}

TEST_CASE("forcing on white under identical covers") {
  const GrayImage x = noise_cover(48, 6);
  const BitImage w = blocks(48);
  const EmbedResult r =
      embed_cadeed(x, x, w, make_preset(Preset::CadeedNi, x, x, w, 1e-4, DecodeOp::Xnor, kFs));
  for (Index i = 0; i < w.pixels().size(); ++i) {
    if (w.pixels().data()[i] == kWhite) CHECK(r.y1.pixels().data()[i] == r.y2.pixels().data()[i]);
  }
  // No forcing when the covers differ, even with the flag on.
  const GrayImage x2 = noise_cover(48, 7);
  EmbedConfig cfg = make_preset(Preset::CadeedNi, x, x2, w, 0.0, DecodeOp::Xnor, kFs);
  const EmbedResult free = embed_cadeed(x, x2, w, cfg);
  CHECK((free.du2 == 0.0).all());
}

TEST_CASE("dhced") {
  const GrayImage x1 = noise_cover(32, 8), x2 = noise_cover(32, 9);
  const BitImage w = blocks(32);
  const EmbedResult zero = embed_dhced(x1, x2, w, DhcedConfig{0.0, kFs});
  CHECK(zero.y1 == error_diffuse(x1, kFs));
  CHECK(zero.y2 == error_diffuse(x2, kFs));
  CHECK((zero.du2 == 0.0).all());

  const EmbedResult forced = embed_dhced(x1, x1, BitImage::constant(32, 32, kWhite), DhcedConfig{0.0, kFs});
  CHECK(forced.y2 == forced.y1);

  const EmbedResult some = embed_dhced(x1, x2, w, DhcedConfig{20.0, kFs});
  CHECK((some.du1 == 0.0).all());
  CHECK((some.du2.abs() <= 20.0).all());
  CHECK(error_diffuse(x2, kFs, some.du2) == some.y2);
}

TEST_CASE("dhdced") {
  const GrayImage x1 = noise_cover(32, 10), x2 = noise_cover(32, 11);
  const BitImage w = blocks(32);
  const EmbedResult zero = embed_dhdced(x1, x2, w, DhcedConfig{0.0, kFs});
  CHECK(zero.y1 == error_diffuse(x1, kFs));
  CHECK(zero.y2 == error_diffuse(x2, kFs));

  const EmbedResult forced = embed_dhdced(x1, x1, BitImage::constant(32, 32, kWhite), DhcedConfig{0.0, kFs});
  CHECK(forced.y2 == forced.y1);

  // the committed toggle is the cheaper of the two strategies
  const double t = 40.0;
  const EmbedResult r = embed_dhdced(x1, x2, w, DhcedConfig{t, kFs});
  DiffusionState s1(32, 32, kFs), s2(32, 32, kFs);
  int toggles = 0;
  for (Index i = 0; i < 32; ++i) {
    for (Index j = 0; j < 32; ++j) {
      const double u1 = s1.accumulated(x1(i, j)), u2 = s2.accumulated(x2(i, j));
      const std::uint8_t n1 = quantize(u1), n2 = quantize(u2);
      const bool white = w.white(i, j);
      if ((n1 == n2) != white) {
        const double c2 = std::abs(toggle_distortion(u2, white ? n1 : 255 - n1));
        const double c1 = std::abs(toggle_distortion(u1, white ? n2 : 255 - n2));
        const double used = std::abs(r.du1(i, j)) + std::abs(r.du2(i, j));
        if (std::min(c1, c2) <= t) {
          ++toggles;
          CHECK(used == doctest::Approx(std::min(c1, c2)).epsilon(1e-12));
        } else {
          CHECK(used == 0.0);
        }
      }
      s1.step(x1(i, j), r.du1(i, j));
      s2.step(x2(i, j), r.du2(i, j));
    }
  }
  CHECK(toggles > 0);
}

TEST_CASE("larger budgets first diverge by toggling more") {
  // Error feedback means later toggle sets need not nest, but the first pixel where
  // two budgets disagree must be one the larger budget toggles and the smaller does not.
  const GrayImage x1 = noise_cover(48, 12), x2 = noise_cover(48, 13);
  const BitImage w = blocks(48);
  for (bool dual : {false, true}) {
    const double budgets[] = {4, 16, 40, 90};
    for (int k = 0; k + 1 < 4; ++k) {
      auto run = [&](double t) {
        return dual ? embed_dhdced(x1, x2, w, DhcedConfig{t, kFs}) : embed_dhced(x1, x2, w, DhcedConfig{t, kFs});
      };
      const EmbedResult lo = run(budgets[k]);
      const EmbedResult hi = run(budgets[k + 1]);
      for (Index i = 0; i < lo.choice.size(); ++i) {
        if (lo.choice.data()[i] != hi.choice.data()[i]) {
          CHECK(lo.choice.data()[i] == static_cast<std::uint8_t>(Candidate::None));
          CHECK(hi.choice.data()[i] != static_cast<std::uint8_t>(Candidate::None));
          break;
        }
      }
    }
  }
}

TEST_CASE("dhced raises CDR with budget on identical covers") {
  const GrayImage x = ramp(64);
  const BitImage w = blocks(64);
  const auto at = [&](double t) {
    const EmbedResult r = embed_dhced(x, x, w, DhcedConfig{t, kFs});
    return cdr(w, decode(r.y1, r.y2, DecodeOp::Xnor));
  };
  CHECK(at(40.0) > at(0.0));
}
