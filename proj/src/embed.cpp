#include "hvw/embed.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hvw/weights.hpp"

namespace hvw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint8_t flip(std::uint8_t b) { return b == kWhite ? kBlack : kWhite; }

double abs_pow(double v, double p) {
  const double a = std::abs(v);
  return p == 2.0 ? a * a : std::pow(a, p);
}

// Moves du one ulp at a time until `reaches(du)` holds. Only needed when the
// closed-form toggle lands a rounding error short of the threshold.
template <typename Reaches>
double nudge(double du, std::uint8_t target, Reaches reaches) {
  const double dir = target == kWhite ? kInf : -kInf;
  while (!reaches(du)) du = std::nextafter(du, dir);
  return du;
}

double closed_form_toggle(double u, std::uint8_t target, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("toggle_distortion: epsilon must be > 0");
  return target == kWhite ? 128.0 - u : 128.0 - u - eps;
}

// Toggle evaluated with the exact association the state will use on commit.
double toggle_at(const DiffusionState& s, double x, std::uint8_t target, double eps) {
  const double u = s.accumulated(x);
  if (quantize(u) == target) return 0.0;
  return nudge(closed_form_toggle(u, target, eps), target,
               [&](double d) { return quantize(s.accumulated(x, d)) == target; });
}

bool same_pixels(const GrayImage& a, const GrayImage& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.pixels() == b.pixels()).all();
}

struct PassBuffers {
  Plane<std::uint8_t> y1, y2, choice;
  RealMap du1, du2;

  PassBuffers(Index rows, Index cols)
      : y1(rows, cols),
        y2(rows, cols),
        choice(Plane<std::uint8_t>::Zero(rows, cols)),
        du1(RealMap::Zero(rows, cols)),
        du2(RealMap::Zero(rows, cols)) {}

  EmbedResult finish(double total_cost) && {
    return {BitImage(std::move(y1)), BitImage(std::move(y2)), std::move(du1), std::move(du2),
            std::move(choice), total_cost};
  }
};

void require_cover_shapes(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                          const char* what) {
  require_same_shape(x1, x2, what);
  require_same_shape(x1, w, what);
}

}  // namespace

double toggle_distortion(double u, std::uint8_t target, double eps) {
  if (quantize(u) == target) return 0.0;
  return nudge(closed_form_toggle(u, target, eps), target,
               [&](double d) { return quantize(u + d) == target; });
}

double cost_s(double du1, double du2, std::uint8_t b1, std::uint8_t b2, const PixelContext& ctx,
              const EmbedConfig& cfg) {
  double s = ctx.m1 * abs_pow(du1, cfg.p) + ctx.m2 * abs_pow(du2, cfg.p);
  if (cfg.lambda != 0.0) {
    const double d = decode_bit(b1, b2, cfg.op);
    double mark = cfg.alpha * abs_pow(d - ctx.w, cfg.p);
    if (cfg.beta != 0.0) mark += cfg.beta * abs_pow(d - ctx.ep, cfg.p);
    s += cfg.lambda * ctx.psi * mark;
  }
  return s;
}

PixelContext pixel_context(const EmbedConfig& cfg, const BitImage& w, Index r, Index c) {
  PixelContext ctx;
  if (cfg.m1) ctx.m1 = (*cfg.m1)(r, c);
  if (cfg.m2) ctx.m2 = (*cfg.m2)(r, c);
  if (cfg.psi) ctx.psi = (*cfg.psi)(r, c);
  if (cfg.ep) ctx.ep = cfg.ep->values(r, c);
  ctx.w = static_cast<double>(w(r, c));
  return ctx;
}

void validate(const EmbedConfig& cfg, Index rows, Index cols) {
  if (!(cfg.p >= 1.0) || !std::isfinite(cfg.p)) throw std::invalid_argument("p must be >= 1");
  for (double v : {cfg.lambda, cfg.alpha, cfg.beta}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("lambda, alpha and beta must be finite and >= 0");
    }
  }
  if (!(cfg.toggle_epsilon > 0.0)) throw std::invalid_argument("toggle_epsilon must be > 0");
  if (cfg.beta > 0.0 && !cfg.ep) {
    throw std::invalid_argument("beta > 0 requires an expected pattern");
  }
  validate_kernel(cfg.kernel);
  const RealMap shape(rows, cols);
  if (cfg.m1) require_same_shape(shape, *cfg.m1, "embed config M1");
  if (cfg.m2) require_same_shape(shape, *cfg.m2, "embed config M2");
  if (cfg.psi) require_same_shape(shape, *cfg.psi, "embed config Psi");
  if (cfg.ep) require_same_shape(shape, cfg.ep->values, "embed config EP");
}

EmbedResult embed_dhced(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                        const DhcedConfig& cfg) {
  require_cover_shapes(x1, x2, w, "embed_dhced");
  const bool identical = same_pixels(x1, x2);
  const BitImage y1 = error_diffuse(x1, cfg.kernel);

  PassBuffers out(x1.rows(), x1.cols());
  out.y1 = y1.pixels();
  DiffusionState s2(x2.rows(), x2.cols(), cfg.kernel);
  for (Index r = 0; r < x2.rows(); ++r) {
    for (Index c = 0; c < x2.cols(); ++c) {
      const double x = x2(r, c);
      const std::uint8_t favored = w.white(r, c) ? y1(r, c) : flip(y1(r, c));
      double du = 0.0;
      if (quantize(s2.accumulated(x)) != favored) {
        const double t = toggle_at(s2, x, favored, cfg.toggle_epsilon);
        if ((identical && w.white(r, c)) || std::abs(t) <= cfg.t) {
          du = t;
          out.choice(r, c) = static_cast<std::uint8_t>(Candidate::Toggle2);
        }
      }
      out.du2(r, c) = du;
      out.y2(r, c) = s2.step(x, du).bit;
    }
  }
  return std::move(out).finish(0.0);
}

EmbedResult embed_dhdced(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                         const DhcedConfig& cfg) {
  require_cover_shapes(x1, x2, w, "embed_dhdced");
  const bool identical = same_pixels(x1, x2);

  PassBuffers out(x1.rows(), x1.cols());
  DiffusionState s1(x1.rows(), x1.cols(), cfg.kernel);
  DiffusionState s2(x2.rows(), x2.cols(), cfg.kernel);
  for (Index r = 0; r < x1.rows(); ++r) {
    for (Index c = 0; c < x1.cols(); ++c) {
      const double a = x1(r, c);
      const double b = x2(r, c);
      const bool white = w.white(r, c);
      const std::uint8_t n1 = quantize(s1.accumulated(a));
      const std::uint8_t n2 = quantize(s2.accumulated(b));
      double du1 = 0.0;
      double du2 = 0.0;
      if ((n1 == n2) != white) {
        // Strategy 1 moves y2 toward y1, strategy 2 moves y1 toward y2.
        const double t2 = toggle_at(s2, b, white ? n1 : flip(n1), cfg.toggle_epsilon);
        const double t1 = toggle_at(s1, a, white ? n2 : flip(n2), cfg.toggle_epsilon);
        const bool second = std::abs(t1) < std::abs(t2);
        const double smaller = second ? std::abs(t1) : std::abs(t2);
        if ((identical && white) || smaller <= cfg.t) {
          if (second) {
            du1 = t1;
            out.choice(r, c) = static_cast<std::uint8_t>(Candidate::Toggle1);
          } else {
            du2 = t2;
            out.choice(r, c) = static_cast<std::uint8_t>(Candidate::Toggle2);
          }
        }
      }
      out.du1(r, c) = du1;
      out.du2(r, c) = du2;
      out.y1(r, c) = s1.step(a, du1).bit;
      out.y2(r, c) = s2.step(b, du2).bit;
    }
  }
  return std::move(out).finish(0.0);
}

EmbedResult embed_cadeed(const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                         const EmbedConfig& cfg) {
  require_cover_shapes(x1, x2, w, "embed_cadeed");
  validate(cfg, x1.rows(), x1.cols());
  const bool force = cfg.force_identical_on_white && same_pixels(x1, x2);

  PassBuffers out(x1.rows(), x1.cols());
  DiffusionState s1(x1.rows(), x1.cols(), cfg.kernel);
  DiffusionState s2(x2.rows(), x2.cols(), cfg.kernel);
  double total = 0.0;

  struct Option {
    Candidate which;
    double du1, du2;
    std::uint8_t b1, b2;
  };

  for (Index r = 0; r < x1.rows(); ++r) {
    for (Index c = 0; c < x1.cols(); ++c) {
      const double a = x1(r, c);
      const double b = x2(r, c);
      const PixelContext ctx = pixel_context(cfg, w, r, c);
      const std::uint8_t n1 = quantize(s1.accumulated(a));
      const std::uint8_t n2 = quantize(s2.accumulated(b));
      const bool must_match = force && w.white(r, c);

      Option options[3];
      int count = 0;
      options[count++] = {Candidate::None, 0.0, 0.0, n1, n2};
      options[count++] = {Candidate::Toggle2, 0.0,
                          toggle_at(s2, b, flip(n2), cfg.toggle_epsilon), n1, flip(n2)};
      if (!cfg.single_sided) {
        options[count++] = {Candidate::Toggle1, toggle_at(s1, a, flip(n1), cfg.toggle_epsilon),
                            0.0, flip(n1), n2};
      }

      const Option* best = nullptr;
      double best_cost = kInf;
      for (int k = 0; k < count; ++k) {
        const Option& o = options[k];
        if (must_match && o.b1 != o.b2) continue;
        const double s = cost_s(o.du1, o.du2, o.b1, o.b2, ctx, cfg);
        if (s < best_cost) {
          best_cost = s;
          best = &o;
        }
      }

      total += best_cost;
      out.choice(r, c) = static_cast<std::uint8_t>(best->which);
      out.du1(r, c) = best->du1;
      out.du2(r, c) = best->du2;
      out.y1(r, c) = s1.step(a, best->du1).bit;
      out.y2(r, c) = s2.step(b, best->du2).bit;
    }
  }
  return std::move(out).finish(total);
}

Preset parse_preset(std::string_view name) {
  if (name == "deed_l2") return Preset::DeedL2;
  if (name == "seed_l2") return Preset::SeedL2;
  if (name == "cadeed_ec") return Preset::CadeedEc;
  if (name == "cadeed_ni") return Preset::CadeedNi;
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (supported: deed_l2, seed_l2, cadeed_ec, cadeed_ni)");
}

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::DeedL2: return "deed_l2";
    case Preset::SeedL2: return "seed_l2";
    case Preset::CadeedEc: return "cadeed_ec";
    case Preset::CadeedNi: return "cadeed_ni";
  }
  return "unknown";
}

EmbedConfig make_preset(Preset preset, const GrayImage& x1, const GrayImage& x2,
                        const BitImage& w, double lambda, DecodeOp op, const Kernel& kernel) {
  require_cover_shapes(x1, x2, w, "make_preset");
  EmbedConfig cfg;
  cfg.p = 2.0;
  cfg.lambda = lambda;
  cfg.op = op;
  cfg.kernel = kernel;
  cfg.alpha = 1.0;
  switch (preset) {
    case Preset::DeedL2:
      cfg.beta = 0.0;
      break;
    case Preset::SeedL2:
      cfg.beta = 0.0;
      cfg.single_sided = true;
      break;
    case Preset::CadeedEc:
      cfg.beta = 1.0;
      cfg.ep = expected_pattern(x1, x2, w, op);
      break;
    case Preset::CadeedNi:
      cfg.beta = 1.0;
      cfg.ep = expected_pattern(x1, x2, w, op);
      cfg.m1 = nvf_map(x1).map;
      cfg.m2 = nvf_map(x2).map;
      cfg.psi = importance_map(w).map;
      cfg.force_identical_on_white = true;
      break;
  }
  return cfg;
}

}  // namespace hvw
