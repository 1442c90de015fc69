#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hvw/analysis.hpp"
#include "hvw/attacks.hpp"
#include "hvw/embed.hpp"
#include "hvw/halftone.hpp"
#include "hvw/harness.hpp"
#include "hvw/metrics.hpp"
#include "hvw/pnm.hpp"
#include "hvw/weights.hpp"

namespace fs = std::filesystem;
using namespace hvw;

namespace {

// Failure with a category for the `error[<kind>]:` prefix.
struct CliError : std::runtime_error {
  CliError(std::string kind, const std::string& msg) : std::runtime_error(msg), kind(std::move(kind)) {}
  std::string kind;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("io", "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw CliError("io", "cannot write '" + path.string() + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CliError("usage", "bad number '" + item + "' in list");
  }
  if (out.empty()) throw CliError("usage", "empty list");
  return out;
}

GrayImage map_to_gray(const RealMap& map, double lo, double hi) {
  return round_to_gray((map - lo) * (255.0 / (hi - lo)));
}

struct Common {
  std::string op = "xnor";
  std::string kernel = "steinberg";
  std::string out;
};

void add_op(CLI::App* cmd, Common& c) {
  cmd->add_option("--op", c.op, "decode operation")->check(CLI::IsMember({"and", "xnor"}, CLI::ignore_case));
}

void add_kernel(CLI::App* cmd, Common& c) {
  cmd->add_option("--kernel", c.kernel, "error-diffusion kernel")
      ->check(CLI::IsMember({"steinberg", "jarvis"}, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-diffusion halftone visual watermarking"};
  app.require_subcommand(1);
  Common c;

  // halftone
  auto* halftone = app.add_subcommand("halftone", "error-diffuse a PGM to a PBM");
  std::string ht_in;
  halftone->add_option("input", ht_in)->required();
  add_kernel(halftone, c);
  halftone->add_option("--out", c.out)->required();

  // embed
  auto* embed = app.add_subcommand("embed", "embed W into a pair of covers");
  std::string method = "deed_l2", x1_path, x2_path, w_path;
  double lambda = 0.0016, budget = 32;
  bool dump_du = false;
  embed->add_option("--method", method)->required();
  embed->add_option("--x1", x1_path)->required();
  embed->add_option("--x2", x2_path, "second cover (defaults to --x1)");
  embed->add_option("--w", w_path, "watermark")->required();
  embed->add_option("--lambda", lambda);
  embed->add_option("--T", budget, "toggle budget for dhced/dhdced");
  embed->add_flag("--dump-du", dump_du, "also write du1.csv and du2.csv");
  add_op(embed, c);
  add_kernel(embed, c);
  embed->add_option("--out", c.out, "output directory")->required();

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "overlay two stego halftones");
  std::string y1_path, y2_path, dec_w;
  decode_cmd->add_option("y1", y1_path)->required();
  decode_cmd->add_option("y2", y2_path)->required();
  decode_cmd->add_option("--w", dec_w, "reference watermark; prints CDR and CB-CDR");
  add_op(decode_cmd, c);
  decode_cmd->add_option("--out", c.out)->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "full metrics report for an embed");
  std::string m_x1, m_x2, m_w, m_y1, m_y2, m_du1, m_du2;
  bool as_csv = false;
  metrics_cmd->add_option("--x1", m_x1)->required();
  metrics_cmd->add_option("--x2", m_x2);
  metrics_cmd->add_option("--w", m_w)->required();
  metrics_cmd->add_option("--y1", m_y1)->required();
  metrics_cmd->add_option("--y2", m_y2)->required();
  metrics_cmd->add_option("--du1", m_du1)->required();
  metrics_cmd->add_option("--du2", m_du2)->required();
  metrics_cmd->add_flag("--csv", as_csv);
  add_op(metrics_cmd, c);

  // weights
  auto* weights_cmd = app.add_subcommand("weights", "export NVF, IF or EP maps as PGM");
  std::string kind;
  std::vector<std::string> weight_inputs;
  int window = 3;
  double nvf_d = 75.0;
  weights_cmd->add_option("kind", kind)->required()->check(CLI::IsMember({"nvf", "if", "ep"}));
  weights_cmd->add_option("inputs", weight_inputs, "nvf: cover; if: watermark; ep: x1 x2 w")->required();
  weights_cmd->add_option("--window", window);
  weights_cmd->add_option("--D", nvf_d);
  add_op(weights_cmd, c);
  weights_cmd->add_option("--out", c.out)->required();

  // attack
  auto* attack = app.add_subcommand("attack", "degrade a stego halftone");
  std::string attack_kind, attack_in, rect_text, config_path;
  int fill = 0, count = 5, radius = 8;
  std::uint64_t seed = 0;
  ChannelParams channel;
  attack->add_option("kind", attack_kind)->required()->check(CLI::IsMember({"crop", "mark", "printscan"}));
  attack->add_option("input", attack_in)->required();
  attack->add_option("--rect", rect_text, "crop: row,col,height,width");
  attack->add_option("--fill", fill)->check(CLI::IsMember({0, 255}));
  attack->add_option("--count", count);
  attack->add_option("--radius", radius);
  attack->add_option("--seed", seed);
  attack->add_option("--config", config_path, "printscan: key=value channel file");
  auto* blur_opt = attack->add_option("--blur", channel.blur_sigma);
  auto* noise_opt = attack->add_option("--noise", channel.noise_sigma);
  auto* angle_opt = attack->add_option("--angle", channel.rotate_degrees);
  auto* scale_opt = attack->add_option("--scale", channel.scale);
  auto* thr_opt = attack->add_option("--threshold", channel.rebinarize_threshold);
  attack->add_option("--out", c.out)->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "lambda or T sweep to CSV");
  std::string grid_text, decode_op_text;
  std::vector<std::string> covers;
  std::string sweep_w;
  sweep_cmd->add_option("--method", method)->required();
  sweep_cmd->add_option("--covers", covers)->required()->delimiter(',');
  sweep_cmd->add_option("--w", sweep_w)->required();
  sweep_cmd->add_option("--grid", grid_text, "comma-separated ascending values (default per method)");
  sweep_cmd->add_option("--decode-op", decode_op_text, "decode for scoring (defaults to --op)")
      ->check(CLI::IsMember({"and", "xnor"}, CLI::ignore_case));
  add_op(sweep_cmd, c);
  add_kernel(sweep_cmd, c);
  sweep_cmd->add_option("--out", c.out)->required();

  // validate-analysis
  auto* va = app.add_subcommand("validate-analysis", "constant-cover check of the expected decoded values");
  std::string a_text = "64,128,192";
  double va_lambda = kAnalysisLambda;
  Index va_size = 128;
  va->add_option("--A", a_text, "comma-separated intensities");
  va->add_option("--lambda", va_lambda);
  va->add_option("--size", va_size);
  add_op(va, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 2;
  }

  try {
    const DecodeOp op = parse_decode_op(c.op);
    const Kernel kernel = kernel_lookup(c.kernel);

    if (*halftone) {
      write_pnm_file(c.out, error_diffuse(load_gray(ht_in), kernel));
    } else if (*embed) {
      const GrayImage x1 = load_gray(x1_path);
      const GrayImage x2 = x2_path.empty() ? x1 : load_gray(x2_path);
      const BitImage w = load_bits(w_path);
      const Method m = parse_method(method);
      const EmbedResult r = embed_with(m, x1, x2, w, uses_budget(m) ? budget : lambda, op, kernel);
      const fs::path dir(c.out);
      fs::create_directories(dir);
      write_pnm_file(dir / "y1.pbm", r.y1);
      write_pnm_file(dir / "y2.pbm", r.y2);
      if (dump_du) {
        write_real_csv(dir / "du1.csv", r.du1);
        write_real_csv(dir / "du2.csv", r.du2);
      }
      const MetricsReport rep = evaluate(x1, x2, w, r.y1, r.y2, r.du1, r.du2, op);
      write_text(dir / "metrics.csv", MetricsReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
      std::cout << rep.to_text();
    } else if (*decode_cmd) {
      const BitImage d = decode(load_bits(y1_path), load_bits(y2_path), op);
      write_pnm_file(c.out, d);
      if (!dec_w.empty()) {
        const BitImage w = load_bits(dec_w);
        std::printf("CDR %.6f\n", cdr(w, d));
        std::printf("CB-CDR %.6f\n", cb_cdr(w, d, importance_map(w).map));
      }
    } else if (*metrics_cmd) {
      const GrayImage x1 = load_gray(m_x1);
      const GrayImage x2 = m_x2.empty() ? x1 : load_gray(m_x2);
      const MetricsReport rep = evaluate(x1, x2, load_bits(m_w), load_bits(m_y1), load_bits(m_y2),
                                         read_real_csv(m_du1), read_real_csv(m_du2), op);
      if (as_csv) {
        std::cout << MetricsReport::csv_header() << "\n" << rep.to_csv_row() << "\n";
      } else {
        std::cout << rep.to_text();
      }
    } else if (*weights_cmd) {
      const std::size_t need = kind == "ep" ? 3 : 1;
      if (weight_inputs.size() != need) {
        throw CliError("usage", "weights " + kind + " takes " + std::to_string(need) + " input(s)");
      }
      GrayImage out;
      if (kind == "nvf") {
        const WeightMap v = nvf_map(load_gray(weight_inputs[0]), NvfParams{window, nvf_d});
        if (v.degenerate) std::cerr << "warning: cover has no local variance; NVF is all ones\n";
        out = map_to_gray(v.map, 0.0, 1.0);
      } else if (kind == "if") {
        const WeightMap g = importance_map(load_bits(weight_inputs[0]), IfParams{window});
        if (g.degenerate) std::cerr << "warning: watermark has no local variance; IF is all ones\n";
        out = map_to_gray(g.map, 1.0, 2.0);
      } else {
        out = round_to_gray(expected_pattern(load_gray(weight_inputs[0]), load_gray(weight_inputs[1]),
                                             load_bits(weight_inputs[2]), op, window)
                                .values);
      }
      write_pnm_file(c.out, out);
    } else if (*attack) {
      const BitImage y = load_bits(attack_in);
      BitImage out;
      if (attack_kind == "crop") {
        const auto v = parse_list(rect_text.empty() ? std::string("x") : rect_text);
        if (v.size() != 4) throw CliError("usage", "--rect needs row,col,height,width");
        out = crop_attack(y, Rect{Index(v[0]), Index(v[1]), Index(v[2]), Index(v[3])},
                          static_cast<std::uint8_t>(fill));
      } else if (attack_kind == "mark") {
        out = mark_attack(y, count, radius, seed);
      } else {
        ChannelParams p;
        if (!config_path.empty()) p = parse_channel_params(read_text(config_path));
        if (*blur_opt) p.blur_sigma = channel.blur_sigma;
        if (*noise_opt) p.noise_sigma = channel.noise_sigma;
        if (*angle_opt) p.rotate_degrees = channel.rotate_degrees;
        if (*scale_opt) p.scale = channel.scale;
        if (*thr_opt) p.rebinarize_threshold = channel.rebinarize_threshold;
        if (attack->count("--seed")) p.rng_seed = seed;
        out = print_scan_sim(y, p);
      }
      write_pnm_file(c.out, out);
    } else if (*sweep_cmd) {
      SweepSpec spec;
      spec.method = parse_method(method);
      spec.grid = grid_text.empty() ? default_grid(spec.method) : parse_list(grid_text);
      for (const auto& p : covers) spec.covers.emplace_back(p);
      spec.watermark = sweep_w;
      spec.op = op;
      if (!decode_op_text.empty()) spec.decode_op = parse_decode_op(decode_op_text);
      spec.kernel = c.kernel;
      spec.output = c.out;
      run_sweep(spec);
    } else if (*va) {
      std::vector<int> a_values;
      for (double a : parse_list(a_text)) {
        if (a != std::floor(a)) throw CliError("usage", "A values must be integers");
        a_values.push_back(static_cast<int>(a));
      }
      std::cout << analysis_report(validate_analysis(a_values, op, va_lambda, va_size));
    }
  } catch (const CliError& e) {
    std::cerr << "error[" << e.kind << "]: " << e.what() << "\n";
    return 1;
  } catch (const PnmError& e) {
    std::cerr << "error[parse]: " << e.what() << "\n";
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "error[dimension]: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error[io]: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[value]: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error[value]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[io]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
