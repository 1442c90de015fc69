#include "hvw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hvw/pnm.hpp"

namespace hvw {

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_f(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

double region_mean(const BitImage& d, Index col0, Index col1) {
  return d.pixels().middleCols(col0, col1 - col0).cast<double>().mean();
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "dhced") return Method::Dhced;
  if (name == "dhdced") return Method::Dhdced;
  if (name == "deed_l2") return Method::DeedL2;
  if (name == "seed_l2") return Method::SeedL2;
  if (name == "cadeed_ec") return Method::CadeedEc;
  if (name == "cadeed_ni") return Method::CadeedNi;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected dhced, dhdced, deed_l2, seed_l2, cadeed_ec, cadeed_ni)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Dhced: return "dhced";
    case Method::Dhdced: return "dhdced";
    case Method::DeedL2: return "deed_l2";
    case Method::SeedL2: return "seed_l2";
    case Method::CadeedEc: return "cadeed_ec";
    case Method::CadeedNi: return "cadeed_ni";
  }
  return "?";
}

bool uses_budget(Method method) { return method == Method::Dhced || method == Method::Dhdced; }

EmbedResult embed_with(Method method, const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                       double param, DecodeOp op, const Kernel& kernel) {
  if (uses_budget(method)) {
    DhcedConfig cfg;
    cfg.t = param;
    cfg.kernel = kernel;
    return method == Method::Dhced ? embed_dhced(x1, x2, w, cfg) : embed_dhdced(x1, x2, w, cfg);
  }
  Preset preset = Preset::DeedL2;
  switch (method) {
    case Method::SeedL2: preset = Preset::SeedL2; break;
    case Method::CadeedEc: preset = Preset::CadeedEc; break;
    case Method::CadeedNi: preset = Preset::CadeedNi; break;
    default: break;
  }
  return embed_cadeed(x1, x2, w, make_preset(preset, x1, x2, w, param, op, kernel));
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 8; ++k) grid.push_back(1e-4 * std::pow(10.0, k / 4.0));
  return grid;
}

std::vector<double> default_budget_grid() { return {0, 8, 16, 32, 48, 64, 96, 128}; }

std::vector<double> default_grid(Method method) {
  return uses_budget(method) ? default_budget_grid() : default_lambda_grid();
}

std::vector<SweepRow> sweep(Method method, const std::vector<NamedCover>& covers,
                            const BitImage& w, const std::vector<double>& grid, DecodeOp embed_op,
                            DecodeOp decode_op, const Kernel& kernel, unsigned threads) {
  std::vector<SweepRow> rows(covers.size() * grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const NamedCover& cover = covers[i / grid.size()];
    const double param = grid[i % grid.size()];
    const GrayImage& x = cover.image;
    const EmbedResult r = embed_with(method, x, x, w, param, embed_op, kernel);
    rows[i] = SweepRow{method, cover.name, param,
                       evaluate(x, x, w, r.y1, r.y2, r.du1, r.du2, decode_op)};
  });
  return rows;
}

std::string sweep_csv_header() { return "method,cover,param,sse,psnr_avg,nt_psnr_avg,cdr,cb_cdr"; }

std::string to_csv_row(const SweepRow& row) {
  const MetricsReport& m = row.metrics;
  return to_string(row.method) + "," + row.cover + "," + format_g(row.param) + "," +
         format_f(m.sse) + "," + format_f(m.psnr_avg) + "," + format_f(m.nt_psnr_avg) + "," +
         format_f(m.cdr) + "," + format_f(m.cb_cdr);
}

void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (!std::is_sorted(spec.grid.begin(), spec.grid.end())) {
    throw std::invalid_argument("sweep grid must be sorted ascending");
  }
  for (double v : spec.grid) {
    if (!std::isfinite(v) || v < 0) throw std::invalid_argument("sweep grid values must be finite and >= 0");
  }
  if (spec.covers.empty()) throw std::invalid_argument("sweep needs at least one cover");
  if (spec.output.empty()) throw std::invalid_argument("sweep needs an output path");
  kernel_lookup(spec.kernel);
}

void run_sweep(const SweepSpec& spec) {
  validate(spec);
  const BitImage w = load_bits(spec.watermark);
  std::vector<NamedCover> covers;
  for (const auto& path : spec.covers) covers.push_back({path.stem().string(), load_gray(path)});

  const auto rows = sweep(spec.method, covers, w, spec.grid, spec.op,
                          spec.decode_op.value_or(spec.op), kernel_lookup(spec.kernel),
                          sweep_threads());

  std::filesystem::path tmp = spec.output;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << sweep_csv_header() << '\n';
      for (const auto& row : rows) out << to_csv_row(row) << '\n';
      if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, spec.output);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("HVW_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double AnalysisRow::deviation_white() const { return std::abs(empirical_white - predicted_white); }
double AnalysisRow::deviation_black() const { return std::abs(empirical_black - predicted_black); }

std::vector<AnalysisRow> validate_analysis(const std::vector<int>& a_values, DecodeOp op,
                                           double lambda, Index size, const Kernel& kernel) {
  if (size < 2) throw std::invalid_argument("analysis size must be >= 2");
  const Index half = size / 2;
  Plane<std::uint8_t> wp(size, size);
  wp.leftCols(half).setConstant(kWhite);
  wp.rightCols(size - half).setConstant(kBlack);
  const BitImage w(std::move(wp));

  std::vector<AnalysisRow> rows;
  for (int a : a_values) {
    if (a < 0 || a > 255) throw std::invalid_argument("A must be in 0..255");
    const GrayImage x = GrayImage::constant(size, size, static_cast<std::uint8_t>(a));
    const EmbedResult r = embed_cadeed(x, x, w, make_preset(Preset::CadeedEc, x, x, w, lambda, op, kernel));
    const BitImage d = decode(r.y1, r.y2, op);
    AnalysisRow row;
    row.a = a;
    row.op = op;
    row.predicted_white = expected_value(a, a, true, op);
    row.predicted_black = expected_value(a, a, false, op);
    row.empirical_white = region_mean(d, 0, half);
    row.empirical_black = region_mean(d, half, size);
    rows.push_back(row);
  }
  return rows;
}

std::string analysis_report(const std::vector<AnalysisRow>& rows) {
  std::ostringstream s;
  s << "op,A,region,predicted,empirical,deviation\n";
  for (const auto& r : rows) {
    s << to_string(r.op) << ',' << r.a << ",white," << format_f(r.predicted_white) << ','
      << format_f(r.empirical_white) << ',' << format_f(r.deviation_white()) << '\n';
    s << to_string(r.op) << ',' << r.a << ",black," << format_f(r.predicted_black) << ','
      << format_f(r.empirical_black) << ',' << format_f(r.deviation_black()) << '\n';
  }
  return s.str();
}

void write_real_csv(const std::filesystem::path& path, const RealMap& map) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Index r = 0; r < map.rows(); ++r) {
    for (Index c = 0; c < map.cols(); ++c) {
      if (c) out << ',';
      out << format_g(map(r, c));
    }
    out << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

RealMap read_real_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0) {
        throw std::runtime_error(path.string() + ": bad number at line " + std::to_string(rows.size() + 1));
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ": ragged row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty map");
  RealMap map(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < map.rows(); ++r) {
    for (Index c = 0; c < map.cols(); ++c) map(r, c) = rows[r][c];
  }
  return map;
}

}  // namespace hvw
