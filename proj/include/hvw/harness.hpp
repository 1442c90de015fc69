#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hvw/analysis.hpp"
#include "hvw/embed.hpp"
#include "hvw/halftone.hpp"
#include "hvw/image.hpp"
#include "hvw/metrics.hpp"

namespace hvw {

enum class Method { Dhced, Dhdced, DeedL2, SeedL2, CadeedEc, CadeedNi };

Method parse_method(std::string_view name);
std::string to_string(Method method);

/// dhced and dhdced are parameterized by the toggle budget T, the rest by lambda.
bool uses_budget(Method method);

/// One embed with `param` read as T or lambda depending on the method.
EmbedResult embed_with(Method method, const GrayImage& x1, const GrayImage& x2, const BitImage& w,
                       double param, DecodeOp op, const Kernel& kernel);

/// 1e-4 .. 1e-2, four points per decade.
std::vector<double> default_lambda_grid();
std::vector<double> default_budget_grid();
std::vector<double> default_grid(Method method);

struct NamedCover {
  std::string name;
  GrayImage image;
};

struct SweepRow {
  Method method;
  std::string cover;
  double param = 0.0;
  MetricsReport metrics;
};

/// Sweep points in memory. Each cover is embedded against itself (X1 = X2) with
/// `embed_op` in the cost and scored after decoding with `decode_op`.
/// Rows come back cover-major, grid order within a cover.
std::vector<SweepRow> sweep(Method method, const std::vector<NamedCover>& covers,
                            const BitImage& w, const std::vector<double>& grid, DecodeOp embed_op,
                            DecodeOp decode_op, const Kernel& kernel, unsigned threads);

std::string sweep_csv_header();
std::string to_csv_row(const SweepRow& row);

struct SweepSpec {
  Method method = Method::DeedL2;
  std::vector<double> grid;
  std::vector<std::filesystem::path> covers;
  std::filesystem::path watermark;
  DecodeOp op = DecodeOp::Xnor;
  /// Defaults to `op`.
  std::optional<DecodeOp> decode_op;
  std::string kernel = "steinberg";
  std::filesystem::path output;
};

void validate(const SweepSpec& spec);

/// Runs the sweep and writes the CSV atomically; on failure nothing is left at `output`.
void run_sweep(const SweepSpec& spec);

/// HVW_THREADS if set and positive, else the hardware concurrency (at least 1).
unsigned sweep_threads();

struct AnalysisRow {
  int a = 0;
  DecodeOp op = DecodeOp::Xnor;
  double predicted_white = 0.0;
  double empirical_white = 0.0;
  double predicted_black = 0.0;
  double empirical_black = 0.0;
  double deviation_white() const;
  double deviation_black() const;
};

inline constexpr double kAnalysisLambda = 0.03;

/// For each A: X1 = X2 = A (size x size), W white on the left half and black on
/// the right, cadeed_ec at `lambda`, region means of the decoded image.
std::vector<AnalysisRow> validate_analysis(const std::vector<int>& a_values, DecodeOp op,
                                           double lambda = kAnalysisLambda, Index size = 128,
                                           const Kernel& kernel = kernel_lookup("steinberg"));

std::string analysis_report(const std::vector<AnalysisRow>& rows);

/// Real maps as CSV, one image row per line, values printed round-trip exact.
void write_real_csv(const std::filesystem::path& path, const RealMap& map);
RealMap read_real_csv(const std::filesystem::path& path);

}  // namespace hvw
