#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinor/states.hpp"

namespace spinor {

/// Common knobs of the figure commands; defaults follow the CLI.
struct FigureConfig {
  int N = 50;
  int chi_points = 199;
  std::optional<double> chi;  // single-value override where it applies
  int grid = 64;              // Wigner angular resolution
  std::string format = "csv";
  std::string out_dir = ".";
  std::uint64_t seed = 0xC0FFEE;
  std::int64_t mc_samples = 100000;
  bool quick = false;
  bool extended_precision = false;
  std::uint64_t amplitude_cap = kDefaultAmplitudeCap;
};

/// Ordered key/value metadata plus named double columns; serializes to CSV
/// (#-prefixed metadata block, header row, rows) or an equivalent JSON
/// document. Formatting is fixed so identical configs give identical bytes.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void add_row(const std::vector<double>& row);
  void write(const std::string& path_base, const std::string& format) const;
  std::string csv_string() const;
  std::string json_string() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

/// chi sweeps of the exact spinor moments, their large-N approximations and
/// the product-state curves. One file: fig2.
std::vector<std::string> run_fig2(const FigureConfig& config);

/// Wigner panels: two fixed-angle slices, their projected companion states,
/// the theta marginal, and the traced-out state. Files: fig4a..fig4f.
std::vector<std::string> run_fig4(const FigureConfig& config);

/// Entropy, covariance-criterion minimum eigenvalue and witness sweeps.
std::vector<std::string> run_fig5(const FigureConfig& config);

/// Logical-error curves with the Monte Carlo cross-check. File: fig6.
std::vector<std::string> run_fig6(const FigureConfig& config);

}  // namespace spinor
