#include "spinor/figures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "spinor/closed_forms.hpp"
#include "spinor/entanglement.hpp"
#include "spinor/error_models.hpp"
#include "spinor/parallel.hpp"
#include "spinor/version.hpp"
#include "spinor/wigner.hpp"

namespace spinor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi / 4.0;

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

Eigen::VectorXd chi_grid(int points) {
  // Closed grid over [0, pi/2]; the dual-path closed forms cover the ends.
  if (points < 2) throw std::invalid_argument("chi grid needs at least 2 points");
  Eigen::VectorXd g(points);
  for (int i = 0; i < points; ++i) g[i] = (kPi / 2.0) * i / (points - 1);
  return g;
}

void stamp(Table& t, const FigureConfig& config) {
  t.meta("version", kVersion);
  t.meta("seed", std::to_string(config.seed));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void Table::meta(const std::string& key, double value) {
  meta_.emplace_back(key, format_double(value));
}

void Table::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("Table: row width mismatch");
  rows_.push_back(row);
}

std::string Table::csv_string() const {
  std::string out;
  for (const auto& [k, v] : meta_) out += "# " + k + " = " + v + "\n";
  for (size_t c = 0; c < columns_.size(); ++c) {
    out += columns_[c];
    out += c + 1 < columns_.size() ? ',' : '\n';
  }
  for (const auto& row : rows_) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += format_double(row[c]);
      out += c + 1 < row.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string Table::json_string() const {
  nlohmann::json j;
  for (const auto& [k, v] : meta_) j["meta"][k] = v;
  j["columns"] = columns_;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v))
        r.push_back(v);
      else
        r.push_back(nullptr);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

void Table::write(const std::string& path_base, const std::string& format) const {
  const bool json = format == "json";
  const std::string path = path_base + (json ? ".json" : ".csv");
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << (json ? json_string() : csv_string());
  if (!f) throw std::runtime_error("failed writing " + path);
}

// ---------------------------------------------------------------------------

std::vector<std::string> run_fig2(const FigureConfig& config) {
  const int N = config.N;
  const Eigen::VectorXd grid = chi_grid(config.quick ? 51 : config.chi_points);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Table t({"chi", "sz_over_N", "sz_largeN_over_N", "sz_scs_over_N",
           "var_sx", "var_sx_approx", "var_sx_scs",
           "var_sz", "var_sz_approx", "var_sz_scs",
           "cov_sxsx", "cov_sxsx_approx", "cov_sxsx_scs",
           "cov_sysy", "cov_sysy_approx", "cov_sysy_scs",
           "cov_szsz", "cov_szsz_approx", "cov_szsz_scs",
           "var_limit"});
  t.meta("figure", "fig2");
  t.meta("N", std::to_string(N));
  stamp(t, config);

  const double limit = limiting_values(N).var_limit;
  std::vector<std::vector<double>> rows(static_cast<size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t i) {
    const double chi = grid[i];
    BipartiteParams p(chi, N);
    const double c2 = std::cos(2.0 * chi);
    const double s2 = std::sin(2.0 * chi);
    const double sz = exact_sz(p);
    const double x2 = exact_sx2(p);
    const double xx = exact_sxsx(p);
    const double vz = var_sz(p);

    double ax = nan, az = nan, axx = nan;
    if (std::abs(chi - kQuarter) > 0.1 && N >= 20) {
      const Matrix6d A = approx_covariance_matrix(p);
      ax = A(0, 0);
      az = A(2, 2);
      axx = A(0, 3);
    }
    rows[static_cast<size_t>(i)] = {
        chi,
        sz / N,
        c2 == 0.0 ? 0.0 : (c2 > 0.0 ? 1.0 : -1.0),
        c2,  // product-state value N cos(2chi), normalized
        x2, ax, static_cast<double>(N),
        vz, az, N * s2 * s2,
        xx, axx, N * s2,
        -xx, axx == axx ? -axx : nan, -N * s2,
        vz, az, N * s2 * s2,
        limit};
  });
  for (auto& r : rows) t.add_row(r);

  const std::string base = join_path(config.out_dir, "fig2");
  t.write(base, config.format);
  return {base + (config.format == "json" ? ".json" : ".csv")};
}

// ---------------------------------------------------------------------------

namespace {

std::string write_slice_table(const FigureConfig& config, const std::string& name,
                              const WignerSlice& slice, const AngularGrid& grid, double chi,
                              const std::string& panel_kind) {
  Table t({"theta1", "phi1", "W"});
  t.meta("figure", name);
  t.meta("panel", panel_kind);
  t.meta("N", std::to_string(config.N));
  t.meta("chi", chi);
  if (slice.has_fixed) {
    t.meta("theta2", slice.fixed_theta);
    t.meta("phi2", slice.fixed_phi);
  }
  t.meta("convention_tag", slice.convention_tag);
  stamp(t, config);
  for (Eigen::Index i = 0; i < grid.theta.size(); ++i)
    for (Eigen::Index j = 0; j < grid.phi.size(); ++j)
      t.add_row({grid.theta[i], grid.phi[j], slice.values(i, j)});
  const std::string base = join_path(config.out_dir, name);
  t.write(base, config.format);
  return base + (config.format == "json" ? ".json" : ".csv");
}

}  // namespace

std::vector<std::string> run_fig4(const FigureConfig& config) {
  const int N = config.N;
  const int res = config.quick ? std::min(config.grid, 32) : config.grid;
  const AngularGrid grid = AngularGrid::regular(res, res);
  WignerOptions options;
  options.exact_cg = config.extended_precision;

  const double chi_slices = kQuarter;
  const SpinorState epr = build_schmidt_bipartite(chi_slices, N, config.amplitude_cap);
  std::vector<std::string> files;

  const std::pair<double, double> fixed[2] = {{kPi / 2.0, 0.0}, {kPi / 4.0, kPi / 2.0}};
  const char* slice_names[2] = {"fig4a", "fig4c"};
  const char* proj_names[2] = {"fig4b", "fig4d"};
  for (int s = 0; s < 2; ++s) {
    WignerSlice slice =
        wigner_bipartite_slice(epr, grid, fixed[s].first, fixed[s].second, options);
    files.push_back(
        write_slice_table(config, slice_names[s], slice, grid, chi_slices, "bipartite_slice"));

    const SpinorState projected =
        project_second_ensemble(epr, fixed[s].first, fixed[s].second);
    WignerSlice pw = wigner_unipartite(projected, grid, options);
    files.push_back(
        write_slice_table(config, proj_names[s], pw, grid, chi_slices, "projected_state"));
  }

  {
    Eigen::MatrixXd marg = wigner_marginal_theta(epr, grid, options);
    Table t({"theta1", "theta2", "W"});
    t.meta("figure", "fig4e");
    t.meta("panel", "theta_marginal");
    t.meta("N", std::to_string(N));
    t.meta("chi", chi_slices);
    t.meta("convention_tag", "paper-literal");
    stamp(t, config);
    for (Eigen::Index i = 0; i < grid.theta.size(); ++i)
      for (Eigen::Index j = 0; j < grid.theta.size(); ++j)
        t.add_row({grid.theta[i], grid.theta[j], marg(i, j)});
    const std::string base = join_path(config.out_dir, "fig4e");
    t.write(base, config.format);
    files.push_back(base + (config.format == "json" ? ".json" : ".csv"));
  }

  {
    const double chi_traced = config.chi.value_or(kPi / 8.0);
    ReducedState rho = traced_rho1(BipartiteParams(chi_traced, N));
    WignerSlice tw = wigner_unipartite(rho, N, grid, options);
    files.push_back(write_slice_table(config, "fig4f", tw, grid, chi_traced, "traced_state"));
  }
  return files;
}

// ---------------------------------------------------------------------------

std::vector<std::string> run_fig5(const FigureConfig& config) {
  const int N = config.N;
  const Eigen::VectorXd grid = chi_grid(config.quick ? 51 : config.chi_points);

  Table t({"chi", "entropy_spinor_norm", "entropy_scs_norm", "ppt_min_eig_spinor",
           "ppt_min_eig_scs", "ht_spinor", "ht_scs"});
  t.meta("figure", "fig5");
  t.meta("N", std::to_string(N));
  stamp(t, config);

  const double emax_spinor = std::log2(static_cast<double>(N) + 1.0);
  std::vector<std::vector<double>> rows(static_cast<size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t i) {
    const double chi = grid[i];
    BipartiteParams p(chi, N);

    Eigen::Matrix<double, 6, 1> means_spinor = Eigen::Matrix<double, 6, 1>::Zero();
    means_spinor[2] = means_spinor[5] = exact_sz(p);
    const double ppt_spinor =
        ppt_min_eigenvalue(exact_covariance_matrix(p), omega_from_means(means_spinor));

    Eigen::Matrix<double, 6, 1> means_scs = Eigen::Matrix<double, 6, 1>::Zero();
    means_scs[2] = means_scs[5] = N * std::cos(2.0 * chi);
    const double ppt_scs =
        ppt_min_eigenvalue(scs_covariance_matrix(p), omega_from_means(means_scs));

    rows[static_cast<size_t>(i)] = {chi,
                                    schmidt_entropy(p) / emax_spinor,
                                    scs_entropy(p) / N,
                                    ppt_spinor,
                                    ppt_scs,
                                    hoffman_takeuchi_spinor(p),
                                    hoffman_takeuchi_scs(p)};
  });
  for (auto& r : rows) t.add_row(r);

  const std::string base = join_path(config.out_dir, "fig5");
  t.write(base, config.format);
  return {base + (config.format == "json" ? ".json" : ".csv")};
}

// ---------------------------------------------------------------------------

std::vector<std::string> run_fig6(const FigureConfig& config) {
  const int N = config.N;
  const int points = config.quick ? 51 : 199;
  const std::int64_t samples = config.quick ? 10000 : config.mc_samples;

  Table t({"epsilon", "eps_L_m1_exact", "eps_L_m1_approx", "eps_L_m2_exact", "eps_L_m2_approx",
           "eps_L_mc", "mc_ci_low", "mc_ci_high"});
  t.meta("figure", "fig6");
  t.meta("N", std::to_string(N));
  t.meta("samples", std::to_string(samples));
  stamp(t, config);

  std::vector<std::vector<double>> rows(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    // open grid in (0, 1/2); both laws are defined everywhere on it
    const double eps = 0.5 * (i + 1) / (points + 1);
    const LogicalError m1 = logical_error_m1(eps, N);
    const LogicalError m2 = logical_error_m2(eps, N);
    const MonteCarloResult mc =
        monte_carlo_majority(eps, N, samples, config.seed + static_cast<std::uint64_t>(i));
    rows[static_cast<size_t>(i)] = {eps,     m1.exact, m1.approx,  m2.exact,
                                    m2.approx, mc.estimate, mc.ci_low, mc.ci_high};
  }
  for (auto& r : rows) t.add_row(r);

  const std::string base = join_path(config.out_dir, "fig6");
  t.write(base, config.format);
  return {base + (config.format == "json" ? ".json" : ".csv")};
}

}  // namespace spinor
