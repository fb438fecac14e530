#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinor/errors.hpp"
#include "spinor/figures.hpp"
#include "spinor/states.hpp"
#include "spinor/verify.hpp"
#include "spinor/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitCapacityError = 3;

struct CliOptions {
  spinor::FigureConfig fig;
  std::string verify_suite = "all";
  double chi_single = std::numbers::pi / 4.0;
  bool chi_set = false;
  std::string dump_path;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--n", opt.fig.N, "duplication factor N")->check(CLI::PositiveNumber);
  cmd->add_option("--chi-points", opt.fig.chi_points, "number of chi samples")
      ->check(CLI::Range(2, 100000));
  auto* chi = cmd->add_option("--chi", opt.chi_single, "single chi value (radians)");
  chi->each([&opt](const std::string&) { opt.chi_set = true; });
  cmd->add_option("--grid", opt.fig.grid, "angular grid resolution")->check(CLI::Range(2, 4096));
  cmd->add_option("--format", opt.fig.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.fig.out_dir, "output directory");
  cmd->add_option("--seed", opt.fig.seed, "random seed");
  cmd->add_option("--mc-samples", opt.fig.mc_samples, "Monte Carlo sample count")
      ->check(CLI::Range(static_cast<std::int64_t>(1000), static_cast<std::int64_t>(100000000)));
  cmd->add_flag("--quick", opt.fig.quick, "reduced sizes for a fast pass");
  cmd->add_flag("--extended-precision", opt.fig.extended_precision,
                "exact coupling-coefficient path (lifts the Wigner cap)");
  cmd->add_option("--cap", opt.fig.amplitude_cap, "amplitude count cap");
  cmd->add_option("--dump-state", opt.dump_path,
                  "also write the working state as JSON to this path");
}

void maybe_dump_state(const CliOptions& opt) {
  if (opt.dump_path.empty()) return;
  const double chi = opt.chi_set ? opt.chi_single : std::numbers::pi / 4.0;
  const spinor::SpinorState state =
      spinor::build_schmidt_bipartite(chi, opt.fig.N, opt.fig.amplitude_cap);
  const std::filesystem::path parent = std::filesystem::path(opt.dump_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(opt.dump_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + opt.dump_path);
  f << spinor::state_to_json(state).dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinor-state toolkit: figure data products and verification sweeps"};
  app.set_version_flag("--version", spinor::kVersion);
  app.require_subcommand(1);

  CliOptions opt;

  auto* fig2 = app.add_subcommand("fig2", "chi sweep of exact moments and approximations");
  add_common(fig2, opt);
  auto* fig4 = app.add_subcommand("fig4", "Wigner function panels");
  add_common(fig4, opt);
  auto* fig5 = app.add_subcommand("fig5", "entanglement sweep");
  add_common(fig5, opt);
  auto* fig6 = app.add_subcommand("fig6", "logical error curves");
  add_common(fig6, opt);

  auto* verify = app.add_subcommand("verify", "run the invariant and oracle suites");
  add_common(verify, opt);
  verify->add_option("suite", opt.verify_suite, "suite name or 'all'");

  auto* dump = app.add_subcommand("dump-state", "write a state as JSON");
  add_common(dump, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  // per-command duplication default: the Wigner panels and state dumps run
  // at N = 10, the sweeps at N = 50
  CLI::App* active = app.get_subcommands().front();
  if (active->count("--n") == 0) opt.fig.N = (fig4->parsed() || dump->parsed()) ? 10 : 50;

  try {
    std::vector<std::string> files;
    if (fig2->parsed()) {
      files = spinor::run_fig2(opt.fig);
    } else if (fig4->parsed()) {
      if (opt.chi_set) opt.fig.chi = opt.chi_single;
      files = spinor::run_fig4(opt.fig);
    } else if (fig5->parsed()) {
      files = spinor::run_fig5(opt.fig);
    } else if (fig6->parsed()) {
      files = spinor::run_fig6(opt.fig);
    } else if (verify->parsed()) {
      const auto results =
          spinor::run_verification(opt.verify_suite, opt.fig.quick, opt.fig.seed);
      int failures = 0;
      for (const auto& r : results) {
        std::printf("[%s] %-60s %s\n", r.pass ? "PASS" : "FAIL",
                    (r.suite + ": " + r.name).c_str(), r.pass ? "" : r.detail.c_str());
        if (!r.pass) ++failures;
      }
      std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures,
                  results.size());
      const nlohmann::json j = spinor::verification_to_json(results);
      std::string report_path = "verify.json";
      if (!opt.fig.out_dir.empty() && opt.fig.out_dir != ".") {
        std::filesystem::create_directories(opt.fig.out_dir);
        report_path = opt.fig.out_dir + "/verify.json";
      }
      std::ofstream f(report_path, std::ios::binary);
      f << j.dump(2) << "\n";
      maybe_dump_state(opt);
      return failures == 0 ? kExitOk : kExitVerifyFailure;
    } else if (dump->parsed()) {
      if (opt.dump_path.empty())
        opt.dump_path = (opt.fig.out_dir == "." ? std::string() : opt.fig.out_dir + "/") +
                        "state.json";
      if (!opt.chi_set) opt.chi_single = std::numbers::pi / 4.0;
      opt.chi_set = true;
      maybe_dump_state(opt);
      std::printf("wrote %s\n", opt.dump_path.c_str());
      return kExitOk;
    }
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    maybe_dump_state(opt);
  } catch (const spinor::CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n(reduce --n or raise --cap)\n", e.what());
    return kExitCapacityError;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerifyFailure;
  }
  return kExitOk;
}
