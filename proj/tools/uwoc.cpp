// uwoc: outage analysis of multi-aperture underwater optical links.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "uwoc/experiments.hpp"

namespace fs = std::filesystem;
using namespace uwoc;
using namespace uwoc::experiments;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  bool svg = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  bool paper_scale = false;
  bool dump_config = false;
};

ExperimentConfig resolve(const Options& opt) {
  if (!opt.config_path.empty() && !opt.preset.empty()) {
    throw ConfigError("--preset: cannot be combined with --config");
  }
  ExperimentConfig cfg = !opt.config_path.empty() ? load_config(opt.config_path)
                         : !opt.preset.empty()    ? preset_config(opt.preset)
                                                  : ExperimentConfig{};
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.paper_scale) cfg.trials = std::max(cfg.trials, kPaperScaleTrials);
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// More than 10% nan points is a failure.
int failure_code(int failed, int points) {
  if (failed > 0) std::cerr << "warning: " << failed << " of " << points << " points failed\n";
  return failed * 10 > points ? kExitValidation : kExitOk;
}

int cmd_curve(const ExperimentConfig& cfg, const Options& opt) {
  const auto run = run_curves(cfg);
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  std::ostringstream csv;
  write_curve_csv(csv, run.curves);
  write_file(dir / "curve.csv", csv.str());
  write_file(dir / "curve.meta.json", run.meta_json + "\n");
  if (opt.svg) {
    write_file(dir / "curve.svg",
               render_svg("Outage probability, " + to_string(cfg.scheme), "P_t (dBm)", run.curves));
  }
  std::cout << "wrote " << (dir / "curve.csv").string() << " (" << run.curves.size()
            << " curves)\n";
  return failure_code(run.failed, run.points);
}

int cmd_cdf(const ExperimentConfig& cfg, const Options& opt) {
  const auto run = run_cdf(cfg);
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  std::ostringstream csv;
  write_cdf_csv(csv, run);
  write_file(dir / "cdf.csv", csv.str());
  write_file(dir / "cdf.meta.json", run.meta_json + "\n");
  if (opt.svg) {
    std::vector<OutageCurve> curves;
    for (const auto& c : run.curves) {
      OutageCurve oc{c.scheme, c.n, c.source, {}};
      for (const auto& p : c.points) oc.points.push_back({p.gamma_db, run.gamma0_db, p.value});
      curves.push_back(std::move(oc));
    }
    write_file(dir / "cdf.svg", render_svg("CDF of the combined SNR", "gamma (dB)", curves));
  }
  std::cout << "wrote " << (dir / "cdf.csv").string() << " (" << run.curves.size()
            << " curves)\n";
  return failure_code(run.failed, run.points);
}

int cmd_validate(const ExperimentConfig& cfg) {
  const auto checks = run_validation(cfg, &std::cout);
  int failed = 0;
  for (const auto& c : checks) failed += !c.passed;
  std::cout << (checks.size() - failed) << "/" << checks.size() << " checks passed\n";
  return failed ? kExitValidation : kExitOk;
}

int cmd_diversity(const ExperimentConfig& cfg, const Options& opt) {
  const auto rows = diversity_table(cfg);
  std::ostringstream csv;
  csv << "scheme,n,analytic,binding,fitted\n";
  std::printf("%-6s %3s %10s %10s %10s\n", "scheme", "N", "analytic", "binding", "fitted");
  for (const auto& r : rows) {
    std::printf("%-6s %3d %10.5f %10s %10.5f\n", to_string(r.scheme).c_str(), r.n,
                r.report.analytic, to_string(r.report.binding).c_str(), r.report.fitted);
    char line[160];
    std::snprintf(line, sizeof line, "%s,%d,%.5f,%s,%.6g\n", to_string(r.scheme).c_str(), r.n,
                  r.report.analytic, to_string(r.report.binding).c_str(), r.report.fitted);
    csv << line;
  }
  fs::create_directories(opt.out_dir);
  write_file(fs::path(opt.out_dir) / "diversity.csv", csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage analysis of multi-aperture underwater optical links (MRC / SC)"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Options opt;
  app.add_option("--config", opt.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", opt.preset, "figure preset: fig2 | fig3a | fig3b | fig4");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_flag("--svg", opt.svg, "also render SVG charts");
  app.add_option("--seed", opt.seed, "Monte Carlo seed");
  app.add_option("--trials", opt.trials, "Monte Carlo trials (>= 1000)");
  app.add_flag("--paper-scale", opt.paper_scale, "raise Monte Carlo trials to 1e7");
  app.add_flag("--dump-config", opt.dump_config, "print the effective configuration and exit");

  auto* curve = app.add_subcommand("curve", "outage probability vs transmit power");
  auto* cdf = app.add_subcommand("cdf", "CDF of the combined SNR");
  auto* validate = app.add_subcommand("validate", "run the analytic-vs-Monte-Carlo oracle suite");
  auto* diversity = app.add_subcommand("diversity", "diversity orders and fitted slopes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ExperimentConfig cfg;
  try {
    cfg = resolve(opt);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (opt.dump_config) {
    std::cout << dump_config(cfg);
    return kExitOk;
  }
  try {
    if (curve->parsed()) return cmd_curve(cfg, opt);
    if (cdf->parsed()) return cmd_cdf(cfg, opt);
    if (validate->parsed()) return cmd_validate(cfg);
    if (diversity->parsed()) return cmd_diversity(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::cerr << app.help();
  return kExitUsage;
}
