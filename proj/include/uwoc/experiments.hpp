#pragma once

// Experiment configuration and the figure/validation drivers behind the
// command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwoc/channel.hpp"
#include "uwoc/curve.hpp"
#include "uwoc/diversity.hpp"

namespace uwoc::experiments {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointingChoice {
  std::string preset;  // empty when explicit
  double a0 = 0.8532;
  double rho = 0.8863;

  PointingParams params() const { return {a0, rho}; }
  friend bool operator==(const PointingChoice&, const PointingChoice&) = default;
};

/// significant, strong, negligible
std::optional<PointingChoice> pointing_preset(const std::string& name);

enum class SchemeChoice { mrc, sc, both };
std::string to_string(SchemeChoice s);

struct ExperimentConfig {
  // link
  double sigma_w2 = 1e-14;
  double l = 50.0;
  double alpha = 0.056;
  double pt_start = -35.0;
  double pt_stop = 20.0;
  double pt_step = 5.0;
  // egg
  double omega = 0.1770;
  double lambda = 0.4687;
  double a = 0.6302;
  double b = 1.1780;
  double c = 0.8444;
  PointingChoice pointing = *pointing_preset("significant");
  double gamma_th_db = 60.0;
  // receiver
  SchemeChoice scheme = SchemeChoice::mrc;
  std::vector<int> n_list = {1, 3, 5, 7};
  MrcBoundConvention conv{};
  // montecarlo
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 20190601;
  int workers = 8;

  EggParams egg() const { return {omega, lambda, a, b, c}; }
  LinkBudget link(double pt_dbm) const { return {pt_dbm, sigma_w2, l, alpha}; }
  double gamma_th() const { return from_db(gamma_th_db); }
  std::vector<double> sweep() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// fig2, fig3a, fig3b, fig4; ConfigError for anything else.
ExperimentConfig preset_config(const std::string& name);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& cfg);

inline constexpr std::uint64_t kPaperScaleTrials = 10'000'000;

// ---------------------------------------------------------------- drivers

struct CurveRun {
  std::vector<OutageCurve> curves;
  std::string meta_json;
  int points = 0;
  int failed = 0;  // analytic points that evaluated to nan
};

/// Outage vs transmit power: analytic, asymptotic and Monte Carlo (with CI)
/// curves for every (scheme, N).
CurveRun run_curves(const ExperimentConfig& cfg);

struct CdfPoint {
  double gamma_db;
  double value;
};

struct CdfCurve {
  std::string scheme;
  int n;
  CurveSource source;
  std::vector<CdfPoint> points;
};

struct CdfRun {
  double gamma0_db;
  std::vector<CdfCurve> curves;
  std::string meta_json;
  int points = 0;
  int failed = 0;
};

/// CDF of the combined SNR against gamma at the reference link (P_t = 0 dBm).
CdfRun run_cdf(const ExperimentConfig& cfg);

inline constexpr const char* kCurveHeader = "pt_dbm,gamma0_db,source,scheme,n,value";
inline constexpr const char* kCdfHeader = "gamma_db,gamma0_db,source,scheme,n,value";

void write_curve_csv(std::ostream& out, const std::vector<OutageCurve>& curves);
void write_cdf_csv(std::ostream& out, const CdfRun& run);

/// Log-y line chart; `x_label` names the abscissa.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<OutageCurve>& curves);

/// Analytic outage on a 1 dB grid from pt_start, extended past pt_stop until
/// the outage drops below 1e-6 (or 200 dBm), for slope fitting.
OutageCurve extended_analytic_curve(const ExperimentConfig& cfg, CombiningScheme scheme, int n);

struct DiversityRow {
  CombiningScheme scheme;
  int n;
  DiversityOrderReport report;
};

std::vector<DiversityRow> diversity_table(const ExperimentConfig& cfg);

struct Check {
  std::string name;
  double measured;
  double tolerance;
  bool passed;
  std::string detail;
};

/// Oracle suite: normalization, sampler KS, single-aperture and SC vs Monte
/// Carlo, bound ordering, asymptotic convergence, slope fits.
std::vector<Check> run_validation(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

std::vector<CombiningScheme> schemes_of(const ExperimentConfig& cfg);

}  // namespace uwoc::experiments
