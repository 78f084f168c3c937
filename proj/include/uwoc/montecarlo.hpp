#pragma once

// Brute-force channel simulator used as the oracle for every analytic
// expression: per trial it draws (h_t, h_p) for each aperture, forms
// gamma_i = g0 h_t^2 h_p^2 and combines the branches.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uwoc/channel.hpp"
#include "uwoc/diversity.hpp"

namespace uwoc::mc {

enum class Scheme { mrc_exact_sum, sc_max, geometric_mean, n_times_geometric_mean, single };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

inline constexpr std::uint64_t kMinTrials = 1000;
inline constexpr int kDefaultWorkers = 8;
inline constexpr std::uint64_t kDefaultSeed = 20190601;

struct SimConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  int workers = kDefaultWorkers;
  Scheme scheme = Scheme::single;
  ApertureArray arr;
  double gamma_th = 0.0;

  void validate() const;
};

/// 99% Wilson interval around hits / trials.
struct OutageEstimate {
  double p_hat;
  double ci_low;
  double ci_high;
  std::uint64_t trials;
  std::uint64_t hits;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
};

inline constexpr double kZ99 = 2.5758293035489004;

OutageEstimate wilson(std::uint64_t hits, std::uint64_t trials, double z = kZ99);

/// Binomial standard deviation of an empirical frequency at true probability p.
double binomial_sigma(double p, std::uint64_t trials);

/// Uniform, normal and gamma variates on top of a 64-bit Mersenne twister.
/// The transforms are spelled out so draws do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, 1).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Substream seed for block `block` of a run seeded with `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t block);

double sample_egg(const EggParams& p, Rng& rng);
double sample_pointing(const PointingParams& pe, Rng& rng);

OutageEstimate simulate(const SimConfig& cfg);

/// Per-branch SNRs, trial-major (trials x N), for the array's g0.
std::vector<double> sample_branches(const ApertureArray& arr, std::uint64_t trials,
                                    std::uint64_t seed, int workers = kDefaultWorkers);

/// Combined statistic per trial. Shares draws with sample_branches and
/// simulate for the same (arr, trials, seed, workers).
std::vector<double> sample_statistic(const ApertureArray& arr, Scheme scheme,
                                     std::uint64_t trials, std::uint64_t seed,
                                     int workers = kDefaultWorkers);

double combine(Scheme scheme, const double* gammas, int n);

/// Sorted sample of a statistic; every combining rule is homogeneous of
/// degree one in g0, so a sample drawn at g0 = 1 answers outage queries for
/// any g0 through P(S <= gamma_th / g0).
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  std::uint64_t count_at_most(double x) const;
  OutageEstimate estimate(double x) const;
  std::uint64_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

}  // namespace uwoc::mc
