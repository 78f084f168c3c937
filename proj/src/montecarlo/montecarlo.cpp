#include "uwoc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "uwoc/errors.hpp"

namespace uwoc::mc {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::mrc_exact_sum: return "mrc_exact_sum";
    case Scheme::sc_max: return "sc_max";
    case Scheme::geometric_mean: return "geometric_mean";
    case Scheme::n_times_geometric_mean: return "n_times_geometric_mean";
    case Scheme::single: return "single";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  for (auto s : {Scheme::mrc_exact_sum, Scheme::sc_max, Scheme::geometric_mean,
                 Scheme::n_times_geometric_mean, Scheme::single}) {
    if (to_string(s) == text) return s;
  }
  throw DomainError("unknown Monte Carlo scheme '" + text + "'");
}

void SimConfig::validate() const {
  if (trials < kMinTrials) throw DomainError("SimConfig: trials must be >= 1000");
  if (workers < 1) throw DomainError("SimConfig: workers must be >= 1");
  if (gamma_th < 0.0 || std::isnan(gamma_th)) throw DomainError("SimConfig: gamma_th must be >= 0");
}

OutageEstimate wilson(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) throw DomainError("wilson: no trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {p, std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0), trials, hits};
}

double binomial_sigma(double p, std::uint64_t trials) {
  return std::sqrt(std::clamp(p, 0.0, 1.0) * (1.0 - std::clamp(p, 0.0, 1.0)) /
                   static_cast<double>(trials));
}

double Rng::uniform() {
  // 53 random bits, offset by half a step so neither endpoint occurs.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

// Marsaglia-Tsang squeeze; shape < 1 is boosted by one and scaled back by U^(1/shape).
double Rng::gamma(double shape) {
  if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t block) {
  // splitmix64 finalizer over seed and block
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (block + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sample_egg(const EggParams& p, Rng& rng) {
  if (rng.uniform() < p.omega()) return -p.lambda() * std::log(rng.uniform());
  return p.b() * std::pow(rng.gamma(p.a()), 1.0 / p.c());
}

double sample_pointing(const PointingParams& pe, Rng& rng) {
  return pe.a0() * std::pow(rng.uniform(), 1.0 / pe.rho2());
}

double combine(Scheme scheme, const double* g, int n) {
  switch (scheme) {
    case Scheme::mrc_exact_sum: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g[i];
      return s;
    }
    case Scheme::sc_max: return *std::max_element(g, g + n);
    case Scheme::geometric_mean:
    case Scheme::n_times_geometric_mean: {
      double logs = 0.0;
      for (int i = 0; i < n; ++i) logs += std::log(g[i]);
      const double gm = std::exp(logs / n);
      return scheme == Scheme::geometric_mean ? gm : n * gm;
    }
    case Scheme::single: return g[0];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Runs fn(block, first_trial, last_trial, draw) on `workers` threads, where
// draw(out) fills N branch SNRs from the block's substream.
template <typename Fn>
void run_blocks(const ApertureArray& arr, std::uint64_t trials, std::uint64_t seed, int workers,
                Fn&& fn) {
  if (workers < 1) throw DomainError("Monte Carlo: workers must be >= 1");
  const auto& aps = arr.apertures();
  const double g0 = arr.g0();
  auto body = [&](int block) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(block)));
    auto draw = [&](double* out) {
      for (std::size_t i = 0; i < aps.size(); ++i) {
        const double ht = sample_egg(aps[i].egg, rng);
        const double hp = sample_pointing(aps[i].pointing, rng);
        out[i] = g0 * ht * ht * hp * hp;
      }
    };
    const std::uint64_t first = trials * block / workers;
    const std::uint64_t last = trials * (block + 1) / workers;
    fn(block, first, last, draw);
  };
  std::vector<std::jthread> pool;
  for (int b = 1; b < workers; ++b) pool.emplace_back(body, b);
  body(0);
}

}  // namespace

OutageEstimate simulate(const SimConfig& cfg) {
  cfg.validate();
  const int n = cfg.arr.n();
  std::vector<std::uint64_t> hits(cfg.workers, 0);
  run_blocks(cfg.arr, cfg.trials, cfg.seed, cfg.workers,
             [&](int block, std::uint64_t first, std::uint64_t last, auto& draw) {
               std::vector<double> g(n);
               std::uint64_t count = 0;
               for (std::uint64_t t = first; t < last; ++t) {
                 draw(g.data());
                 if (combine(cfg.scheme, g.data(), n) <= cfg.gamma_th) ++count;
               }
               hits[block] = count;
             });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return wilson(total, cfg.trials);
}

std::vector<double> sample_branches(const ApertureArray& arr, std::uint64_t trials,
                                    std::uint64_t seed, int workers) {
  const int n = arr.n();
  std::vector<double> out(trials * n);
  run_blocks(arr, trials, seed, workers,
             [&](int, std::uint64_t first, std::uint64_t last, auto& draw) {
               for (std::uint64_t t = first; t < last; ++t) draw(out.data() + t * n);
             });
  return out;
}

std::vector<double> sample_statistic(const ApertureArray& arr, Scheme scheme,
                                     std::uint64_t trials, std::uint64_t seed, int workers) {
  const int n = arr.n();
  std::vector<double> out(trials);
  run_blocks(arr, trials, seed, workers,
             [&](int, std::uint64_t first, std::uint64_t last, auto& draw) {
               std::vector<double> g(n);
               for (std::uint64_t t = first; t < last; ++t) {
                 draw(g.data());
                 out[t] = combine(scheme, g.data(), n);
               }
             });
  return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw DomainError("EmpiricalCdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

std::uint64_t EmpiricalCdf::count_at_most(double x) const {
  return static_cast<std::uint64_t>(std::upper_bound(sorted_.begin(), sorted_.end(), x) -
                                    sorted_.begin());
}

OutageEstimate EmpiricalCdf::estimate(double x) const {
  return wilson(count_at_most(x), sorted_.size());
}

}  // namespace uwoc::mc
