#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "uwoc/errors.hpp"
#include "uwoc/montecarlo.hpp"

using namespace uwoc;
using namespace uwoc::mc;

namespace {

const PointingParams kSignificant(0.8532, 0.8863);

ApertureArray iid(int n, double g0 = 1.0) {
  return ApertureArray::iid(n, table_one_egg(), kSignificant, g0);
}

// Kolmogorov-Smirnov statistic of `xs` against `cdf`.
template <typename Cdf>
double ks(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

}  // namespace

TEST_CASE("Wilson interval matches statsmodels") {
  const auto e = wilson(30, 1000);
  CHECK(e.p_hat == doctest::Approx(0.03));
  CHECK(e.ci_low == doctest::Approx(0.018906316302827998).epsilon(1e-12));
  CHECK(e.ci_high == doctest::Approx(0.04728937870637443).epsilon(1e-12));
  const auto zero = wilson(0, 5000);
  CHECK(zero.ci_low == 0.0);
  CHECK(zero.ci_high == doctest::Approx(0.0013252207796349627).epsilon(1e-12));
  CHECK_THROWS_AS(wilson(0, 0), DomainError);
  CHECK(binomial_sigma(0.5, 100) == doctest::Approx(0.05));
}

TEST_CASE("uniform and normal variates") {
  Rng rng(7);
  double s = 0.0, s2 = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("gamma variates have the right mean and variance") {
  for (double shape : {0.3, 0.6302, 2.5}) {
    Rng rng(11);
    double s = 0.0, s2 = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    CAPTURE(shape);
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(s2 / n - mean * mean == doctest::Approx(shape).epsilon(0.04));
  }
}

TEST_CASE("EGG and pointing samplers pass KS") {
  const auto p = table_one_egg();
  Rng rng(20190601);
  std::vector<double> ht(50000), hp(50000);
  for (auto& v : ht) v = sample_egg(p, rng);
  for (auto& v : hp) v = sample_pointing(kSignificant, rng);
  const double crit = 1.6276 / std::sqrt(50000.0);  // 1% level
  CHECK(ks(ht, [&](double h) { return egg_cdf(h, p); }) < crit);
  const double r2 = kSignificant.rho2();
  CHECK(ks(hp, [&](double h) { return std::pow(h / kSignificant.a0(), r2); }) < crit);
  CHECK(*std::max_element(hp.begin(), hp.end()) <= kSignificant.a0());
}

TEST_CASE("substreams differ and are deterministic") {
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(substream_seed(1, 0) != substream_seed(2, 0));
  CHECK(substream_seed(5, 3) == substream_seed(5, 3));
}

TEST_CASE("combining rules") {
  const double g[] = {1.0, 4.0, 16.0};
  CHECK(combine(Scheme::mrc_exact_sum, g, 3) == 21.0);
  CHECK(combine(Scheme::sc_max, g, 3) == 16.0);
  CHECK(combine(Scheme::geometric_mean, g, 3) == doctest::Approx(4.0));
  CHECK(combine(Scheme::n_times_geometric_mean, g, 3) == doctest::Approx(12.0));
  CHECK(combine(Scheme::single, g, 1) == 1.0);
  for (auto s : {Scheme::mrc_exact_sum, Scheme::sc_max, Scheme::geometric_mean,
                 Scheme::n_times_geometric_mean, Scheme::single}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
}

TEST_CASE("simulate is reproducible and agrees with the empirical CDF") {
  SimConfig cfg{20000, 99, 4, Scheme::mrc_exact_sum, iid(3), 0.5};
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.hits == b.hits);
  const EmpiricalCdf cdf(sample_statistic(cfg.arr, cfg.scheme, cfg.trials, cfg.seed, cfg.workers));
  CHECK(cdf.count_at_most(0.5) == a.hits);
  CHECK(cdf.estimate(0.5).p_hat == a.p_hat);
  // a different worker count gives different, but statistically equivalent, draws
  cfg.workers = 3;
  const auto c = simulate(cfg);
  CHECK(std::abs(c.p_hat - a.p_hat) < 4 * binomial_sigma(a.p_hat, cfg.trials) * std::sqrt(2.0));
  cfg.trials = 10;
  CHECK_THROWS_AS(simulate(cfg), DomainError);
}

TEST_CASE("branches and statistic share draws") {
  const auto arr = iid(2);
  const auto br = sample_branches(arr, 2000, 5, 3);
  const auto st = sample_statistic(arr, Scheme::mrc_exact_sum, 2000, 5, 3);
  for (std::size_t t = 0; t < st.size(); ++t) REQUIRE(st[t] == br[2 * t] + br[2 * t + 1]);
}

TEST_CASE("single-aperture simulation agrees with the closed form") {
  const auto arr = iid(1);
  const EmpiricalCdf cdf(sample_statistic(arr, Scheme::single, 200000, 1, 8));
  for (double g : {1e-3, 0.1, 1.0}) {
    const double exact = snr_cdf_single(g, table_one_egg(), kSignificant, 1.0);
    const auto e = cdf.estimate(g);
    CAPTURE(g);
    CHECK(std::abs(e.p_hat - exact) < 3.5 * binomial_sigma(exact, e.trials));
  }
}
