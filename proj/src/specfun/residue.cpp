#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "uwoc/errors.hpp"
#include "uwoc/specfun.hpp"

namespace uwoc::specfun {

namespace {

// Distance below which a gamma argument counts as sitting on a pole.
constexpr double kOnPole = 1e-9;

struct PoleSite {
  double location;  // s0
  int order;
};

// Nearest non-positive integer -k to z, or -1 when z is not (numerically) on
// a pole of Gamma. `tol` is measured in the gamma argument.
int pole_index(double z, double tol) {
  const double k = std::round(-z);
  if (k < 0.0 || std::abs(z + k) > tol) return -1;
  return static_cast<int>(k);
}

// Taylor coefficients (in u) of log|Gamma(z0 + u)|, orders 0..terms-1.
std::vector<double> regular_log_gamma_series(double z0, int terms, int& sign) {
  std::vector<double> coeff(terms, 0.0);
  coeff[0] = boost::math::lgamma(z0, &sign);
  double factorial = 1.0;
  for (int n = 1; n < terms; ++n) {
    factorial *= n;
    coeff[n] = boost::math::polygamma(n - 1, z0) / factorial;
  }
  return coeff;
}

// Taylor coefficients (in u) of log|u * Gamma(-k + u)|, using
// Gamma(-k + u) = (-1)^k pi / (sin(pi u) Gamma(1 + k - u)).
std::vector<double> singular_log_gamma_series(int k, int terms) {
  std::vector<double> coeff(terms, 0.0);
  coeff[0] = -std::lgamma(1.0 + k);
  double factorial = 1.0;
  for (int n = 1; n < terms; ++n) {
    factorial *= n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    coeff[n] = -boost::math::polygamma(n - 1, 1.0 + k) * sign / factorial;
    if (n % 2 == 0) coeff[n] += boost::math::zeta(static_cast<double>(n)) / (n / 2);
  }
  return coeff;
}

// Coefficients of exp(sum_{n>=1} l_n e^n), with e_0 = 1.
std::vector<double> exp_series(const std::vector<double>& log_coeff) {
  const int terms = static_cast<int>(log_coeff.size());
  std::vector<double> out(terms, 0.0);
  out[0] = 1.0;
  for (int n = 1; n < terms; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * log_coeff[k] * out[n - k];
    out[n] = acc / n;
  }
  return out;
}

}  // namespace

ResidueSum residue_series_detailed(const MellinBarnesSpec& spec, double x, int terms) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("residue_series: x must be > 0");
  if (terms < 1) throw DomainError("residue_series: terms must be >= 1");

  ResidueSum result;
  const auto& factors = spec.factors();

  // Left poles come from numerator factors with positive slope. Poles are
  // accepted only above `complete_to`, where every family has been generated;
  // near-coincident candidates are merged by nudging each factor onto the
  // first location of the cluster.
  auto collect = [&](int depth) {
    std::vector<double> candidates;
    double complete_to = -std::numeric_limits<double>::infinity();
    for (const auto& f : factors) {
      if (f.weight <= 0 || f.slope <= 0.0) continue;
      for (int k = 0; k < depth; ++k) candidates.push_back(-(f.offset + k) / f.slope);
      complete_to = std::max(complete_to, -(f.offset + depth - 1) / f.slope);
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<>());

    std::vector<PoleSite> poles;
    bool merged = false;
    std::size_t i = 0;
    while (i < candidates.size() && candidates[i] >= complete_to &&
           static_cast<int>(poles.size()) < terms) {
      const double s0 = candidates[i];
      std::size_t j = i + 1;
      while (j < candidates.size() && s0 - candidates[j] <= kPoleMergeTol) {
        if (s0 - candidates[j] > kOnPole) merged = true;
        ++j;
      }
      int order = 0;
      for (const auto& f : factors) {
        const double z0 = f.offset + f.slope * s0;
        if (pole_index(z0, std::abs(f.slope) * kPoleMergeTol + kOnPole) >= 0) order += f.weight;
      }
      if (order > 0) poles.push_back({s0, order});
      i = j;
    }
    return std::pair{poles, merged};
  };

  std::vector<PoleSite> poles;
  for (int depth = terms + 2;; depth *= 2) {
    auto [found, merged] = collect(depth);
    poles = std::move(found);
    result.perturbed = merged;
    if (static_cast<int>(poles.size()) >= terms || depth >= 4096) break;
  }
  if (poles.empty()) {
    throw DegeneracyError("residue_series: no left poles in " + spec.describe());
  }

  const double log_x = std::log(x);
  for (const auto& pole : poles) {
    const int order = pole.order;
    std::vector<double> log_coeff(order, 0.0);
    double sign = 1.0;
    double log_scale = 0.0;

    for (const auto& f : factors) {
      const double z0 = f.offset + f.slope * pole.location;
      const int k = pole_index(z0, std::abs(f.slope) * kPoleMergeTol + kOnPole);
      std::vector<double> series;
      if (k >= 0) {
        // Gamma(-k + slope*e) = [u Gamma(-k + u)] / (slope * e), u = slope*e
        series = singular_log_gamma_series(k, order);
        if (k % 2 == 1 && f.weight % 2 != 0) sign = -sign;
        log_scale -= f.weight * std::log(std::abs(f.slope));
        if (f.slope < 0.0 && f.weight % 2 != 0) sign = -sign;
      } else {
        int gamma_sign = 1;
        series = regular_log_gamma_series(z0, order, gamma_sign);
        if (gamma_sign < 0 && f.weight % 2 != 0) sign = -sign;
      }
      double power = 1.0;
      for (int n = 0; n < order; ++n) {
        log_coeff[n] += f.weight * series[n] * power;
        power *= f.slope;
      }
    }
    // x^{-s} = x^{-s0} e^{-e log x}
    log_coeff[0] += -pole.location * log_x;
    if (order > 1) log_coeff[1] += -log_x;

    const double base = log_coeff[0] + log_scale;
    log_coeff[0] = 0.0;
    const auto expanded = exp_series(log_coeff);
    const double residue = sign * std::exp(base) * expanded[order - 1];

    result.value += residue;
    result.exponents.push_back(-pole.location);
    result.contributions.push_back(residue);
    ++result.terms;
  }

  if (result.terms >= 2 &&
      std::abs(result.contributions.back()) > std::abs(result.contributions.front())) {
    result.diverging = true;
  }
  return result;
}

double residue_series(const MellinBarnesSpec& spec, double x, int terms) {
  return residue_series_detailed(spec, x, terms).value;
}

}  // namespace uwoc::specfun
