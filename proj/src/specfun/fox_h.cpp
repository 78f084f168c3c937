#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/specfun.hpp"

namespace uwoc::specfun {

namespace {

std::string format_params(const std::vector<GammaParam>& params) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out << ", ";
    out << "(" << params[i].value << ", " << params[i].scale << ")";
  }
  out << "]";
  return out.str();
}

}  // namespace

MellinBarnesSpec::MellinBarnesSpec(int m, int n, std::vector<GammaParam> upper,
                                   std::vector<GammaParam> lower)
    : m_(m), n_(n), upper_(std::move(upper)), lower_(std::move(lower)) {
  if (m_ < 0 || m_ > q() || n_ < 0 || n_ > p()) {
    std::ostringstream msg;
    msg << "MellinBarnesSpec: orders (m=" << m_ << ", n=" << n_ << ", p=" << p()
        << ", q=" << q() << ") violate 0 <= m <= q, 0 <= n <= p";
    throw DomainError(msg.str());
  }
  for (const auto* list : {&upper_, &lower_}) {
    for (const auto& g : *list) {
      if (!(g.scale > 0.0) || !std::isfinite(g.scale) || !std::isfinite(g.value)) {
        throw DomainError("MellinBarnesSpec: scales must be finite and > 0, got " +
                          format_params(*list));
      }
    }
  }

  delta_ = 0.0;
  for (int j = 0; j < q(); ++j) delta_ += (j < m_ ? 1.0 : -1.0) * lower_[j].scale;
  for (int j = 0; j < p(); ++j) delta_ += (j < n_ ? 1.0 : -1.0) * upper_[j].scale;
  if (!(delta_ > 0.0)) {
    std::ostringstream msg;
    msg << "MellinBarnesSpec: convergence exponent delta = " << delta_
        << " must be > 0 for " << describe();
    throw DomainError(msg.str());
  }

  // Fold every Gamma factor into log Gamma(offset + slope * s) with an
  // integer weight, merging identical (offset, slope) pairs.
  std::map<std::pair<double, double>, int> folded;
  for (int j = 0; j < q(); ++j) {
    const auto& g = lower_[j];
    if (j < m_) {
      folded[{g.value, g.scale}] += 1;
    } else {
      folded[{1.0 - g.value, -g.scale}] -= 1;
    }
  }
  for (int j = 0; j < p(); ++j) {
    const auto& g = upper_[j];
    if (j < n_) {
      folded[{1.0 - g.value, -g.scale}] += 1;
    } else {
      folded[{g.value, g.scale}] -= 1;
    }
  }
  for (const auto& [key, weight] : folded) {
    if (weight != 0) factors_.push_back({key.first, key.second, weight});
  }
}

MellinBarnesSpec MellinBarnesSpec::meijer(int m, int n, std::span<const double> a,
                                          std::span<const double> b) {
  std::vector<GammaParam> upper;
  std::vector<GammaParam> lower;
  for (double v : a) upper.push_back({v, 1.0});
  for (double v : b) lower.push_back({v, 1.0});
  return MellinBarnesSpec(m, n, std::move(upper), std::move(lower));
}

double MellinBarnesSpec::left_pole_bound() const {
  double bound = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m_; ++j) bound = std::max(bound, -lower_[j].value / lower_[j].scale);
  return bound;
}

double MellinBarnesSpec::right_pole_bound() const {
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_; ++j)
    bound = std::min(bound, (1.0 - upper_[j].value) / upper_[j].scale);
  return bound;
}

cplx MellinBarnesSpec::log_kernel(cplx s) const {
  cplx sum = 0.0;
  for (const auto& f : factors_) {
    sum += static_cast<double>(f.weight) * log_gamma_complex(f.offset + f.slope * s);
  }
  return sum;
}

std::string MellinBarnesSpec::describe() const {
  std::ostringstream out;
  out << "H^{" << m_ << "," << n_ << "}_{" << p() << "," << q()
      << "} upper=" << format_params(upper_) << " lower=" << format_params(lower_);
  return out.str();
}

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussLegendreRule rule{std::vector<double>(order), std::vector<double>(order)};
  if (order == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  // Newton on P_order; returns (P_order(x), P'_order(x)).
  auto legendre = [order](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [value, slope] = legendre(x);
      const double dx = value / slope;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double slope = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * slope * slope);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

ContourConfig default_contour(const MellinBarnesSpec& spec) {
  const double left = spec.left_pole_bound();
  double right = spec.right_pole_bound();
  if (!(left < right)) {
    std::ostringstream msg;
    msg << "fox_h: pole families overlap (left bound " << left << " >= right bound "
        << right << ") for " << spec.describe();
    throw DegeneracyError(msg.str());
  }
  if (!std::isfinite(right)) {
    // No upper family: close the strip one gamma-argument unit to the right.
    double widest = 0.0;
    for (int j = 0; j < spec.m(); ++j) widest = std::max(widest, spec.lower()[j].scale);
    right = std::isfinite(left) ? left + 1.0 / widest : 1.0;
  }
  const double abscissa = std::isfinite(left) ? 0.5 * (left + right) : right - 1.0;
  return {abscissa, 50.0 / spec.delta(), 16, 32};
}

namespace {

GaussLegendreRule rule_for(int order) {
  static const GaussLegendreRule k32 = gauss_legendre(32);
  return order == 32 ? k32 : gauss_legendre(order);
}

}  // namespace

namespace {

FoxHEvaluation integrate_vertical(const MellinBarnesSpec& spec, double x,
                                  const ContourConfig& cfg) {
  if (!(cfg.half_height > 0.0) || cfg.panels < 1 || cfg.nodes_per_panel < 1) {
    throw DomainError("fox_h: contour half_height, panels and nodes must be positive");
  }

  const double log_x = std::log(x);
  const double c = cfg.abscissa;
  auto log_integrand = [&](double t) {
    const cplx s(c, t);
    return spec.log_kernel(s) - s * log_x;
  };

  // Trim the truncation to where the integrand has decayed by e^-40 from its
  // peak, and size the initial panel count from the accumulated phase.
  constexpr int kScan = 256;
  double half_height = cfg.half_height;
  double phase = 0.0;
  {
    std::vector<cplx> scan(kScan + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kScan; ++k) {
      scan[k] = log_integrand(half_height * k / kScan);
      peak = std::max(peak, scan[k].real());
    }
    int last = kScan;
    while (last > 0 && scan[last].real() < peak - 40.0) --last;
    const int keep = std::min(kScan, last + 1);
    half_height = half_height * keep / kScan;
    for (int k = 1; k <= keep; ++k) phase += std::abs(scan[k].imag() - scan[k - 1].imag());
  }
  int panels = std::max(cfg.panels, static_cast<int>(std::ceil(phase / (2.0 * std::numbers::pi))));

  const auto rule = rule_for(cfg.nodes_per_panel);
  auto integrate = [&](int count, double& l1) {
    const double width = half_height / count;
    double sum = 0.0;
    l1 = 0.0;
    for (int panel = 0; panel < count; ++panel) {
      const double mid = (panel + 0.5) * width;
      double part = 0.0;
      double part_abs = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const cplx v = log_integrand(mid + 0.5 * width * rule.nodes[i]);
        const double mag = std::exp(v.real());
        part += rule.weights[i] * mag * std::cos(v.imag());
        part_abs += rule.weights[i] * mag;
      }
      sum += part;
      l1 += part_abs;
    }
    l1 *= 0.5 * width / std::numbers::pi;
    return sum * 0.5 * width / std::numbers::pi;
  };

  double l1 = 0.0;
  double previous = integrate(panels, l1);
  double value = previous;
  for (int doubling = 1; doubling <= kFoxHMaxDoublings; ++doubling) {
    panels *= 2;
    const double before = value;
    value = integrate(panels, l1);
    previous = before;
    if (!std::isfinite(value)) break;
    if (std::abs(value - previous) <= kFoxHRelTol * std::abs(value) + kFoxHAbsTol * l1) {
      return {value, previous, l1, panels, half_height};
    }
  }
  std::ostringstream msg;
  msg << "fox_h: no convergence after " << kFoxHMaxDoublings
      << " panel doublings at x = " << x << " for " << spec.describe();
  throw AccuracyError(msg.str(), value, previous);
}

}  // namespace

FoxHEvaluation fox_h_detailed(const MellinBarnesSpec& spec, double x,
                              const ContourConfig& cfg) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "fox_h: argument must be finite and > 0, got " << x;
    throw DomainError(msg.str());
  }
  if (!(cfg.abscissa > spec.left_pole_bound() && cfg.abscissa < spec.right_pole_bound())) {
    std::ostringstream msg;
    msg << "fox_h: abscissa " << cfg.abscissa << " does not separate the pole families ("
        << spec.left_pole_bound() << ", " << spec.right_pole_bound() << ") for "
        << spec.describe();
    throw DegeneracyError(msg.str());
  }
  return integrate_vertical(spec, x, cfg);
}

FoxHEvaluation line_integral(const MellinBarnesSpec& spec, double x, const ContourConfig& cfg) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "line_integral: argument must be finite and > 0, got " << x;
    throw DomainError(msg.str());
  }
  for (const auto& f : spec.factors()) {
    const double arg = f.offset + f.slope * cfg.abscissa;
    if (f.weight > 0 && arg <= 0.0 && std::abs(arg - std::round(arg)) < 1e-9) {
      std::ostringstream msg;
      msg << "line_integral: Re s = " << cfg.abscissa << " passes through a pole of "
          << spec.describe();
      throw DegeneracyError(msg.str());
    }
  }
  return integrate_vertical(spec, x, cfg);
}


double fox_h(const MellinBarnesSpec& spec, double x, const ContourConfig& cfg) {
  return fox_h_detailed(spec, x, cfg).value;
}

double fox_h(const MellinBarnesSpec& spec, double x) {
  return fox_h_detailed(spec, x, default_contour(spec)).value;
}

double meijer_g(int m, int n, int p, int q, std::span<const double> a,
                std::span<const double> b, double x) {
  if (static_cast<int>(a.size()) != p || static_cast<int>(b.size()) != q) {
    throw DomainError("meijer_g: parameter list lengths do not match (p, q)");
  }
  const auto spec = MellinBarnesSpec::meijer(m, n, a, b);
  return fox_h(spec, x);
}

}  // namespace uwoc::specfun
