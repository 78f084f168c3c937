#include "uwoc/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "uwoc/diagnostics.hpp"
#include "uwoc/errors.hpp"

namespace uwoc {

using specfun::GammaParam;
using specfun::MellinBarnesSpec;

ApertureArray::ApertureArray(std::vector<Aperture> apertures, double g0)
    : apertures_(std::move(apertures)), g0_(g0) {
  if (apertures_.empty()) throw DomainError("ApertureArray: at least one aperture required");
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw DomainError("ApertureArray: g0 must be > 0");
}

ApertureArray ApertureArray::iid(int n, const EggParams& egg, const PointingParams& pointing,
                                 double g0) {
  if (n < 1) throw DomainError("ApertureArray::iid: n must be >= 1");
  return {std::vector<Aperture>(n, Aperture{egg, pointing}), g0};
}

bool ApertureArray::is_iid() const {
  return std::all_of(apertures_.begin(), apertures_.end(),
                     [&](const Aperture& ap) { return ap == apertures_.front(); });
}

ApertureArray ApertureArray::with_g0(double g0) const { return {apertures_, g0}; }

std::string to_string(MrcVariant v) {
  return v == MrcVariant::gamma_n ? "gamma_n" : "n_times_gamma_n";
}

std::string to_string(MrcPrefactor p) {
  switch (p) {
    case MrcPrefactor::as_printed: return "as_printed";
    case MrcPrefactor::rho_squared: return "rho_squared";
    case MrcPrefactor::mixture: return "mixture";
  }
  return "?";
}

MrcVariant parse_mrc_variant(const std::string& text) {
  if (text == "gamma_n") return MrcVariant::gamma_n;
  if (text == "n_times_gamma_n") return MrcVariant::n_times_gamma_n;
  throw DomainError("unknown MRC variant '" + text + "' (gamma_n | n_times_gamma_n)");
}

MrcPrefactor parse_mrc_prefactor(const std::string& text) {
  if (text == "as_printed") return MrcPrefactor::as_printed;
  if (text == "rho_squared") return MrcPrefactor::rho_squared;
  if (text == "mixture") return MrcPrefactor::mixture;
  throw DomainError("unknown MRC prefactor '" + text + "' (as_printed | rho_squared | mixture)");
}

double moment_fractional(double t, const EggParams& p, const PointingParams& pe, double g0) {
  const double r2 = pe.rho2();
  const double a = p.a();
  const double c = p.c();
  const double floor = -std::min({1.0, a * c, r2}) / 2.0;
  if (!(t > floor)) {
    std::ostringstream msg;
    msg << "moment_fractional: order " << t << " must exceed " << floor
        << " (gamma-function pole)";
    throw DomainError(msg.str());
  }
  const double u = 2.0 * t;
  const double a0 = pe.a0();
  const double expo = p.omega() * r2 * std::pow(g0, t) * std::pow(p.lambda() * a0, u) *
                      std::exp(std::lgamma(u + 1.0) + std::lgamma(u + r2) -
                               std::lgamma(u + r2 + 1.0));
  const double gg = (1.0 - p.omega()) * r2 / (c * std::tgamma(a)) * std::pow(g0, t) *
                    std::pow(p.b() * a0, u) *
                    std::exp(std::lgamma(u / c + a) + std::lgamma(u / c + r2 / c) -
                             std::lgamma(u / c + r2 / c + 1.0));
  return expo + gg;
}

namespace {

// Per-aperture Mellin data for one mixture branch.
struct Branch {
  GammaParam upper;                  // (rho^2 + 1, 2/N) or (rho^2/c + 1, 2/(cN))
  std::pair<GammaParam, GammaParam> lower;
  double weight;                     // mixture weight
  double printed_weight;             // weight without rho^2
  double log_kappa;                  // (1/N) log(1 / (g0 s^2 A^2))
};

Branch exponential_branch(const Aperture& ap, int n, double g0) {
  const double r2 = ap.pointing.rho2();
  const double scale = 2.0 / n;
  const double lam_a = ap.egg.lambda() * ap.pointing.a0();
  return {{r2 + 1.0, scale},
          {{1.0, scale}, {r2, scale}},
          ap.egg.omega() * r2,
          ap.egg.omega(),
          -std::log(g0 * lam_a * lam_a) / n};
}

Branch gengamma_branch(const Aperture& ap, int n, double g0) {
  const double r2 = ap.pointing.rho2();
  const double c = ap.egg.c();
  const double scale = 2.0 / (c * n);
  const double b_a = ap.egg.b() * ap.pointing.a0();
  const double printed = (1.0 - ap.egg.omega()) / (c * std::tgamma(ap.egg.a()));
  return {{r2 / c + 1.0, scale},
          {{ap.egg.a(), scale}, {r2 / c, scale}},
          printed * r2,
          printed,
          -std::log(g0 * b_a * b_a) / n};
}

// mask bit i set => aperture i takes the exponential branch.
MrcTerm build_term(const ApertureArray& arr, unsigned long mask, double multiplicity,
                   MrcPrefactor prefactor) {
  const int n = arr.n();
  std::vector<GammaParam> upper;
  std::vector<GammaParam> first;
  std::vector<GammaParam> second;
  double weight = 1.0;
  double log_kappa = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& ap = arr.apertures()[i];
    const Branch br = (mask >> i) & 1UL ? exponential_branch(ap, n, arr.g0())
                                        : gengamma_branch(ap, n, arr.g0());
    upper.push_back(br.upper);
    first.push_back(br.lower.first);
    second.push_back(br.lower.second);
    weight *= prefactor == MrcPrefactor::as_printed ? br.printed_weight : br.weight;
    log_kappa += br.log_kappa;
  }
  std::vector<GammaParam> lower = first;
  lower.insert(lower.end(), second.begin(), second.end());

  std::vector<GammaParam> cdf_upper{{1.0, 1.0}};
  cdf_upper.insert(cdf_upper.end(), upper.begin(), upper.end());
  std::vector<GammaParam> cdf_lower = lower;
  cdf_lower.push_back({0.0, 1.0});

  return {weight * multiplicity,
          std::exp(log_kappa),
          static_cast<int>(multiplicity),
          MellinBarnesSpec(2 * n, 0, upper, lower),
          MellinBarnesSpec(2 * n, 1, cdf_upper, cdf_lower)};
}

double effective_gamma(double gamma, const ApertureArray& arr, MrcVariant variant) {
  return variant == MrcVariant::n_times_gamma_n ? gamma / arr.n() : gamma;
}

template <typename Fn>
double with_context(const char* where, const ApertureArray& arr, const MrcTerm& term, Fn&& fn) {
  try {
    return fn();
  } catch (const DegeneracyError& e) {
    std::ostringstream msg;
    msg << where << " (N=" << arr.n() << ", term " << term.cdf.describe() << "): " << e.what();
    throw DegeneracyError(msg.str());
  } catch (const AccuracyError& e) {
    std::ostringstream msg;
    msg << where << " (N=" << arr.n() << "): " << e.what();
    throw AccuracyError(msg.str(), e.last(), e.previous());
  }
}

}  // namespace

std::vector<MrcTerm> mrc_terms(const ApertureArray& arr, MrcPrefactor prefactor) {
  const int n = arr.n();
  const unsigned long all_exp = (n >= 64) ? ~0UL : (1UL << n) - 1UL;
  std::vector<MrcTerm> terms;
  if (prefactor != MrcPrefactor::mixture) {
    terms.push_back(build_term(arr, all_exp, 1.0, prefactor));
    terms.push_back(build_term(arr, 0UL, 1.0, prefactor));
    return terms;
  }
  if (arr.is_iid()) {
    // Subsets with the same number of exponential branches coincide.
    for (int k = n; k >= 0; --k) {
      const unsigned long mask = (k == 0) ? 0UL : ((1UL << k) - 1UL);
      terms.push_back(build_term(arr, mask, boost::math::binomial_coefficient<double>(n, k),
                                 prefactor));
    }
    return terms;
  }
  if (n > 20) throw DomainError("mrc_terms: heterogeneous arrays limited to N <= 20");
  for (unsigned long mask = all_exp + 1; mask-- > 0;) {
    terms.push_back(build_term(arr, mask, 1.0, prefactor));
  }
  return terms;
}

double mrc_pdf_bound(double gamma, const ApertureArray& arr, const MrcBoundConvention& conv) {
  if (gamma < 0.0 || std::isnan(gamma)) throw DomainError("mrc_pdf_bound: gamma must be >= 0");
  if (gamma == 0.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(gamma)) return 0.0;
  const double g = effective_gamma(gamma, arr, conv.variant);
  double sum = 0.0;
  for (const auto& term : mrc_terms(arr, conv.prefactor)) {
    sum += term.weight *
           with_context("mrc_pdf_bound", arr, term,
                        [&] { return specfun::fox_h(term.pdf, term.kappa * g); });
  }
  const double density = sum / g;
  return conv.variant == MrcVariant::n_times_gamma_n ? density / arr.n() : density;
}

// For large x the contour value is a difference of nearly equal numbers
// scaled by huge mixture weights. The only right pole is s = 0, so shift the
// line across it: H(x) = R(0) + integral on Re s = c' > 0, which decays like x^-c'.
static double cdf_tail_form(const MrcTerm& term, double x) {
  double log_mass = 0.0;
  for (const auto& b : term.pdf.lower()) log_mass += std::lgamma(b.value);
  for (const auto& a : term.pdf.upper()) log_mass -= std::lgamma(a.value);
  auto cfg = specfun::default_contour(term.cdf);
  double shifted = -cfg.abscissa;
  if (std::abs(shifted - std::round(shifted)) < 1e-3) shifted = 0.5;
  cfg.abscissa = shifted;
  return std::exp(log_mass) + specfun::line_integral(term.cdf, x, cfg).value;
}

double mrc_cdf_bound(double gamma, const ApertureArray& arr, const MrcBoundConvention& conv) {
  if (gamma < 0.0 || std::isnan(gamma)) throw DomainError("mrc_cdf_bound: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  const double g = effective_gamma(gamma, arr, conv.variant);
  double sum = 0.0;
  for (const auto& term : mrc_terms(arr, conv.prefactor)) {
    const double x = term.kappa * g;
    sum += term.weight * with_context("mrc_cdf_bound", arr, term, [&] {
      return x < 1.0 ? specfun::fox_h(term.cdf, x) : cdf_tail_form(term, x);
    });
  }
  if (conv.prefactor == MrcPrefactor::mixture &&
      (sum < -1e-6 || sum > 1.0 + 1e-6 || !std::isfinite(sum))) {
    std::ostringstream msg;
    msg << "mrc_cdf_bound: CDF evaluated to " << sum << " (N=" << arr.n() << ")";
    throw AccuracyError(msg.str(), sum, sum);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double mrc_outage(double gamma_th, const ApertureArray& arr, const MrcBoundConvention& conv) {
  if (!(gamma_th > 0.0)) throw DomainError("mrc_outage: gamma_th must be > 0");
  return mrc_cdf_bound(gamma_th, arr, conv);
}

double mrc_outage_asymptotic(double gamma_th, const ApertureArray& arr,
                             const MrcBoundConvention& conv, int terms, Diagnostics* diag) {
  if (!(gamma_th > 0.0)) throw DomainError("mrc_outage_asymptotic: gamma_th must be > 0");
  const double g = effective_gamma(gamma_th, arr, conv.variant);
  double sum = 0.0;
  for (const auto& term : mrc_terms(arr, conv.prefactor)) {
    const auto series = [&] {
      try {
        return specfun::residue_series_detailed(term.cdf, term.kappa * g, terms);
      } catch (const DegeneracyError& e) {
        std::ostringstream msg;
        msg << "mrc_outage_asymptotic (N=" << arr.n() << "): " << e.what();
        throw DegeneracyError(msg.str());
      }
    }();
    if (diag && series.perturbed) {
      diag->warn("mrc_outage_asymptotic: near-coincident poles merged in " + term.cdf.describe());
    }
    if (diag && series.diverging) {
      std::ostringstream msg;
      msg << "mrc_outage_asymptotic: residue series not decreasing at x = " << term.kappa * g
          << "; partial sum " << series.value;
      diag->warn(msg.str());
    }
    sum += term.weight * series.value;
  }
  return sum;
}

double mrc_pdf_mass(const ApertureArray& arr, MrcPrefactor prefactor) {
  const MrcBoundConvention conv{MrcVariant::gamma_n, prefactor};
  const auto terms = mrc_terms(arr, prefactor);
  // gamma * pdf over log(gamma), centred on the heaviest term's scale.
  const auto heaviest = std::max_element(terms.begin(), terms.end(), [](auto& l, auto& r) {
    return std::abs(l.weight) < std::abs(r.weight);
  });
  const double centre = -std::log(heaviest->kappa);
  auto integrand = [&](double u) {
    const double gamma = std::exp(u);
    return gamma * mrc_pdf_bound(gamma, arr, conv);
  };
  // Below the bulk the integrand decays like exp(d u), d the smallest distance
  // to a left pole, so the walk stops early and the rest is added in closed
  // form. Above the bulk the contour integral turns into cancellation noise,
  // so the walk also stops once values stop decreasing.
  double d = std::numeric_limits<double>::infinity();
  for (const auto& term : terms) d = std::min(d, -term.pdf.left_pole_bound());
  double peak = std::abs(integrand(centre));
  auto edge = [&](double step, double negligible, double& last) {
    double u = centre;
    last = peak;
    for (int i = 0; i < 400; ++i) {
      double v;
      try {
        v = integrand(u + step);
      } catch (const AccuracyError&) {
        break;
      }
      if (!(v > 0.0) || (v >= last && v < 1e-6 * peak)) break;
      u += step;
      last = v;
      peak = std::max(peak, v);
      if (v < negligible * peak) break;
    }
    return u;
  };
  double v_lo = 0.0;
  double v_hi = 0.0;
  const double lo = edge(-1.0, 1e-7, v_lo);
  const double hi = edge(0.5, 1e-13, v_hi);
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 8, 1e-7) + v_lo / d;
}

MrcPrefactor select_prefactor_by_normalization(const ApertureArray& arr, double tolerance) {
  std::ostringstream report;
  for (auto prefactor : {MrcPrefactor::mixture, MrcPrefactor::rho_squared,
                         MrcPrefactor::as_printed}) {
    const double mass = mrc_pdf_mass(arr, prefactor);
    if (std::abs(mass - 1.0) <= tolerance) return prefactor;
    report << " " << to_string(prefactor) << "=" << mass;
  }
  throw DataError("select_prefactor_by_normalization: no prefactor normalizes (N=" +
                  std::to_string(arr.n()) + "):" + report.str());
}

double sc_cdf(double gamma, const ApertureArray& arr) {
  if (gamma < 0.0 || std::isnan(gamma)) throw DomainError("sc_cdf: gamma must be >= 0");
  if (arr.is_iid()) {
    const auto& ap = arr.apertures().front();
    return std::pow(snr_cdf_single(gamma, ap.egg, ap.pointing, arr.g0()), arr.n());
  }
  double product = 1.0;
  for (const auto& ap : arr.apertures()) {
    product *= snr_cdf_single(gamma, ap.egg, ap.pointing, arr.g0());
  }
  return product;
}

double sc_pdf(double gamma, const ApertureArray& arr) {
  if (!(gamma > 0.0)) throw DomainError("sc_pdf: gamma must be > 0");
  const int n = arr.n();
  if (arr.is_iid()) {
    const auto& ap = arr.apertures().front();
    const double f = snr_pdf_single(gamma, ap.egg, ap.pointing, arr.g0());
    const double cdf = snr_cdf_single(gamma, ap.egg, ap.pointing, arr.g0());
    return n * std::pow(cdf, n - 1) * f;
  }
  std::vector<double> cdf(n);
  std::vector<double> pdf(n);
  for (int i = 0; i < n; ++i) {
    const auto& ap = arr.apertures()[i];
    cdf[i] = snr_cdf_single(gamma, ap.egg, ap.pointing, arr.g0());
    pdf[i] = snr_pdf_single(gamma, ap.egg, ap.pointing, arr.g0());
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double term = pdf[i];
    for (int j = 0; j < n; ++j) {
      if (j != i) term *= cdf[j];
    }
    sum += term;
  }
  return sum;
}

double sc_outage_asymptotic(double gamma_th, const ApertureArray& arr, Diagnostics* diag) {
  if (!arr.is_iid()) {
    throw DomainError("sc_outage_asymptotic: defined for i.i.d. apertures only");
  }
  if (gamma_th < 0.0) throw DomainError("sc_outage_asymptotic: gamma_th must be >= 0");
  const auto& ap = arr.apertures().front();
  const auto t = single_asymptotic_terms(gamma_th, ap.egg, ap.pointing, arr.g0(), diag);
  const int n = arr.n();
  using boost::math::binomial_coefficient;
  double total = 0.0;
  for (int k1 = 0; k1 <= n; ++k1) {
    double exponential = 0.0;
    for (int k2 = 0; k2 <= k1; ++k2) {
      exponential += binomial_coefficient<double>(k1, k2) * std::pow(t.exp_linear, k2) *
                     std::pow(t.exp_rho2, k1 - k2);
    }
    double gengamma = 0.0;
    for (int k3 = 0; k3 <= n - k1; ++k3) {
      gengamma += binomial_coefficient<double>(n - k1, k3) * std::pow(t.gg_ac, k3) *
                  std::pow(t.gg_rho2, n - k1 - k3);
    }
    total += binomial_coefficient<double>(n, k1) * exponential * gengamma;
  }
  return total;
}

std::string to_string(CombiningScheme s) { return s == CombiningScheme::mrc ? "mrc" : "sc"; }

std::string to_string(BindingTerm t) {
  switch (t) {
    case BindingTerm::n_half: return "N/2";
    case BindingTerm::nac_half: return "Nac/2";
    case BindingTerm::nrho2_half: return "Nrho2/2";
  }
  return "?";
}

DiversityOrderReport diversity_order(int n, const EggParams& p, const PointingParams& pe,
                                     CombiningScheme /*scheme*/) {
  if (n < 1) throw DomainError("diversity_order: n must be >= 1");
  // Both combiners share min{N/2, N a c/2, N rho^2/2}.
  const double candidates[] = {0.5, p.a() * p.c() / 2.0, pe.rho2() / 2.0};
  const BindingTerm names[] = {BindingTerm::n_half, BindingTerm::nac_half,
                               BindingTerm::nrho2_half};
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (candidates[i] < candidates[best]) best = i;
  }
  return {n * candidates[best], std::numeric_limits<double>::quiet_NaN(), names[best]};
}

}  // namespace uwoc
