#include "uwoc/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "uwoc/diagnostics.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/specfun.hpp"

namespace uwoc {

namespace {

// Largest tolerated excursion of a numerically evaluated CDF outside [0, 1].
constexpr double kClampExcursion = 1e-6;

std::string describe_value(const char* name, double value) {
  std::ostringstream out;
  out << name << " = " << value;
  return out.str();
}

double clamp_probability(double value, const char* where) {
  if (value < -kClampExcursion || value > 1.0 + kClampExcursion || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << where << ": CDF evaluated to " << value << ", outside [0, 1] by more than "
        << kClampExcursion;
    throw AccuracyError(msg.str(), value, value);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

EggParams::EggParams(double omega, double lambda, double a, double b, double c)
    : omega_(omega), lambda_(lambda), a_(a), b_(b), c_(c) {
  if (!(omega > 0.0 && omega < 1.0)) {
    throw DomainError("EggParams: omega must lie in (0, 1), got " + describe_value("omega", omega));
  }
  if (!(lambda > 0.0) || !(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !std::isfinite(lambda) ||
      !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    std::ostringstream msg;
    msg << "EggParams: lambda, a, b, c must be finite and > 0, got (" << lambda << ", " << a
        << ", " << b << ", " << c << ")";
    throw DomainError(msg.str());
  }
}

EggParams table_one_egg() { return {0.1770, 0.4687, 0.6302, 1.1780, 0.8444}; }

PointingParams::PointingParams(double a0, double rho) : a0_(a0), rho_(rho) {
  if (!(a0 > 0.0 && a0 <= 1.0)) {
    throw DomainError("PointingParams: A0 must lie in (0, 1], got " + describe_value("A0", a0));
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("PointingParams: rho must be finite and > 0, got " +
                      describe_value("rho", rho));
  }
}

PointingParams PointingParams::from_geometry(double aperture_radius, double beam_width,
                                             double equivalent_beam_width,
                                             double jitter_sigma) {
  if (!(aperture_radius > 0.0) || !(beam_width > 0.0) || !(equivalent_beam_width > 0.0) ||
      !(jitter_sigma > 0.0)) {
    throw DomainError("PointingParams::from_geometry: all lengths must be > 0");
  }
  const double v = std::sqrt(std::numbers::pi / 2.0) * aperture_radius / beam_width;
  const double e = std::erf(v);
  return {e * e, equivalent_beam_width / (2.0 * jitter_sigma)};
}

void LinkBudget::validate() const {
  if (!std::isfinite(pt_dbm)) throw DomainError("LinkBudget: pt_dbm must be finite");
  if (!(sigma_w2 > 0.0) || !std::isfinite(sigma_w2))
    throw DomainError("LinkBudget: " + describe_value("sigma_w2", sigma_w2) + " must be > 0");
  if (!(l >= 0.0)) throw DomainError("LinkBudget: " + describe_value("l", l) + " must be >= 0");
  if (!(alpha >= 0.0))
    throw DomainError("LinkBudget: " + describe_value("alpha", alpha) + " must be >= 0");
}

LinkBudget table_one_link(double pt_dbm) { return {pt_dbm, 1e-14, 50.0, 0.056}; }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

double path_loss(double l, double alpha) {
  if (!(l >= 0.0) || !(alpha >= 0.0)) {
    std::ostringstream msg;
    msg << "path_loss: distance and extinction must be >= 0, got l = " << l
        << ", alpha = " << alpha;
    throw DomainError(msg.str());
  }
  return std::exp(-alpha * l);
}

double gamma0(const LinkBudget& link) {
  link.validate();
  const double pt = dbm_to_watt(link.pt_dbm);
  const double hl = path_loss(link.l, link.alpha);
  const double g0 = pt * pt * hl * hl / link.sigma_w2;
  if (!(g0 > 0.0)) throw DomainError("gamma0: link budget yields a non-positive SNR");
  return g0;
}

double gamma0_db(const LinkBudget& link) { return to_db(gamma0(link)); }

double egg_pdf(double h, const EggParams& p) {
  if (!(h > 0.0)) throw DomainError("egg_pdf: irradiance must be > 0, got " + describe_value("h", h));
  const double ac = p.a() * p.c();
  const double expo = p.omega() / p.lambda() * std::exp(-h / p.lambda());
  const double log_gg = std::log(p.c()) + (ac - 1.0) * std::log(h) - ac * std::log(p.b()) -
                        std::lgamma(p.a()) - std::pow(h / p.b(), p.c());
  return expo + (1.0 - p.omega()) * std::exp(log_gg);
}

double egg_cdf(double h, const EggParams& p) {
  if (!(h > 0.0)) return 0.0;
  return p.omega() * -std::expm1(-h / p.lambda()) +
         (1.0 - p.omega()) * boost::math::gamma_p(p.a(), std::pow(h / p.b(), p.c()));
}

double egg_cdf_no_pointing(double gamma, const EggParams& p, double g0) {
  if (!(gamma > 0.0)) return 0.0;
  return egg_cdf(std::sqrt(gamma / g0), p);
}

double egg_pdf_no_pointing(double gamma, const EggParams& p, double g0) {
  if (!(gamma > 0.0)) throw DomainError("egg_pdf_no_pointing: gamma must be > 0");
  const double x = std::sqrt(gamma / g0);
  return egg_pdf(x, p) / (2.0 * std::sqrt(gamma * g0));
}

double snr_pdf_single(double gamma, const EggParams& p, const PointingParams& pe, double g0) {
  if (gamma < 0.0) throw DomainError("snr_pdf_single: gamma must be >= 0");
  if (gamma == 0.0) return std::numeric_limits<double>::infinity();
  const double r2 = pe.rho2();
  const double x = std::sqrt(gamma / g0);
  const std::array<double, 1> a1{r2 + 1.0};
  const std::array<double, 2> b1{1.0, r2};
  const std::array<double, 1> a2{r2 / p.c() + 1.0};
  const std::array<double, 2> b2{p.a(), r2 / p.c()};
  const double y1 = x / (p.lambda() * pe.a0());
  const double y2 = std::pow(x / (p.b() * pe.a0()), p.c());
  const double g1 = specfun::meijer_g(2, 0, 1, 2, a1, b1, y1);
  const double g2 = specfun::meijer_g(2, 0, 1, 2, a2, b2, y2);
  return p.omega() * r2 / (2.0 * gamma) * g1 +
         (1.0 - p.omega()) * r2 / (2.0 * std::tgamma(p.a()) * gamma) * g2;
}

double snr_cdf_single(double gamma, const EggParams& p, const PointingParams& pe, double g0) {
  if (gamma < 0.0) throw DomainError("snr_cdf_single: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  const double r2 = pe.rho2();
  const double x = std::sqrt(gamma / g0);
  const std::array<double, 2> a1{1.0, r2 + 1.0};
  const std::array<double, 3> b1{1.0, r2, 0.0};
  const std::array<double, 2> a2{1.0, r2 / p.c() + 1.0};
  const std::array<double, 3> b2{p.a(), r2 / p.c(), 0.0};
  const double y1 = x / (p.lambda() * pe.a0());
  const double y2 = std::pow(x / (p.b() * pe.a0()), p.c());
  const double g1 = specfun::meijer_g(2, 1, 2, 3, a1, b1, y1);
  const double g2 = specfun::meijer_g(2, 1, 2, 3, a2, b2, y2);
  const double value =
      p.omega() * r2 * g1 + (1.0 - p.omega()) * r2 / (p.c() * std::tgamma(p.a())) * g2;
  return clamp_probability(value, "snr_cdf_single");
}

SingleAsymptoticTerms single_asymptotic_terms(double gamma, const EggParams& p,
                                              const PointingParams& pe, double g0,
                                              Diagnostics* diag) {
  if (gamma < 0.0) throw DomainError("snr_cdf_single_asymptotic: gamma must be >= 0");
  const double a = p.a();
  const double c = p.c();
  const double omega = p.omega();
  double r2 = pe.rho2();
  // The residues below are simple only when rho^2 != 1 and rho^2 != a c.
  for (int pass = 0; pass < 2; ++pass) {
    for (double pole : {1.0, a * c}) {
      if (std::abs(r2 - pole) < 1e-6) {
        r2 = pole + 1e-6;
        if (diag) {
          std::ostringstream msg;
          msg << "snr_cdf_single_asymptotic: rho^2 coincides with " << pole
              << "; moved to rho^2 = " << r2;
          diag->warn(msg.str());
        }
      }
    }
  }
  if (gamma == 0.0) return {0.0, 0.0, 0.0, 0.0};

  const double x = std::sqrt(gamma / g0);
  const double y = x / (p.lambda() * pe.a0());
  const double z = x / (p.b() * pe.a0());
  using std::tgamma;
  SingleAsymptoticTerms t{};
  t.exp_linear = omega * r2 * tgamma(r2 - 1.0) / tgamma(r2) * y;
  t.exp_rho2 = omega * tgamma(1.0 - r2) * std::pow(y, r2);
  t.gg_ac = (1.0 - omega) * r2 * tgamma(r2 / c - a) /
            (c * tgamma(r2 / c + 1.0 - a) * tgamma(1.0 + a)) * std::pow(z, a * c);
  t.gg_rho2 = (1.0 - omega) * tgamma(a - r2 / c) / tgamma(a) * std::pow(z, r2);
  return t;
}

double snr_cdf_single_asymptotic(double gamma, const EggParams& p, const PointingParams& pe,
                                 double g0, Diagnostics* diag) {
  return single_asymptotic_terms(gamma, p, pe, g0, diag).sum();
}

double leading_cdf_exponent(const EggParams& p, const PointingParams& pe) {
  return std::min({1.0, p.a() * p.c(), pe.rho2()});
}

}  // namespace uwoc
