#pragma once

// Multi-aperture combining: the geometric-mean bound on MRC outage, its
// residue asymptotics, exact and asymptotic selection combining, and
// diversity orders.

#include <string>
#include <vector>

#include "uwoc/channel.hpp"
#include "uwoc/curve.hpp"
#include "uwoc/specfun.hpp"

namespace uwoc {

struct Diagnostics;

struct Aperture {
  EggParams egg;
  PointingParams pointing;

  friend bool operator==(const Aperture&, const Aperture&) = default;
};

class ApertureArray {
 public:
  ApertureArray(std::vector<Aperture> apertures, double g0);

  /// n copies of one (EGG, pointing) pair.
  static ApertureArray iid(int n, const EggParams& egg, const PointingParams& pointing,
                           double g0);

  int n() const { return static_cast<int>(apertures_.size()); }
  const std::vector<Aperture>& apertures() const { return apertures_; }
  double g0() const { return g0_; }
  bool is_iid() const;

  ApertureArray with_g0(double g0) const;

 private:
  std::vector<Aperture> apertures_;
  double g0_;
};

/// Which random variable the bound describes: gamma_N = prod gamma_i^(1/N)
/// or N gamma_N (which lower-bounds the MRC sum by AM >= GM).
enum class MrcVariant { gamma_n, n_times_gamma_n };

/// Weights of the Fox-H terms. `as_printed` and `rho_squared` keep only the
/// all-exponential and all-generalized-gamma products; `mixture` keeps every
/// per-aperture branch combination.
enum class MrcPrefactor { as_printed, rho_squared, mixture };

struct MrcBoundConvention {
  MrcVariant variant = MrcVariant::n_times_gamma_n;
  MrcPrefactor prefactor = MrcPrefactor::mixture;

  friend bool operator==(const MrcBoundConvention&, const MrcBoundConvention&) = default;
};

std::string to_string(MrcVariant v);
std::string to_string(MrcPrefactor p);
MrcVariant parse_mrc_variant(const std::string& text);
MrcPrefactor parse_mrc_prefactor(const std::string& text);

/// E[gamma^t] for a single aperture, t > -min{1, ac, rho^2}/2.
double moment_fractional(double t, const EggParams& p, const PointingParams& pe, double g0);

/// One Fox-H term of the geometric-mean law: weight * H(kappa * gamma), with
/// the density term divided by gamma.
struct MrcTerm {
  double weight;
  double kappa;
  int multiplicity;  // number of aperture subsets folded into this term
  specfun::MellinBarnesSpec pdf;
  specfun::MellinBarnesSpec cdf;
};

std::vector<MrcTerm> mrc_terms(const ApertureArray& arr, MrcPrefactor prefactor);

double mrc_pdf_bound(double gamma, const ApertureArray& arr,
                     const MrcBoundConvention& conv = {});
double mrc_cdf_bound(double gamma, const ApertureArray& arr,
                     const MrcBoundConvention& conv = {});

/// Upper bound on the MRC outage probability (under the default variant).
double mrc_outage(double gamma_th, const ApertureArray& arr,
                  const MrcBoundConvention& conv = {});

inline constexpr int kDefaultResidueTerms = 12;

double mrc_outage_asymptotic(double gamma_th, const ApertureArray& arr,
                             const MrcBoundConvention& conv = {},
                             int terms = kDefaultResidueTerms, Diagnostics* diag = nullptr);

/// Integral of mrc_pdf_bound over (0, inf) for the given prefactor.
double mrc_pdf_mass(const ApertureArray& arr, MrcPrefactor prefactor);

/// First prefactor (mixture, rho_squared, as_printed) whose density
/// integrates to 1 within `tolerance`; DataError when none does.
MrcPrefactor select_prefactor_by_normalization(const ApertureArray& arr,
                                               double tolerance = 1e-4);

/// Selection combining: product of branch CDFs.
double sc_cdf(double gamma, const ApertureArray& arr);
double sc_pdf(double gamma, const ApertureArray& arr);

/// Binomial expansion of the single-aperture asymptotic CDF to the N-th
/// power. i.i.d. arrays only.
double sc_outage_asymptotic(double gamma_th, const ApertureArray& arr,
                            Diagnostics* diag = nullptr);

enum class CombiningScheme { mrc, sc };
enum class BindingTerm { n_half, nac_half, nrho2_half };

std::string to_string(CombiningScheme s);
std::string to_string(BindingTerm t);

struct DiversityOrderReport {
  double analytic;
  double fitted;  // NaN until a slope has been fitted
  BindingTerm binding;
};

/// min{N/2, N a c/2, N rho^2/2} and the term attaining it.
DiversityOrderReport diversity_order(int n, const EggParams& p, const PointingParams& pe,
                                     CombiningScheme scheme);

struct SlopeWindow {
  double width_db = 15.0;  // transmit-power span at the top of the sweep
  double p_min = 1e-6;
  double p_max = 1e-1;
};

/// Negated least-squares slope of log10(P_out) against gamma0(dB)/10 over
/// the top `width_db` of the points with p_min < P_out < p_max.
double fit_slope(const OutageCurve& curve, const SlopeWindow& window = {});

}  // namespace uwoc
