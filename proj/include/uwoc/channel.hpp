#pragma once

// Single-aperture link statistics: path loss, average SNR, the EGG irradiance
// law and the SNR distribution with pointing errors.

namespace uwoc {

struct Diagnostics;

/// Mixture exponential / generalized-gamma irradiance parameters.
class EggParams {
 public:
  EggParams(double omega, double lambda, double a, double b, double c);

  double omega() const { return omega_; }
  double lambda() const { return lambda_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  friend bool operator==(const EggParams&, const EggParams&) = default;

 private:
  double omega_;
  double lambda_;
  double a_;
  double b_;
  double c_;
};

/// Laboratory fit used throughout the reference scenario.
EggParams table_one_egg();

class PointingParams {
 public:
  PointingParams(double a0, double rho);

  /// A0 = erf(v)^2 with v = sqrt(pi/2) r / w_z; rho = w_z_eq / (2 sigma_s).
  static PointingParams from_geometry(double aperture_radius, double beam_width,
                                      double equivalent_beam_width, double jitter_sigma);

  double a0() const { return a0_; }
  double rho() const { return rho_; }
  double rho2() const { return rho_ * rho_; }

  friend bool operator==(const PointingParams&, const PointingParams&) = default;

 private:
  double a0_;
  double rho_;
};

struct LinkBudget {
  double pt_dbm;
  double sigma_w2;  // noise variance, unit responsivity
  double l;         // link distance, m
  double alpha;     // extinction coefficient, 1/m

  void validate() const;
};

/// Reference link at the given transmit power.
LinkBudget table_one_link(double pt_dbm);

double dbm_to_watt(double dbm);
double to_db(double linear);
double from_db(double db);

/// h_l = exp(-alpha l).
double path_loss(double l, double alpha);

/// gamma_0 = P_t^2 h_l^2 / sigma_w^2.
double gamma0(const LinkBudget& link);
double gamma0_db(const LinkBudget& link);

double egg_pdf(double h, const EggParams& p);
/// Irradiance CDF P(h_t <= h).
double egg_cdf(double h, const EggParams& p);

/// SNR CDF without pointing errors (A0 = 1, rho -> infinity).
double egg_cdf_no_pointing(double gamma, const EggParams& p, double g0);
double egg_pdf_no_pointing(double gamma, const EggParams& p, double g0);

double snr_pdf_single(double gamma, const EggParams& p, const PointingParams& pe, double g0);
double snr_cdf_single(double gamma, const EggParams& p, const PointingParams& pe, double g0);

/// Small gamma/gamma0 expansion: the two leading residues of each Meijer-G
/// term. Degenerate rho^2 = 1 or a c = rho^2 are moved off the pole by 1e-6
/// (recorded in `diag` when given).
double snr_cdf_single_asymptotic(double gamma, const EggParams& p, const PointingParams& pe,
                                 double g0, Diagnostics* diag = nullptr);

/// The four additive pieces of snr_cdf_single_asymptotic, in the order
/// exponential-linear, exponential-rho^2, gengamma-ac, gengamma-rho^2.
struct SingleAsymptoticTerms {
  double exp_linear;
  double exp_rho2;
  double gg_ac;
  double gg_rho2;

  double sum() const { return exp_linear + exp_rho2 + gg_ac + gg_rho2; }
};
SingleAsymptoticTerms single_asymptotic_terms(double gamma, const EggParams& p,
                                              const PointingParams& pe, double g0,
                                              Diagnostics* diag = nullptr);

/// Exponent of sqrt(gamma/gamma0) in the leading small-SNR term:
/// min{1, a c, rho^2}.
double leading_cdf_exponent(const EggParams& p, const PointingParams& pe);

}  // namespace uwoc
