#pragma once

// Complex log-gamma, Fox-H / Meijer-G evaluation on a vertical Mellin-Barnes
// contour, and small-argument residue expansions.
//
// Convention:
//
//   H^{m,n}_{p,q}(x) = 1/(2 pi i) \int_L Theta(s) x^{-s} ds
//
//   Theta(s) = prod_{j<=m} Gamma(b_j + B_j s) prod_{j<=n} Gamma(1 - a_j - A_j s)
//            / [prod_{j>n} Gamma(a_j + A_j s) prod_{j>m} Gamma(1 - b_j - B_j s)]
//
// so that the Mellin transform of H is Theta. Meijer-G is the case A = B = 1.

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace uwoc::specfun {

using cplx = std::complex<double>;

/// Principal-branch log Gamma(z) (the analytic continuation of the real
/// log-gamma, cut along the negative real axis). Throws DomainError at the
/// poles z = 0, -1, -2, ...
cplx log_gamma_complex(cplx z);

/// One Gamma-factor parameter: a value and a positive scale.
struct GammaParam {
  double value;
  double scale;

  friend bool operator==(const GammaParam&, const GammaParam&) = default;
};

class MellinBarnesSpec {
 public:
  /// Validates 0 <= m <= q, 0 <= n <= p, positive scales and delta > 0.
  MellinBarnesSpec(int m, int n, std::vector<GammaParam> upper,
                   std::vector<GammaParam> lower);

  /// Unit-scale (Meijer-G) specification.
  static MellinBarnesSpec meijer(int m, int n, std::span<const double> a,
                                 std::span<const double> b);

  int m() const { return m_; }
  int n() const { return n_; }
  int p() const { return static_cast<int>(upper_.size()); }
  int q() const { return static_cast<int>(lower_.size()); }
  const std::vector<GammaParam>& upper() const { return upper_; }
  const std::vector<GammaParam>& lower() const { return lower_; }

  /// Convergence exponent of the vertical contour integral.
  double delta() const { return delta_; }

  /// max_{j<=m} (-b_j / B_j): every left pole lies at or below this.
  double left_pole_bound() const;
  /// min_{j<=n} (1 - a_j) / A_j, or +inf when n = 0.
  double right_pole_bound() const;

  /// log Theta(s). Identical parameters are folded together, so repeated
  /// aperture entries cost one log-gamma evaluation each.
  cplx log_kernel(cplx s) const;

  /// The integrand as a list of weighted factors log Gamma(offset + slope*s).
  struct Factor {
    double offset;
    double slope;
    int weight;  // +k numerator multiplicity, -k denominator multiplicity
  };
  const std::vector<Factor>& factors() const { return factors_; }

  std::string describe() const;

 private:
  int m_;
  int n_;
  std::vector<GammaParam> upper_;
  std::vector<GammaParam> lower_;
  double delta_;
  std::vector<Factor> factors_;
};

struct ContourConfig {
  double abscissa;
  double half_height;
  int panels;
  int nodes_per_panel;
};

/// Abscissa at the midpoint of the admissible strip, half-height 50/delta,
/// 16 panels of 32-point Gauss-Legendre (raised to one panel per 2 pi of phase).
ContourConfig default_contour(const MellinBarnesSpec& spec);

struct FoxHEvaluation {
  double value;
  double previous;     // iterate before the accepted one
  double l1_norm;      // (1/pi) \int |integrand| dt, the cancellation scale
  int panels;          // panel count of the accepted iterate
  double half_height;  // truncation actually integrated
};

/// Successive panel doublings are accepted as converged when they differ by
/// at most kFoxHRelTol * |value| + kFoxHAbsTol * l1_norm.
inline constexpr double kFoxHRelTol = 1e-10;
inline constexpr double kFoxHAbsTol = 1e-13;
inline constexpr int kFoxHMaxDoublings = 6;

FoxHEvaluation fox_h_detailed(const MellinBarnesSpec& spec, double x,
                              const ContourConfig& cfg);

/// (1/(2 pi i)) \int Theta(s) x^{-s} ds along Re s = cfg.abscissa, for any
/// line that avoids the poles (not necessarily between the two families).
FoxHEvaluation line_integral(const MellinBarnesSpec& spec, double x, const ContourConfig& cfg);

double fox_h(const MellinBarnesSpec& spec, double x, const ContourConfig& cfg);
double fox_h(const MellinBarnesSpec& spec, double x);

double meijer_g(int m, int n, int p, int q, std::span<const double> a,
                std::span<const double> b, double x);

struct ResidueSum {
  double value = 0.0;
  int terms = 0;              // pole locations summed
  std::vector<double> exponents;  // x-exponent of each pole, ascending
  std::vector<double> contributions;
  bool perturbed = false;     // near-coincident poles were merged
  bool diverging = false;     // last term not small against partial sum
};

/// Sum of residues at the first `terms` distinct left poles (closest to the
/// contour first). Poles of any order are handled exactly; poles closer than
/// kPoleMergeTol are merged by nudging the later parameter.
ResidueSum residue_series_detailed(const MellinBarnesSpec& spec, double x,
                                   int terms);
double residue_series(const MellinBarnesSpec& spec, double x, int terms);

inline constexpr double kPoleMergeTol = 1e-6;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order);

}  // namespace uwoc::specfun
