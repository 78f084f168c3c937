#include <cmath>
#include <numbers>
#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/specfun.hpp"

namespace uwoc::specfun {

namespace {

// B_{2k} / (2k (2k - 1)), k = 1..8
constexpr double kStirling[] = {
    1.0 / 12.0,           -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0,
    -3617.0 / 122400.0,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

cplx stirling(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (double coeff : kStirling) {
    series += coeff * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// sum_{k<steps} log(z + k) on the principal branch of each term. Factors
// share the sign of Im z, so each pair product has its argument in (0, 2 pi)
// (or (-2 pi, 0)); one atan2 and one real log per pair instead of a complex
// log per factor.
cplx log_rising(cplx z, int steps) {
  const double y = z.imag();
  if (y == 0.0) {
    double re = 0.0;
    int negative = 0;
    for (int k = 0; k < steps; ++k) {
      const double f = z.real() + k;
      re += std::log(std::abs(f));
      negative += f < 0.0;
    }
    return {re, (std::signbit(y) ? -1.0 : 1.0) * negative * std::numbers::pi};
  }
  double re = 0.0;
  double im = 0.0;
  int k = 0;
  for (; k + 1 < steps; k += 2) {
    const cplx pair = (z + static_cast<double>(k)) * (z + static_cast<double>(k + 1));
    double arg = std::atan2(pair.imag(), pair.real());
    if (y > 0.0 && arg < 0.0) arg += 2.0 * std::numbers::pi;
    if (y < 0.0 && arg > 0.0) arg -= 2.0 * std::numbers::pi;
    re += 0.5 * std::log(std::norm(pair));
    im += arg;
  }
  if (k < steps) {
    const cplx last = z + static_cast<double>(k);
    re += 0.5 * std::log(std::norm(last));
    im += std::atan2(last.imag(), last.real());
  }
  return {re, im};
}

}  // namespace

cplx log_gamma_complex(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "log_gamma_complex: pole at z = " << z.real();
    throw DomainError(msg.str());
  }
  // Stirling needs |z| >= 10 in the right half-plane; otherwise shift up
  // with Gamma(z) = Gamma(z + n) / (z (z+1) ... (z+n-1)).
  const double target = std::abs(z.imag()) >= 10.0 ? 0.0 : 10.0;
  cplx shift = 0.0;
  if (z.real() < target) {
    const int steps = static_cast<int>(std::ceil(target - z.real()));
    shift = log_rising(z, steps);
    z += static_cast<double>(steps);
  }
  return stirling(z) - shift;
}

}  // namespace uwoc::specfun
