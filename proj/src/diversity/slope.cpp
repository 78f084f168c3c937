#include <algorithm>
#include <cmath>
#include <sstream>

#include "uwoc/curve.hpp"
#include "uwoc/diversity.hpp"
#include "uwoc/errors.hpp"

namespace uwoc {

std::string to_string(CurveSource source) {
  switch (source) {
    case CurveSource::analytic: return "analytic";
    case CurveSource::asymptotic: return "asymptotic";
    case CurveSource::monte_carlo: return "monte-carlo";
    case CurveSource::mc_ci_low: return "mc-ci-low";
    case CurveSource::mc_ci_high: return "mc-ci-high";
  }
  return "?";
}

CurveSource parse_curve_source(const std::string& text) {
  for (auto s : {CurveSource::analytic, CurveSource::asymptotic, CurveSource::monte_carlo,
                 CurveSource::mc_ci_low, CurveSource::mc_ci_high}) {
    if (to_string(s) == text) return s;
  }
  throw DomainError("unknown curve source '" + text + "'");
}

double fit_slope(const OutageCurve& curve, const SlopeWindow& window) {
  std::vector<CurvePoint> usable;
  for (const auto& pt : curve.points) {
    if (pt.value > window.p_min && pt.value < window.p_max && std::isfinite(pt.gamma0_db)) {
      usable.push_back(pt);
    }
  }
  if (!usable.empty()) {
    const double top = std::max_element(usable.begin(), usable.end(), [](auto& l, auto& r) {
                         return l.pt_dbm < r.pt_dbm;
                       })->pt_dbm;
    std::erase_if(usable, [&](const CurvePoint& pt) { return pt.pt_dbm < top - window.width_db; });
  }
  if (usable.size() < 3) {
    std::ostringstream msg;
    msg << "fit_slope: " << usable.size() << " point(s) with " << window.p_min
        << " < P_out < " << window.p_max << " in the top " << window.width_db
        << " dB; at least 3 required";
    throw DataError(msg.str());
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& pt : usable) {
    const double x = pt.gamma0_db / 10.0;
    const double y = std::log10(pt.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(usable.size());
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw DataError("fit_slope: degenerate abscissae");
  return -(n * sxy - sx * sy) / denom;
}

}  // namespace uwoc
