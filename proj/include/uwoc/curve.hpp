#pragma once

#include <string>
#include <vector>

namespace uwoc {

enum class CurveSource { analytic, asymptotic, monte_carlo, mc_ci_low, mc_ci_high };

/// CSV spelling: analytic, asymptotic, monte-carlo, mc-ci-low, mc-ci-high.
std::string to_string(CurveSource source);
CurveSource parse_curve_source(const std::string& text);

struct CurvePoint {
  double pt_dbm;
  double gamma0_db;
  double value;
};

struct OutageCurve {
  std::string scheme;  // "mrc" or "sc"
  int n = 1;
  CurveSource source = CurveSource::analytic;
  std::vector<CurvePoint> points;  // strictly increasing pt_dbm
};

}  // namespace uwoc
