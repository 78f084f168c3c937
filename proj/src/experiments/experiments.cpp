#include "uwoc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "uwoc/diagnostics.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/montecarlo.hpp"

#ifndef UWOC_VERSION
#define UWOC_VERSION "0.0.0"
#endif

namespace uwoc::experiments {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Reference link for CDF plots.
constexpr double kReferencePtDbm = 0.0;

ApertureArray array_for(const ExperimentConfig& cfg, int n, double g0) {
  return ApertureArray::iid(n, cfg.egg(), cfg.pointing.params(), g0);
}

double analytic_outage(CombiningScheme scheme, const ApertureArray& arr, double gamma_th,
                       const MrcBoundConvention& conv) {
  return scheme == CombiningScheme::mrc ? mrc_outage(gamma_th, arr, conv) : sc_cdf(gamma_th, arr);
}

// nan when the expansion is outside its regime (diverging series or a value
// that is not a probability).
double asymptotic_outage(CombiningScheme scheme, const ApertureArray& arr, double gamma_th,
                         const MrcBoundConvention& conv) {
  Diagnostics diag;
  const double v = scheme == CombiningScheme::mrc
                       ? mrc_outage_asymptotic(gamma_th, arr, conv, kDefaultResidueTerms, &diag)
                       : sc_outage_asymptotic(gamma_th, arr, &diag);
  const bool diverging = std::any_of(diag.warnings.begin(), diag.warnings.end(), [](auto& w) {
    return w.find("not decreasing") != std::string::npos;
  });
  if (diverging || !(v >= 0.0 && v <= 1.0)) return kNan;
  return v;
}

mc::Scheme mc_scheme_for(CombiningScheme scheme, int n) {
  if (n == 1) return mc::Scheme::single;
  return scheme == CombiningScheme::mrc ? mc::Scheme::mrc_exact_sum : mc::Scheme::sc_max;
}

mc::EmpiricalCdf empirical(const ExperimentConfig& cfg, CombiningScheme scheme, int n) {
  return mc::EmpiricalCdf(mc::sample_statistic(array_for(cfg, n, 1.0), mc_scheme_for(scheme, n),
                                               cfg.trials, cfg.seed, cfg.workers));
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

nlohmann::json base_meta(const ExperimentConfig& cfg, const char* command) {
  nlohmann::json meta;
  meta["tool"] = "uwoc";
  meta["version"] = UWOC_VERSION;
  meta["command"] = command;
  meta["seed"] = cfg.seed;
  meta["trials"] = cfg.trials;
  meta["workers"] = cfg.workers;
  meta["pointing"] = {{"preset", cfg.pointing.preset}, {"a0", cfg.pointing.a0},
                      {"rho", cfg.pointing.rho}};
  meta["gamma_th_db"] = cfg.gamma_th_db;
  meta["n_list"] = cfg.n_list;
  meta["scheme"] = to_string(cfg.scheme);
  nlohmann::json conv;
  conv["variant"] = to_string(cfg.conv.variant);
  conv["prefactor"] = to_string(cfg.conv.prefactor);
  if (cfg.scheme != SchemeChoice::sc) {
    // Which prefactor convention integrates to one, per N.
    nlohmann::json selected;
    for (int n : cfg.n_list) {
      const auto arr = array_for(cfg, n, from_db(60.0));
      try {
        selected[std::to_string(n)] = to_string(select_prefactor_by_normalization(arr));
      } catch (const std::exception& e) {
        selected[std::to_string(n)] = std::string("none: ") + e.what();
      }
    }
    conv["normalization_selected"] = selected;
  }
  meta["conventions"] = conv;
  meta["monte_carlo_statistic"] = {{"mrc", "exact sum of branch SNRs"},
                                   {"sc", "maximum branch SNR"}};
  return meta;
}

}  // namespace

std::vector<CombiningScheme> schemes_of(const ExperimentConfig& cfg) {
  switch (cfg.scheme) {
    case SchemeChoice::mrc: return {CombiningScheme::mrc};
    case SchemeChoice::sc: return {CombiningScheme::sc};
    case SchemeChoice::both: return {CombiningScheme::mrc, CombiningScheme::sc};
  }
  return {};
}

CurveRun run_curves(const ExperimentConfig& cfg) {
  cfg.validate();
  CurveRun run;
  const auto sweep = cfg.sweep();
  const double th = cfg.gamma_th();
  for (auto scheme : schemes_of(cfg)) {
    for (int n : cfg.n_list) {
      const auto name = to_string(scheme);
      OutageCurve analytic{name, n, CurveSource::analytic, {}};
      OutageCurve asymptotic{name, n, CurveSource::asymptotic, {}};
      OutageCurve sim{name, n, CurveSource::monte_carlo, {}};
      OutageCurve lo{name, n, CurveSource::mc_ci_low, {}};
      OutageCurve hi{name, n, CurveSource::mc_ci_high, {}};
      const auto ecdf = empirical(cfg, scheme, n);
      for (double pt : sweep) {
        const double g0 = gamma0(cfg.link(pt));
        const double g0_db = to_db(g0);
        const auto arr = array_for(cfg, n, g0);
        double value = kNan;
        try {
          value = analytic_outage(scheme, arr, th, cfg.conv);
        } catch (const std::exception&) {
          ++run.failed;
        }
        ++run.points;
        analytic.points.push_back({pt, g0_db, value});
        try {
          const double v = asymptotic_outage(scheme, arr, th, cfg.conv);
          if (!std::isnan(v)) asymptotic.points.push_back({pt, g0_db, v});
        } catch (const std::exception&) {
        }
        const auto est = ecdf.estimate(th / g0);
        sim.points.push_back({pt, g0_db, est.p_hat});
        lo.points.push_back({pt, g0_db, est.ci_low});
        hi.points.push_back({pt, g0_db, est.ci_high});
      }
      for (auto* c : {&analytic, &asymptotic, &sim, &lo, &hi}) run.curves.push_back(std::move(*c));
    }
  }
  auto meta = base_meta(cfg, "curve");
  meta["sweep"] = {{"pt_start", cfg.pt_start}, {"pt_stop", cfg.pt_stop}, {"pt_step", cfg.pt_step}};
  meta["failed_points"] = run.failed;
  meta["total_points"] = run.points;
  run.meta_json = meta.dump(2);
  return run;
}

CdfRun run_cdf(const ExperimentConfig& cfg) {
  cfg.validate();
  CdfRun run;
  const double g0 = gamma0(cfg.link(kReferencePtDbm));
  run.gamma0_db = to_db(g0);
  // Abscissa spans the gamma0 range induced by the power sweep.
  const double lo_db = gamma0_db(cfg.link(cfg.pt_start));
  const double hi_db = gamma0_db(cfg.link(cfg.pt_stop));
  const double step_db = 2.0;
  std::vector<double> grid;
  const long steps = std::lround(std::floor((hi_db - lo_db) / step_db + 1e-9));
  for (long i = 0; i <= steps; ++i) grid.push_back(lo_db + i * step_db);

  for (auto scheme : schemes_of(cfg)) {
    for (int n : cfg.n_list) {
      const auto name = to_string(scheme);
      const auto arr = array_for(cfg, n, g0);
      const auto ecdf = empirical(cfg, scheme, n);
      CdfCurve analytic{name, n, CurveSource::analytic, {}};
      CdfCurve sim{name, n, CurveSource::monte_carlo, {}};
      CdfCurve lo{name, n, CurveSource::mc_ci_low, {}};
      CdfCurve hi{name, n, CurveSource::mc_ci_high, {}};
      for (double gdb : grid) {
        const double gamma = from_db(gdb);
        double value = kNan;
        try {
          value = scheme == CombiningScheme::mrc ? mrc_cdf_bound(gamma, arr, cfg.conv)
                                                 : sc_cdf(gamma, arr);
        } catch (const std::exception&) {
          ++run.failed;
        }
        ++run.points;
        analytic.points.push_back({gdb, value});
        const auto est = ecdf.estimate(gamma / g0);
        sim.points.push_back({gdb, est.p_hat});
        lo.points.push_back({gdb, est.ci_low});
        hi.points.push_back({gdb, est.ci_high});
      }
      for (auto* c : {&analytic, &sim, &lo, &hi}) run.curves.push_back(std::move(*c));
    }
  }
  auto meta = base_meta(cfg, "cdf");
  meta["reference_pt_dbm"] = kReferencePtDbm;
  meta["gamma0_db"] = run.gamma0_db;
  meta["gamma_grid_db"] = {{"start", lo_db}, {"step", step_db}, {"points", grid.size()}};
  meta["failed_points"] = run.failed;
  meta["total_points"] = run.points;
  run.meta_json = meta.dump(2);
  return run;
}

void write_curve_csv(std::ostream& out, const std::vector<OutageCurve>& curves) {
  out << kCurveHeader << "\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << fmt("%.6g", p.pt_dbm) << "," << fmt("%.6f", p.gamma0_db) << "," << to_string(c.source)
          << "," << c.scheme << "," << c.n << "," << fmt("%.10g", p.value) << "\n";
    }
  }
}

void write_cdf_csv(std::ostream& out, const CdfRun& run) {
  out << kCdfHeader << "\n";
  for (const auto& c : run.curves) {
    for (const auto& p : c.points) {
      out << fmt("%.6f", p.gamma_db) << "," << fmt("%.6f", run.gamma0_db) << ","
          << to_string(c.source) << "," << c.scheme << "," << c.n << "," << fmt("%.10g", p.value)
          << "\n";
    }
  }
}

OutageCurve extended_analytic_curve(const ExperimentConfig& cfg, CombiningScheme scheme, int n) {
  constexpr double kFloor = 1e-6;
  constexpr double kMaxPt = 200.0;
  OutageCurve curve{to_string(scheme), n, CurveSource::analytic, {}};
  const double th = cfg.gamma_th();
  for (double pt = cfg.pt_start; pt <= kMaxPt; pt += 1.0) {
    const double g0 = gamma0(cfg.link(pt));
    const double v = analytic_outage(scheme, array_for(cfg, n, g0), th, cfg.conv);
    curve.points.push_back({pt, to_db(g0), v});
    if (v < kFloor && pt >= cfg.pt_stop) break;
  }
  return curve;
}

std::vector<DiversityRow> diversity_table(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<DiversityRow> rows;
  for (auto scheme : schemes_of(cfg)) {
    for (int n : cfg.n_list) {
      auto report = diversity_order(n, cfg.egg(), cfg.pointing.params(), scheme);
      try {
        report.fitted = fit_slope(extended_analytic_curve(cfg, scheme, n));
      } catch (const std::exception&) {
      }
      rows.push_back({scheme, n, report});
    }
  }
  return rows;
}

std::vector<Check> run_validation(const ExperimentConfig& cfg, std::ostream* progress) {
  cfg.validate();
  std::vector<Check> checks;
  auto record = [&](Check c) {
    if (progress) {
      *progress << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << c.measured
                << ", tolerance " << c.tolerance;
      if (!c.detail.empty()) *progress << " (" << c.detail << ")";
      *progress << std::endl;
    }
    checks.push_back(std::move(c));
  };
  const auto egg = cfg.egg();
  const auto pe = cfg.pointing.params();
  const double th = cfg.gamma_th();
  const auto sweep = cfg.sweep();

  // Sampler against the closed-form irradiance CDF.
  {
    constexpr std::uint64_t kDraws = 100000;
    std::vector<double> draws(kDraws);
    mc::Rng rng(mc::substream_seed(cfg.seed, 0xE66));
    for (auto& d : draws) d = mc::sample_egg(egg, rng);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double f = egg_cdf(draws[i], egg);
      ks = std::max({ks, std::abs(f - double(i) / kDraws), std::abs(double(i + 1) / kDraws - f)});
    }
    const double crit = 1.6276 / std::sqrt(double(kDraws));
    record({"egg sampler KS statistic", ks, crit, ks <= crit, "1e5 draws, 1% critical value"});
  }

  // Single aperture against Monte Carlo at 20 log-spaced gamma/gamma0.
  {
    const auto arr = array_for(cfg, 1, 1.0);
    const mc::EmpiricalCdf ecdf(
        mc::sample_statistic(arr, mc::Scheme::single, cfg.trials, cfg.seed, cfg.workers));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double r = std::pow(10.0, -4.0 + 5.0 * i / 19.0);
      const double an = snr_cdf_single(r, egg, pe, 1.0);
      const double sigma = mc::binomial_sigma(an, cfg.trials);
      if (sigma > 0.0) worst = std::max(worst, std::abs(ecdf.estimate(r).p_hat - an) / sigma);
    }
    record({"single-aperture CDF vs Monte Carlo (max |z|)", worst, 3.0, worst <= 3.0,
            "20 points, gamma/gamma0 in [1e-4, 10]"});
  }

  for (auto scheme : schemes_of(cfg)) {
    for (int n : cfg.n_list) {
      const auto tag = to_string(scheme) + " N=" + std::to_string(n);
      if (scheme == CombiningScheme::mrc) {
        const double mass = mrc_pdf_mass(array_for(cfg, n, 1.0), cfg.conv.prefactor);
        record({tag + " bound density mass |1 - mass|", std::abs(mass - 1.0), 1e-4,
                std::abs(mass - 1.0) <= 1e-4, "prefactor " + to_string(cfg.conv.prefactor)});
      }
      const auto ecdf = empirical(cfg, scheme, n);
      double worst_z = 0.0;
      double worst_gap = std::numeric_limits<double>::infinity();
      for (double pt : sweep) {
        const double g0 = gamma0(cfg.link(pt));
        const double an = analytic_outage(scheme, array_for(cfg, n, g0), th, cfg.conv);
        const auto est = ecdf.estimate(th / g0);
        if (scheme == CombiningScheme::sc) {
          const double sigma = mc::binomial_sigma(an, cfg.trials);
          if (sigma > 0.0) worst_z = std::max(worst_z, std::abs(est.p_hat - an) / sigma);
        } else {
          worst_gap = std::min(worst_gap, an - (est.p_hat - est.half_width()));
        }
      }
      if (scheme == CombiningScheme::sc) {
        record({tag + " exact CDF vs max-combining Monte Carlo (max |z|)", worst_z, 3.0,
                worst_z <= 3.0, "transmit-power sweep"});
      } else {
        record({tag + " bound minus (exact-sum MC - CI half-width), minimum", worst_gap, 0.0,
                worst_gap >= 0.0, "transmit-power sweep"});
      }

      const auto curve = extended_analytic_curve(cfg, scheme, n);
      double worst_rel = 0.0;
      for (const auto& p : curve.points) {
        if (!(p.value < 1e-2)) continue;
        const auto arr = array_for(cfg, n, from_db(p.gamma0_db));
        double asym = kNan;
        try {
          asym = asymptotic_outage(scheme, arr, th, cfg.conv);
        } catch (const std::exception&) {
        }
        const double rel = std::isnan(asym) ? std::numeric_limits<double>::infinity()
                                            : std::abs(asym / p.value - 1.0);
        worst_rel = std::max(worst_rel, rel);
      }
      record({tag + " asymptotic relative error where outage < 1e-2", worst_rel, 0.10,
              worst_rel < 0.10, "1 dB grid to outage 1e-6"});

      const auto report = diversity_order(n, egg, pe, scheme);
      double fitted = kNan;
      try {
        fitted = fit_slope(curve);
      } catch (const std::exception&) {
      }
      const double rel = std::abs(fitted / report.analytic - 1.0);
      record({tag + " fitted slope relative to diversity order", rel, 0.15, rel <= 0.15,
              "fitted " + fmt("%.5f", fitted) + ", analytic " + fmt("%.5f", report.analytic) +
                  " (" + to_string(report.binding) + ")"});
    }
  }
  return checks;
}

}  // namespace uwoc::experiments
