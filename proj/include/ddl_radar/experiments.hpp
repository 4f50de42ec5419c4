#pragma once

// Experiment runners. Each produces one CSV document (LF endings, `#`
// metadata lines first, then a header row) that depends only on the
// configuration and seed.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ddl_radar/config.hpp"
#include "ddl_radar/monte_carlo.hpp"
#include "ddl_radar/performance.hpp"

namespace ddl_radar {

inline constexpr std::string_view kVersion = "1.0.0";

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string metadata(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# ddl-radar " << kVersion << "\n";
  os << "# experiment: " << experiment_name(cfg.experiment) << "\n";
  os << "# scenario: " << cfg.scenario.describe() << "\n";
  os << "# seed: " << cfg.seed << "\n";
  os << "# trials: " << cfg.trials << "\n";
  std::istringstream lines(serialize(cfg));
  std::string line;
  while (std::getline(lines, line)) os << "# config: " << line << "\n";
  return os.str();
}

}  // namespace detail

/// Analytic P_D of the selected detectors at the scenario's true F.
inline void append_analytic(DetectionCurve& curve, const Scenario& sc, double x, int n, int k,
                            const std::vector<DetectorId>& detectors) {
  const HermitianMatrix sigma0 = scenario_covariance(sc);
  const double gin = sc.input_sdr();
  const double g_full = output_sdr(steering_vector(sc.target_freq, sc.pulses), sigma0, gin);
  const RptdSet r = rptd_set(sc.target_freq, sc.pulses, n);
  const double g_ddl = ddl_output_sdr(sc.target_freq, dft_image_covariance(sigma0), r.bins, gin);
  for (DetectorId id : detectors) {
    double p = -1.0;
    switch (id) {
      case DetectorId::Optimum: p = pd_optimum(sc.pfa, g_full); break;
      case DetectorId::OptimumDdl: p = pd_optimum(sc.pfa, g_ddl); break;
      case DetectorId::DdlAmf: p = pd_amf(sc.pfa, g_ddl, k, n); break;
      case DetectorId::DdlGlr: p = pd_glr(sc.pfa, g_ddl, k, n); break;
      case DetectorId::TdAmf: p = pd_amf(sc.pfa, g_full, sc.td_training, sc.pulses); break;
      case DetectorId::TdGlr: p = pd_glr(sc.pfa, g_full, sc.td_training, sc.pulses); break;
      default: break;
    }
    if (p >= 0.0) curve.rows.push_back(CurveRow{x, std::string(detector_name(id)) + "_analytic", p, 0.0});
  }
}

inline McOptions mc_options(const ExperimentConfig& cfg) {
  McOptions o;
  o.detectors = cfg.detectors;
  o.modes = cfg.modes;
  o.protocol = cfg.protocol;
  o.require_representative = cfg.require_representative;
  o.cfar = cfg.cfar;
  return o;
}

/// P_D-vs-F, P_D-vs-n or P_D-vs-SDR curve (Monte Carlo plus analytic rows).
inline DetectionCurve monte_carlo_curve(const ExperimentConfig& cfg) {
  DetectionCurve curve;
  curve.scenario = cfg.scenario.describe();
  curve.trials = cfg.trials;
  curve.seed = cfg.seed;
  const McOptions opt = mc_options(cfg);
  switch (cfg.experiment) {
    case Experiment::PdVsF: {
      curve.abscissa_name = "F";
      for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        Scenario sc = cfg.scenario;
        sc.target_freq = cfg.sweep[i];
        const int n = sc.ddl_order;
        const PointSimulator sim(sc, {n}, {cfg.k_for(n)}, opt);
        append_rows(curve, sim, sim.run(cfg.trials, cfg.seed, i), cfg.trials, {sc.target_freq});
        if (cfg.analytic) append_analytic(curve, sc, sc.target_freq, n, cfg.k_for(n), cfg.detectors);
      }
      break;
    }
    case Experiment::PdVsN: {
      curve.abscissa_name = "n";
      std::vector<int> orders;
      std::vector<int> ks;
      for (double x : cfg.sweep) {
        orders.push_back(static_cast<int>(x));
        ks.push_back(cfg.k_for(orders.back()));
      }
      const PointSimulator sim(cfg.scenario, orders, ks, opt);
      const auto hits = sim.run(cfg.trials, cfg.seed, 0);
      DetectionCurve mc = curve;
      append_rows(mc, sim, hits, cfg.trials, cfg.sweep);
      // Interleave analytic rows after each order's Monte Carlo rows.
      const std::size_t per = sim.channels().size();
      for (std::size_t i = 0; i < orders.size(); ++i) {
        for (std::size_t c = 0; c < per; ++c) curve.rows.push_back(mc.rows[i * per + c]);
        if (cfg.analytic) append_analytic(curve, cfg.scenario, cfg.sweep[i], orders[i], ks[i], cfg.detectors);
      }
      break;
    }
    case Experiment::PdVsSdr: {
      curve.abscissa_name = "SDR";
      for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        Scenario sc = cfg.scenario;
        sc.snr_db = cfg.sweep[i] + linear_to_db(sc.disturbance_power() / sc.noise_power());
        const int n = sc.ddl_order;
        const PointSimulator sim(sc, {n}, {cfg.k_for(n)}, opt);
        append_rows(curve, sim, sim.run(cfg.trials, cfg.seed, i), cfg.trials, {cfg.sweep[i]});
        if (cfg.analytic) append_analytic(curve, sc, cfg.sweep[i], n, cfg.k_for(n), cfg.detectors);
      }
      break;
    }
    default:
      throw std::invalid_argument("monte_carlo_curve: not a curve experiment");
  }
  return curve;
}

inline std::string curve_csv(const DetectionCurve& curve) {
  std::ostringstream os;
  os << "# abscissa: " << curve.abscissa_name << "\n";
  os << "abscissa,detector,p_d,ci_halfwidth\n";
  for (const auto& r : curve.rows) {
    os << detail::num(r.x) << "," << r.detector << "," << detail::num(r.p_d) << "," << detail::num(r.ci_halfwidth)
       << "\n";
  }
  return os.str();
}

/// Analytic DDL-GLR P_D for the RODI region holding the peak bin of F, with
/// the matched DDL steering over that region. Returns -1 if no region
/// contains the bin.
inline double rodi_pd(const Scenario& sc, const HermitianMatrix& sigma0_image,
                      const std::vector<std::pair<int, int>>& regions, double freq) {
  const int d = peak_bin(freq, sc.pulses);
  for (const auto& [a, b] : regions) {
    if (d < a || d > b) continue;
    const BinSet bins = BinSet::contiguous(a, b - a + 1, sc.pulses);
    const double g = ddl_output_sdr(freq, sigma0_image, bins, sc.input_sdr());
    return pd_glr(sc.pfa, g, sc.ddl_training, bins.size());
  }
  return -1.0;
}

inline std::string rodi_compare_csv(const ExperimentConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const HermitianMatrix sigma0 = scenario_covariance(sc);
  const HermitianMatrix image = dft_image_covariance(sigma0);
  std::ostringstream os;
  os << "# abscissa: F\n";
  os << "abscissa,detector,p_d,ci_halfwidth\n";
  for (double f : cfg.sweep) {
    const double pr = rodi_pd(sc, image, cfg.rodi_regions, f);
    if (pr >= 0.0) os << detail::num(f) << ",rodi_glr_analytic," << detail::num(pr) << ",0\n";
    const RptdSet r = rptd_set(f, sc.pulses, sc.ddl_order);
    const double g = ddl_output_sdr(f, image, r.bins, sc.input_sdr());
    os << detail::num(f) << ",ddl_glr_analytic," << detail::num(pd_glr(sc.pfa, g, sc.ddl_training, sc.ddl_order))
       << ",0\n";
    const double g0 = output_sdr(steering_vector(f, sc.pulses), sigma0, sc.input_sdr());
    os << detail::num(f) << ",optimum_analytic," << detail::num(pd_optimum(sc.pfa, g0)) << ",0\n";
  }
  return os.str();
}

inline std::string thresholds_csv(const ExperimentConfig& cfg) {
  const int n = cfg.scenario.ddl_order;
  const int k = cfg.scenario.ddl_training;
  std::ostringstream os;
  os << "n,K,pfa,alpha_glr,lambda_glr,alpha_amf,lambda_amf\n";
  for (double p : cfg.sweep) {
    const double ag = glr_alpha(p, k, n);
    const double aa = amf_alpha(p, k, n);
    os << n << "," << k << "," << detail::num(p) << "," << detail::num(ag) << "," << detail::num(glr_threshold(p, k, n))
       << "," << detail::num(aa) << "," << detail::num(k * aa) << "\n";
  }
  return os.str();
}

inline std::string fits_csv(const std::vector<ThresholdFit>& fits) {
  std::ostringstream os;
  os << "n,K,c1,c2,c3,minimax_err_pct,max_pfa_err_pct\n";
  for (const auto& f : fits) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%.15g,%.15g,%.15g,%.5f,%.5f\n", f.n, f.k, f.c[0], f.c[1], f.c[2],
                  100.0 * f.minimax_rel_err, 100.0 * f.max_pfa_rel_err);
    os << buf;
  }
  return os.str();
}

inline std::string load_gain_csv(const std::vector<int>& orders, const std::vector<int>& sizes, int m, double gamma) {
  std::ostringstream os;
  os << "n,N,cl_td,cl_ddl,gain_exact,gain_floor\n";
  for (int n : orders) {
    for (int big_n : sizes) {
      const LoadGain g = load_gain(LoadParams::standard(big_n, n, m, gamma));
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d,%d,%.0f,%.0f,%.6f,%lld\n", n, big_n, g.cl_td, g.cl_ddl, g.gain, g.gain_floor);
      os << buf;
    }
  }
  return os.str();
}

inline std::string fa_validate_csv(const ExperimentConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  std::ostringstream os;
  os << "setting,f_cp,sigma_c,cnr_db,detector,pfa_target,pfa_empirical,sigma_binomial,z_score\n";
  const double sigma = std::sqrt(sc.pfa * (1.0 - sc.pfa) / static_cast<double>(cfg.trials));
  for (std::size_t s = 0; s < cfg.fa_settings.size(); ++s) {
    const FaSetting& fs = cfg.fa_settings[s];
    const FalseAlarmCount c =
        ddl_false_alarm_rate({ClutterComponent{fs.center_freq, fs.spread, 1.0}}, fs.cnr_db, sc.pulses,
                             sc.target_freq, sc.ddl_order, sc.ddl_training, sc.pfa, cfg.trials, cfg.seed + s);
    for (const auto& [name, rate] : {std::pair<std::string, double>{"ddl_amf", c.amf_rate()},
                                     std::pair<std::string, double>{"ddl_glr", c.glr_rate()}}) {
      os << s + 1 << "," << detail::num(fs.center_freq) << "," << detail::num(fs.spread) << ","
         << detail::num(fs.cnr_db) << "," << name << "," << detail::num(sc.pfa) << "," << detail::num(rate) << ","
         << detail::num(sigma) << "," << detail::num((rate - sc.pfa) / sigma) << "\n";
    }
  }
  return os.str();
}

/// Full CSV document for a configuration.
inline std::string run_experiment_csv(const ExperimentConfig& cfg) {
  cfg.validate();
  std::string body;
  switch (cfg.experiment) {
    case Experiment::PdVsF:
    case Experiment::PdVsN:
    case Experiment::PdVsSdr: body = curve_csv(monte_carlo_curve(cfg)); break;
    case Experiment::Thresholds: body = thresholds_csv(cfg); break;
    case Experiment::FitThresholds: {
      std::vector<ThresholdFit> fits;
      const std::vector<double> grid = d3_reference_grid();
      for (const auto& [n, k] : cfg.fit_pairs) fits.push_back(fit_threshold_approx(n, k, grid));
      body = fits_csv(fits);
      break;
    }
    case Experiment::LoadGain: body = load_gain_csv(cfg.load_orders, cfg.load_sizes, cfg.load_m, cfg.load_gamma); break;
    case Experiment::FaValidate: body = fa_validate_csv(cfg); break;
    case Experiment::RodiCompare: body = rodi_compare_csv(cfg); break;
  }
  return detail::metadata(cfg) + body;
}

/// Writes <out_dir>/<stem>.csv and returns its path.
inline std::filesystem::path run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const std::string csv = run_experiment_csv(cfg);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = out_dir / (cfg.stem() + ".csv");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << csv;
  if (!f) throw std::runtime_error("write failed: " + path.string());
  return path;
}

}  // namespace ddl_radar
