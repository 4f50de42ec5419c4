#pragma once

// Monte Carlo detection: per-trial pipeline (synthesis, Doppler images,
// representative cells, MLD grid, RPTD, detection) for known and unknown
// target Doppler, plus a direct DDL-domain false-alarm sampler.

#include <string>
#include <vector>

#include "ddl_radar/cfar.hpp"
#include "ddl_radar/detectors.hpp"
#include "ddl_radar/performance.hpp"
#include "ddl_radar/random.hpp"
#include "ddl_radar/rptd.hpp"
#include "ddl_radar/signal_model.hpp"

namespace ddl_radar {

/// Which MLD-grid entry of the target cell is tested when F is unknown.
enum class DopplerProtocol {
  NearestTrue,  // entry whose estimate is closest to the true F
  Dominant,     // entry at the global maximum of the cell's profile
  AnyPeak,      // detection if any entry's test fires
};

inline std::string_view protocol_name(DopplerProtocol p) {
  switch (p) {
    case DopplerProtocol::NearestTrue: return "nearest_true";
    case DopplerProtocol::Dominant: return "dominant";
    case DopplerProtocol::AnyPeak: return "any_peak";
  }
  return "unknown";
}

struct McOptions {
  std::vector<DetectorId> detectors{DetectorId::DdlAmf, DetectorId::DdlGlr};
  std::vector<DopplerMode> modes{DopplerMode::Known};  // applies to DDL detectors
  DopplerProtocol protocol = DopplerProtocol::NearestTrue;
  Hypothesis hypothesis = Hypothesis::H1;
  bool require_representative = false;  // miss when the CUT is not a range peak
  CaCfarConfig cfar{};
};

inline bool is_ddl(DetectorId id) {
  return id == DetectorId::DdlAmf || id == DetectorId::DdlGlr;
}

/// Output label of a detector evaluated in a given Doppler mode.
inline std::string curve_label(DetectorId id, DopplerMode mode) {
  std::string s(detector_name(id));
  if (is_ddl(id) && mode == DopplerMode::Unknown) s += "_unknown";
  return s;
}

/// A (detector, mode) column of the hit table.
struct Channel {
  DetectorId id;
  DopplerMode mode;
};

/// Trial engine for one scenario and a set of DDL orders sharing the same
/// trial data: training rows are drawn for the largest K and order i uses
/// the first ks[i] of them.
class PointSimulator {
 public:
  PointSimulator(const Scenario& sc, std::vector<int> orders, std::vector<int> ks, McOptions opt)
      : sc_(sc), orders_(std::move(orders)), ks_(std::move(ks)), opt_(std::move(opt)), synth_(sc) {
    if (orders_.empty() || orders_.size() != ks_.size()) throw std::invalid_argument("PointSimulator: orders/ks");
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (orders_[i] < 2 || orders_[i] > sc_.pulses) throw std::invalid_argument("PointSimulator: order out of range");
      if (ks_[i] <= orders_[i]) throw std::invalid_argument("PointSimulator: K must exceed n");
      k_max_ = std::max(k_max_, ks_[i]);
    }
    for (DetectorId id : opt_.detectors) {
      if (is_ddl(id)) {
        for (DopplerMode m : opt_.modes) channels_.push_back({id, m});
      } else if (id == DetectorId::RodiGlr) {
        throw std::invalid_argument("PointSimulator: RODI bank is evaluated analytically only");
      } else {
        channels_.push_back({id, DopplerMode::Known});
      }
      if (id == DetectorId::CaCfar) k_max_ = std::max(k_max_, opt_.cfar.n_ref);
    }
    const HermitianMatrix sigma = scenario_covariance(sc_).scaled(sc_.disturbance_power());
    const CVector s = steering_vector(sc_.target_freq, sc_.pulses);
    {
      const HermitianSolve solve(sigma);
      opt_filter_ = solve.solve(s);
      opt_threshold_ = -std::log(sc_.pfa) * solve.norm2(s);
    }
    const HermitianMatrix image = dft_image_covariance(sigma);
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const int n = orders_[i];
      const int k = ks_[i];
      OrderData od;
      od.rptd = rptd_set(sc_.target_freq, sc_.pulses, n);
      od.steering = ddl_steering(sc_.target_freq, sc_.pulses, od.rptd.bins);
      od.amf_threshold = amf_threshold(sc_.pfa, k, n);
      od.glr_threshold = glr_threshold(sc_.pfa, k, n);
      const HermitianSolve phi(ddl_extract(image, od.rptd.bins));
      od.opt_filter = phi.solve(od.steering);
      od.opt_threshold = -std::log(sc_.pfa) * phi.norm2(od.steering);
      orders_data_.push_back(std::move(od));
    }
    for (DetectorId id : opt_.detectors) {
      if (id == DetectorId::TdAmf) td_amf_threshold_ = amf_threshold(sc_.pfa, sc_.td_training, sc_.pulses);
      if (id == DetectorId::TdGlr) td_glr_threshold_ = glr_threshold(sc_.pfa, sc_.td_training, sc_.pulses);
    }
    td_steering_ = s;
  }

  const std::vector<Channel>& channels() const { return channels_; }
  const std::vector<int>& orders() const { return orders_; }

  /// Decisions [order][channel] for one trial.
  std::vector<std::vector<char>> trial(Rng& rng) const {
    const CMatrix cpi = synth_.cpi(opt_.hypothesis, rng);
    const std::vector<CVector> train = synth_.training(k_max_, rng);
    std::vector<CVector> td_train;
    if (needs(DetectorId::TdAmf) || needs(DetectorId::TdGlr)) td_train = synth_.training(sc_.td_training, rng);

    const int cut = sc_.target_range_cell;
    const CVector x = cpi.row(cut - 1).transpose();
    const CVector cut_image = dft_image(x);
    const std::vector<CVector> train_images = dft_images(train);

    std::vector<std::vector<char>> out(orders_.size(), std::vector<char>(channels_.size(), 0));

    // Order-independent detectors.
    std::vector<char> shared(channels_.size(), 0);
    for (std::size_t c = 0; c < channels_.size(); ++c) {
      switch (channels_[c].id) {
        case DetectorId::Optimum:
          shared[c] = std::norm(opt_filter_.dot(x)) >= opt_threshold_;
          break;
        case DetectorId::TdAmf:
          shared[c] = td_detect(DetectorId::TdAmf, x, td_train, td_steering_, td_amf_threshold_).decision;
          break;
        case DetectorId::TdGlr:
          shared[c] = td_detect(DetectorId::TdGlr, x, td_train, td_steering_, td_glr_threshold_).decision;
          break;
        case DetectorId::CaCfar: {
          const auto bins = ca_cfar_baseline(x, train, opt_.cfar, sc_.pfa);
          shared[c] = bins[static_cast<std::size_t>(peak_bin(sc_.target_freq, sc_.pulses) - 1)].decision;
          break;
        }
        default:
          break;
      }
    }

    // Unknown-Doppler front end: candidates for F^ in the target cell.
    std::vector<double> candidates;
    if (std::find(opt_.modes.begin(), opt_.modes.end(), DopplerMode::Unknown) != opt_.modes.end()) {
      candidates = doppler_candidates(cpi);
    }

    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const OrderData& od = orders_data_[i];
      const int n = orders_[i];
      const int k = ks_[i];
      const std::vector<CVector> images(train_images.begin(), train_images.begin() + k);
      for (std::size_t c = 0; c < channels_.size(); ++c) {
        const Channel& ch = channels_[c];
        if (ch.id == DetectorId::OptimumDdl) {
          out[i][c] = std::norm(od.opt_filter.dot(ddl_extract(cut_image, od.rptd.bins))) >= od.opt_threshold;
          continue;
        }
        if (!is_ddl(ch.id)) {
          out[i][c] = shared[c];
          continue;
        }
        const double thr = ch.id == DetectorId::DdlAmf ? od.amf_threshold : od.glr_threshold;
        if (ch.mode == DopplerMode::Known) {
          out[i][c] = ddl_detect_images(ch.id, cut_image, images, od.rptd.bins, od.steering, thr).decision;
          continue;
        }
        char hit = 0;
        for (double f_hat : candidates) {
          const RptdSet r = rptd_set(f_hat, sc_.pulses, n);
          const CVector t = ddl_steering(f_hat, sc_.pulses, r.bins);
          if (ddl_detect_images(ch.id, cut_image, images, r.bins, t, thr).decision) {
            hit = 1;
            break;
          }
        }
        out[i][c] = hit;
      }
    }
    return out;
  }

  /// Doppler estimates to test in the target cell under the configured
  /// protocol; empty when gating is on and the cell is not representative.
  std::vector<double> doppler_candidates(const CMatrix& cpi) const {
    const int nfft = sc_.fft_size();
    const int cut = sc_.target_range_cell;
    RVector profile;
    if (opt_.require_representative) {
      RMatrix z(cpi.rows(), nfft);
      for (Eigen::Index r = 0; r < cpi.rows(); ++r) {
        z.row(r) = power_profile(cpi.row(r).transpose(), nfft).transpose();
      }
      const std::vector<int> reps = representative_cells(z);
      if (!std::binary_search(reps.begin(), reps.end(), cut)) return {};
      profile = z.row(cut - 1).transpose();
    } else {
      profile = power_profile(cpi.row(cut - 1).transpose(), nfft);
    }
    const MldGrid grid = mld_grid(profile);
    if (grid.empty()) return {};
    std::vector<double> out;
    switch (opt_.protocol) {
      case DopplerProtocol::NearestTrue:
        out.push_back(grid.nearest(sc_.target_freq)->freq);
        break;
      case DopplerProtocol::Dominant:
        out.push_back(grid.dominant()->freq);
        break;
      case DopplerProtocol::AnyPeak:
        for (const auto& e : grid.entries) out.push_back(e.freq);
        break;
    }
    return out;
  }

  /// Hit counts [order][channel] over trials keyed (seed, point, trial).
  std::vector<std::vector<long long>> run(long long trials, std::uint64_t seed, std::uint64_t point) const {
    std::vector<std::vector<long long>> hits(orders_.size(), std::vector<long long>(channels_.size(), 0));
    for (long long t = 0; t < trials; ++t) {
      Rng rng = make_stream(seed, point, static_cast<std::uint64_t>(t));
      const auto d = trial(rng);
      for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t c = 0; c < d[i].size(); ++c) hits[i][c] += d[i][c];
      }
    }
    return hits;
  }

 private:
  struct OrderData {
    RptdSet rptd{BinSet({1}, 1), 1, 0.0};
    CVector steering;
    double amf_threshold = 0.0;
    double glr_threshold = 0.0;
    CVector opt_filter;
    double opt_threshold = 0.0;
  };

  bool needs(DetectorId id) const {
    return std::find(opt_.detectors.begin(), opt_.detectors.end(), id) != opt_.detectors.end();
  }

  Scenario sc_;
  std::vector<int> orders_;
  std::vector<int> ks_;
  McOptions opt_;
  CpiSynthesizer synth_;
  int k_max_ = 0;
  std::vector<Channel> channels_;
  std::vector<OrderData> orders_data_;
  CVector opt_filter_;
  double opt_threshold_ = 0.0;
  CVector td_steering_;
  double td_amf_threshold_ = 0.0;
  double td_glr_threshold_ = 0.0;
};

inline double binomial_halfwidth(double p, long long trials) {
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct CurveRow {
  double x = 0.0;
  std::string detector;
  double p_d = 0.0;
  double ci_halfwidth = 0.0;
};

struct DetectionCurve {
  std::string abscissa_name;  // F, n or SDR
  std::vector<CurveRow> rows;
  std::string scenario;
  long long trials = 0;
  std::uint64_t seed = 0;

  /// First row matching (x, detector); throws if absent.
  const CurveRow& at(double x, std::string_view detector) const {
    for (const auto& r : rows) {
      if (r.detector == detector && std::abs(r.x - x) <= 1e-12 * std::max(1.0, std::abs(x))) return r;
    }
    throw std::out_of_range("DetectionCurve: no row for " + std::string(detector));
  }
};

/// Appends one row per (order, channel) of a simulated point.
inline void append_rows(DetectionCurve& curve, const PointSimulator& sim,
                        const std::vector<std::vector<long long>>& hits, long long trials,
                        const std::vector<double>& xs) {
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t c = 0; c < hits[i].size(); ++c) {
      const Channel& ch = sim.channels()[c];
      const double p = static_cast<double>(hits[i][c]) / static_cast<double>(trials);
      curve.rows.push_back(CurveRow{xs[i], curve_label(ch.id, ch.mode), p, binomial_halfwidth(p, trials)});
    }
  }
}

struct FalseAlarmCount {
  long long trials = 0;
  long long amf_hits = 0;
  long long glr_hits = 0;
  double amf_threshold = 0.0;
  double glr_threshold = 0.0;

  double amf_rate() const { return static_cast<double>(amf_hits) / static_cast<double>(trials); }
  double glr_rate() const { return static_cast<double>(glr_hits) / static_cast<double>(trials); }
};

/// H0 false alarms of DDL-AMF / DDL-GLR on the RPTD of `freq`. CUT and
/// training vectors are drawn directly in the DDL domain from the n x n
/// block of F_c Sigma F_c^H, which has the same law as extracting them
/// from full time-domain draws.
inline FalseAlarmCount ddl_false_alarm_rate(const std::vector<ClutterComponent>& clutter, double cnr_db,
                                            int n_pulses, double freq, int n, int k, double pfa, long long trials,
                                            std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("ddl_false_alarm_rate: trials must be >= 1");
  const HermitianMatrix sigma = clutter_covariance(clutter, cnr_db, n_pulses);
  const RptdSet r = rptd_set(freq, n_pulses, n);
  const GaussianColorer colorer(ddl_extract(dft_image_covariance(sigma), r.bins));
  const CVector t = ddl_steering(freq, n_pulses, r.bins);
  FalseAlarmCount out;
  out.trials = trials;
  out.amf_threshold = amf_threshold(pfa, k, n);
  out.glr_threshold = glr_threshold(pfa, k, n);
  CMatrix train(n, k);
  for (long long i = 0; i < trials; ++i) {
    Rng rng = make_stream(seed, 0x6661ULL, static_cast<std::uint64_t>(i));
    const CVector y = colorer.draw(rng);
    for (int q = 0; q < k; ++q) train.col(q) = colorer.draw(rng);
    const HermitianSolve phi(sample_covariance(train));
    const double amf = amf_statistic(y, t, phi);
    const double glr = amf / (1.0 + phi.norm2(y) / k);
    out.amf_hits += amf >= out.amf_threshold;
    out.glr_hits += glr >= out.glr_threshold;
  }
  return out;
}

}  // namespace ddl_radar
