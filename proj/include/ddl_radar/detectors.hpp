#pragma once

// Test statistics and decision rules: sample covariance, clairvoyant
// (optimum) filter, adaptive matched filter (AMF) and Kelly's GLR in the
// time domain and on DDL bin subsets, plus the RODI one-hot GLR bank.

#include <string_view>
#include <vector>

#include "ddl_radar/doppler.hpp"
#include "ddl_radar/rptd.hpp"
#include "ddl_radar/types.hpp"

namespace ddl_radar {

/// (1/K) sum v v^H over K vectors of common length d; requires K > d.
inline HermitianMatrix sample_covariance(const std::vector<CVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("sample_covariance: no vectors");
  const Eigen::Index d = vectors.front().size();
  const auto k = static_cast<Eigen::Index>(vectors.size());
  if (k <= d) throw std::invalid_argument("sample_covariance: K must exceed the vector length (singular estimate)");
  CMatrix acc = CMatrix::Zero(d, d);
  for (const auto& v : vectors) {
    if (v.size() != d) throw std::invalid_argument("sample_covariance: length mismatch");
    acc.selfadjointView<Eigen::Lower>().rankUpdate(v);
  }
  const CMatrix full = acc.selfadjointView<Eigen::Lower>();
  return HermitianMatrix(full / static_cast<double>(k));
}

/// Columns of `columns` are the training vectors.
inline HermitianMatrix sample_covariance(const CMatrix& columns) {
  const Eigen::Index d = columns.rows();
  const Eigen::Index k = columns.cols();
  if (k <= d) throw std::invalid_argument("sample_covariance: K must exceed the vector length (singular estimate)");
  CMatrix acc = CMatrix::Zero(d, d);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(columns);
  const CMatrix full = acc.selfadjointView<Eigen::Lower>();
  return HermitianMatrix(full / static_cast<double>(k));
}

/// Hermitian positive-definite solve operator: factor once, apply to any
/// number of right-hand sides. No explicit inverse is formed.
class HermitianSolve {
 public:
  explicit HermitianSolve(const HermitianMatrix& m) : llt_(m.matrix()) {
    if (llt_.info() != Eigen::Success) throw NumericalError("HermitianSolve: matrix is not positive definite");
  }

  Eigen::Index order() const { return llt_.rows(); }
  CVector solve(const CVector& b) const { return llt_.solve(b); }

  /// a^H M^{-1} b
  cplx form(const CVector& a, const CVector& b) const { return a.dot(llt_.solve(b)); }

  /// a^H M^{-1} a, real and >= 0
  double norm2(const CVector& a) const {
    const CVector w = llt_.matrixL().solve(a);
    return w.squaredNorm();
  }

 private:
  Eigen::LLT<CMatrix> llt_;
};

/// |s^H Sigma0^{-1} x|^2 with unit scale factor.
inline double optimum_statistic(const CVector& x, const CVector& s, const HermitianSolve& sigma0) {
  if (x.size() != s.size() || x.size() != sigma0.order()) throw std::invalid_argument("optimum_statistic: size mismatch");
  return std::norm(sigma0.form(s, x));
}

/// |t^H Phi^{-1} y|^2 / (t^H Phi^{-1} t)
inline double amf_statistic(const CVector& y, const CVector& t, const HermitianSolve& phi) {
  if (y.size() != t.size() || y.size() != phi.order()) throw std::invalid_argument("amf_statistic: size mismatch");
  const CVector w = phi.solve(t);
  const double denom = std::real(t.dot(w));
  if (!(denom > 0.0)) throw std::invalid_argument("amf_statistic: zero steering vector");
  return std::norm(w.dot(y)) / denom;
}

/// AMF ratio divided by 1 + y^H Phi^{-1} y / K.
inline double glr_statistic(const CVector& y, const CVector& t, const HermitianSolve& phi, int k) {
  if (k <= 0) throw std::invalid_argument("glr_statistic: K must be positive");
  return amf_statistic(y, t, phi) / (1.0 + phi.norm2(y) / k);
}

enum class DetectorId { Optimum, OptimumDdl, TdAmf, TdGlr, DdlAmf, DdlGlr, RodiGlr, CaCfar };

inline std::string_view detector_name(DetectorId id) {
  switch (id) {
    case DetectorId::Optimum: return "optimum";
    case DetectorId::OptimumDdl: return "optimum_ddl";
    case DetectorId::TdAmf: return "td_amf";
    case DetectorId::TdGlr: return "td_glr";
    case DetectorId::DdlAmf: return "ddl_amf";
    case DetectorId::DdlGlr: return "ddl_glr";
    case DetectorId::RodiGlr: return "rodi_glr";
    case DetectorId::CaCfar: return "ca_cfar";
  }
  return "unknown";
}

struct DetectorOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  bool decision = false;  // H1 iff statistic >= threshold
  DetectorId detector = DetectorId::DdlAmf;
  int order = 0;
};

inline DetectorOutcome decide(double statistic, double threshold, DetectorId id, int order) {
  if (!std::isfinite(statistic)) throw NumericalError("detector statistic is not finite");
  return DetectorOutcome{statistic, threshold, statistic >= threshold, id, order};
}

/// t^_m: DDL steering estimate for frequency F^ on the RPTD bins.
inline CVector ddl_steering(double freq, int n_pulses, const BinSet& bins) {
  return ddl_extract(dft_image(phase_ramp(freq, n_pulses)), bins);
}

/// DDL detection on precomputed Doppler images of the CUT and of the
/// training rows. The sample DDL covariance is formed from the training
/// images restricted to `bins`.
inline DetectorOutcome ddl_detect_images(DetectorId id, const CVector& cut_image,
                                         const std::vector<CVector>& training_images, const BinSet& bins,
                                         const CVector& steering, double threshold) {
  if (id != DetectorId::DdlAmf && id != DetectorId::DdlGlr) {
    throw std::invalid_argument("ddl_detect_images: detector must be DDL-AMF or DDL-GLR");
  }
  std::vector<CVector> train;
  train.reserve(training_images.size());
  for (const auto& img : training_images) train.push_back(ddl_extract(img, bins));
  const HermitianSolve phi(sample_covariance(train));
  const CVector y = ddl_extract(cut_image, bins);
  const int k = static_cast<int>(training_images.size());
  const double stat = id == DetectorId::DdlAmf ? amf_statistic(y, steering, phi) : glr_statistic(y, steering, phi, k);
  return decide(stat, threshold, id, bins.size());
}

inline std::vector<CVector> dft_images(const std::vector<CVector>& rows) {
  std::vector<CVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(dft_image(r));
  return out;
}

/// RPTD-based DDL-AMF on time-domain CUT and training rows.
inline DetectorOutcome ddl_amf_detect(const CVector& cpi_row, const std::vector<CVector>& training_rows,
                                      const RptdSet& rptd, double freq_estimate, double threshold) {
  const int n_pulses = static_cast<int>(cpi_row.size());
  return ddl_detect_images(DetectorId::DdlAmf, dft_image(cpi_row), dft_images(training_rows), rptd.bins,
                           ddl_steering(freq_estimate, n_pulses, rptd.bins), threshold);
}

/// RPTD-based DDL-GLR on time-domain CUT and training rows.
inline DetectorOutcome ddl_glr_detect(const CVector& cpi_row, const std::vector<CVector>& training_rows,
                                      const RptdSet& rptd, double freq_estimate, double threshold) {
  const int n_pulses = static_cast<int>(cpi_row.size());
  return ddl_detect_images(DetectorId::DdlGlr, dft_image(cpi_row), dft_images(training_rows), rptd.bins,
                           ddl_steering(freq_estimate, n_pulses, rptd.bins), threshold);
}

/// Full-order time-domain AMF / GLR with K_T training vectors.
inline DetectorOutcome td_detect(DetectorId id, const CVector& x, const std::vector<CVector>& training,
                                 const CVector& steering, double threshold) {
  const HermitianSolve sigma(sample_covariance(training));
  const int k = static_cast<int>(training.size());
  double stat = 0.0;
  if (id == DetectorId::TdAmf) {
    stat = amf_statistic(x, steering, sigma);
  } else if (id == DetectorId::TdGlr) {
    stat = glr_statistic(x, steering, sigma, k);
  } else {
    throw std::invalid_argument("td_detect: detector must be TD-AMF or TD-GLR");
  }
  return decide(stat, threshold, id, static_cast<int>(x.size()));
}

/// RODI bank: one GLR statistic per bin of the region, each with the
/// one-hot DDL steering vector of that bin. Inputs are already restricted
/// to the region's bins.
inline std::vector<double> rodi_glr_bank(const CVector& cut_ddl, const std::vector<CVector>& training_ddl) {
  const HermitianSolve phi(sample_covariance(training_ddl));
  const auto n = cut_ddl.size();
  if (n != phi.order()) throw std::invalid_argument("rodi_glr_bank: size mismatch");
  const int k = static_cast<int>(training_ddl.size());
  const CVector u = phi.solve(cut_ddl);  // Phi^{-1} y
  const double denom = 1.0 + std::real(cut_ddl.dot(u)) / k;
  std::vector<double> stats(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    CVector e = CVector::Zero(n);
    e(m) = 1.0;
    const double diag = std::real(phi.solve(e)(m));  // [Phi^{-1}]_mm
    stats[static_cast<std::size_t>(m)] = std::norm(u(m)) / diag / denom;
  }
  return stats;
}

/// Same bank, extracting the region `rodi_bins` from full Doppler images.
inline std::vector<double> rodi_glr_bank(const CVector& cut_image, const std::vector<CVector>& training_images,
                                         const BinSet& rodi_bins) {
  std::vector<CVector> train;
  train.reserve(training_images.size());
  for (const auto& img : training_images) train.push_back(ddl_extract(img, rodi_bins));
  return rodi_glr_bank(ddl_extract(cut_image, rodi_bins), train);
}

}  // namespace ddl_radar
