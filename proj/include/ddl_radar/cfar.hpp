#pragma once

// Conventional baseline: windowed N-point FFT per range cell followed by a
// cell-averaging CFAR across range, one test per Doppler bin.

#include <vector>

#include "ddl_radar/detectors.hpp"
#include "ddl_radar/doppler.hpp"

namespace ddl_radar {

enum class WindowKind { Rectangular, Taylor };

struct CaCfarConfig {
  WindowKind window = WindowKind::Taylor;
  int nbar = 5;
  double sll_db = -35.0;
  int n_ref = 20;
  int guard = 1;  // per side, along range

  void validate() const {
    if (n_ref < 2) throw std::invalid_argument("CaCfarConfig: n_ref must be >= 2");
    if (guard < 0) throw std::invalid_argument("CaCfarConfig: guard must be >= 0");
    if (window == WindowKind::Taylor && (nbar < 1 || !(sll_db < 0.0))) {
      throw std::invalid_argument("CaCfarConfig: Taylor window needs nbar >= 1 and sll_db < 0");
    }
  }
};

/// Taylor window with nbar nearly constant sidelobes at sll_db (< 0).
inline RVector taylor_window(int len, int nbar, double sll_db) {
  if (len < 1) throw std::invalid_argument("taylor_window: length must be >= 1");
  const double a = std::acosh(std::pow(10.0, -sll_db / 20.0)) / kPi;
  const double a2 = a * a;
  const double sp2 = nbar * nbar / (a2 + (nbar - 0.5) * (nbar - 0.5));
  std::vector<double> fm(static_cast<std::size_t>(std::max(nbar - 1, 0)));
  for (int m = 1; m < nbar; ++m) {
    double num = 1.0;
    double den = 1.0;
    for (int i = 1; i < nbar; ++i) {
      num *= 1.0 - m * m / sp2 / (a2 + (i - 0.5) * (i - 0.5));
      if (i != m) den *= 1.0 - static_cast<double>(m * m) / (i * i);
    }
    fm[static_cast<std::size_t>(m - 1)] = ((m % 2 == 1) ? 1.0 : -1.0) * num / (2.0 * den);
  }
  RVector w(len);
  for (int k = 0; k < len; ++k) {
    const double xi = (k - 0.5 * len + 0.5) / len;
    double v = 1.0;
    for (int m = 1; m < nbar; ++m) v += 2.0 * fm[static_cast<std::size_t>(m - 1)] * std::cos(2.0 * kPi * m * xi);
    w(k) = v;
  }
  return w;
}

inline RVector cfar_window(const CaCfarConfig& cfg, int len) {
  if (cfg.window == WindowKind::Rectangular) return RVector::Ones(len);
  return taylor_window(len, cfg.nbar, cfg.sll_db);
}

/// Threshold multiplier for exponential cells: n_ref (P_FA^(-1/n_ref) - 1).
inline double ca_cfar_scale(double pfa, int n_ref) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("ca_cfar_scale: P_FA must lie in (0, 1)");
  return n_ref * std::expm1(-std::log(pfa) / n_ref);
}

/// |windowed Doppler image|^2 of one row.
inline RVector windowed_power(const CVector& row, const RVector& window) {
  if (row.size() != window.size()) throw std::invalid_argument("windowed_power: size mismatch");
  return dft_image(row.cwiseProduct(window.cast<cplx>())).cwiseAbs2();
}

/// One outcome per Doppler bin of the CUT. `neighbors` are the reference
/// rows (guard cells already excluded); the first n_ref are used.
inline std::vector<DetectorOutcome> ca_cfar_baseline(const CVector& cpi_row, const std::vector<CVector>& neighbors,
                                                     const CaCfarConfig& cfg, double pfa) {
  cfg.validate();
  if (static_cast<int>(neighbors.size()) < cfg.n_ref) {
    throw std::invalid_argument("ca_cfar_baseline: insufficient reference cells");
  }
  const int len = static_cast<int>(cpi_row.size());
  const RVector w = cfar_window(cfg, len);
  const double scale = ca_cfar_scale(pfa, cfg.n_ref);
  RVector mean = RVector::Zero(len);
  for (int r = 0; r < cfg.n_ref; ++r) mean += windowed_power(neighbors[static_cast<std::size_t>(r)], w);
  mean /= cfg.n_ref;
  const RVector cut = windowed_power(cpi_row, w);
  std::vector<DetectorOutcome> out;
  out.reserve(static_cast<std::size_t>(len));
  for (int d = 0; d < len; ++d) out.push_back(decide(cut(d), scale * mean(d), DetectorId::CaCfar, len));
  return out;
}

/// Reference rows around `cut` (1-based) in a range block: n_ref/2 per
/// side beyond `guard` cells, shifted to the other side at the edges.
inline std::vector<CVector> cfar_reference_rows(const CMatrix& block, int cut, const CaCfarConfig& cfg) {
  cfg.validate();
  const int m = static_cast<int>(block.rows());
  if (cut < 1 || cut > m) throw std::out_of_range("cfar_reference_rows: CUT outside block");
  std::vector<int> picks;
  int lo = cut - cfg.guard - 1;
  int hi = cut + cfg.guard + 1;
  bool left_turn = true;
  while (static_cast<int>(picks.size()) < cfg.n_ref && (lo >= 1 || hi <= m)) {
    if ((left_turn && lo >= 1) || hi > m) {
      picks.push_back(lo--);
    } else {
      picks.push_back(hi++);
    }
    left_turn = !left_turn;
  }
  if (static_cast<int>(picks.size()) < cfg.n_ref) {
    throw std::invalid_argument("cfar_reference_rows: insufficient reference cells");
  }
  std::sort(picks.begin(), picks.end());
  std::vector<CVector> rows;
  rows.reserve(picks.size());
  for (int r : picks) rows.push_back(block.row(r - 1).transpose());
  return rows;
}

}  // namespace ddl_radar
