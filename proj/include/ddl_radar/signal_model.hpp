#pragma once

// Scenario description and time-domain CPI synthesis: steering vectors,
// Gaussian-PSD clutter covariance (single or mixed), colored complex
// Gaussian draws and Swerling I target injection.

#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddl_radar/random.hpp"
#include "ddl_radar/types.hpp"

namespace ddl_radar {

struct ClutterComponent {
  double center_freq = 0.0;     // normalized Doppler, cycles/pulse
  double spread = 0.0025;       // Gaussian spectral width parameter
  double power_fraction = 1.0;  // share of the total clutter power
};

inline void validate(const ClutterComponent& c) {
  if (!(std::abs(c.center_freq) < 0.5)) {
    throw std::invalid_argument("clutter center_freq must satisfy |F_cp| < 0.5");
  }
  if (!(c.spread > 0.0)) throw std::invalid_argument("clutter spread must be positive");
  if (!(c.power_fraction > 0.0 && c.power_fraction <= 1.0)) {
    throw std::invalid_argument("clutter power_fraction must lie in (0, 1]");
  }
}

inline void validate_mixture(const std::vector<ClutterComponent>& mix) {
  if (mix.empty()) throw std::invalid_argument("clutter mixture is empty");
  double total = 0.0;
  for (const auto& c : mix) {
    validate(c);
    total += c.power_fraction;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("clutter power fractions must sum to 1");
  }
}

enum class Hypothesis { H0, H1 };
enum class DopplerMode { Known, Unknown };

/// Full experiment description. Powers are referenced to unit noise power.
struct Scenario {
  int pulses = 64;             // N
  int range_cells = 8;         // M
  int ddl_order = 4;           // n
  int td_training = 320;       // K_T
  int ddl_training = 20;       // K
  double cnr_db = 60.0;
  double snr_db = 15.0;
  double pfa = 1e-9;
  std::vector<ClutterComponent> clutter{ClutterComponent{}};
  double target_freq = 0.25;   // true Doppler used for synthesis
  DopplerMode doppler = DopplerMode::Known;
  int fft_factor = 4;          // q, N_fft = q N
  int target_range_cell = 4;   // 1-based

  double noise_power() const { return 1.0; }
  double clutter_power() const {
    return std::isinf(cnr_db) && cnr_db < 0 ? 0.0 : db_to_linear(cnr_db);
  }
  double signal_power() const { return db_to_linear(snr_db); }
  double disturbance_power() const { return clutter_power() + noise_power(); }
  /// gamma_in = P_s / (P_c + P_n)
  double input_sdr() const { return signal_power() / disturbance_power(); }
  double input_sdr_db() const { return linear_to_db(input_sdr()); }
  int fft_size() const { return fft_factor * pulses; }

  void validate() const {
    if (pulses < 2 || pulses % 2 != 0) throw std::invalid_argument("N must be an even integer >= 2");
    if (range_cells < 3) throw std::invalid_argument("M must be >= 3");
    if (ddl_order < 2 || ddl_order > pulses) throw std::invalid_argument("n must satisfy 2 <= n <= N");
    if (ddl_training <= ddl_order) throw std::invalid_argument("K must exceed n");
    if (td_training <= pulses) throw std::invalid_argument("K_T must exceed N");
    if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("pfa must lie in (0, 1)");
    if (!(std::abs(target_freq) < 0.5)) throw std::invalid_argument("target_freq must satisfy |F| < 0.5");
    if (fft_factor < 1) throw std::invalid_argument("fft_factor must be >= 1");
    if (target_range_cell < 1 || target_range_cell > range_cells) {
      throw std::invalid_argument("target_range_cell must lie in [1, M]");
    }
    validate_mixture(clutter);
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    os << "N=" << pulses << " M=" << range_cells << " n=" << ddl_order << " K_T=" << td_training
       << " K=" << ddl_training << " cnr_db=" << cnr_db << " snr_db=" << snr_db << " pfa=" << pfa
       << " F=" << target_freq << " doppler=" << (doppler == DopplerMode::Known ? "known" : "unknown")
       << " q=" << fft_factor << " cut=" << target_range_cell;
    for (const auto& c : clutter) {
      os << " clutter=(" << c.center_freq << "," << c.spread << "," << c.power_fraction << ")";
    }
    return os.str();
  }
};

/// exp(j 2 pi k F), k = 0..N-1, without the |F| < 0.5 check. Used for
/// estimated frequencies that may sit on the +-0.5 edge.
inline CVector phase_ramp(double freq, int n) {
  CVector s(n);
  for (int k = 0; k < n; ++k) s(k) = std::polar(1.0, 2.0 * kPi * k * freq);
  return s;
}

inline CVector steering_vector(double freq, int n) {
  if (!(std::abs(freq) < 0.5)) throw std::invalid_argument("steering_vector: |F| must be < 0.5");
  if (n < 1) throw std::invalid_argument("steering_vector: N must be >= 1");
  return phase_ramp(freq, n);
}

/// Normalized Gaussian-PSD clutter covariance C_0 of one component.
inline CMatrix clutter_shape(const ClutterComponent& c, int n) {
  CMatrix c0(n, n);
  for (int m = 0; m < n; ++m) {
    for (int l = 0; l < n; ++l) {
      const double d = m - l;
      const double a = kPi * c.spread * d;
      c0(m, l) = std::exp(cplx(-2.0 * a * a, d * 2.0 * kPi * c.center_freq));
    }
  }
  return c0;
}

/// Sigma_0 = (P_c C_0 + P_n I) / (P_c + P_n), unit diagonal, with C_0 the
/// power-weighted mixture of the component shapes.
inline HermitianMatrix clutter_covariance(const std::vector<ClutterComponent>& components,
                                          double cnr_db, int n) {
  validate_mixture(components);
  if (n < 1) throw std::invalid_argument("clutter_covariance: N must be >= 1");
  const double pc = (std::isinf(cnr_db) && cnr_db < 0) ? 0.0 : db_to_linear(cnr_db);
  const double pn = 1.0;
  CMatrix c0 = CMatrix::Zero(n, n);
  for (const auto& c : components) c0 += c.power_fraction * clutter_shape(c, n);
  CMatrix sigma = (pc * c0 + pn * CMatrix::Identity(n, n)) / (pc + pn);
  HermitianMatrix h(sigma);
  Eigen::LLT<CMatrix> llt(h.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("clutter_covariance: result is not positive definite");
  }
  return h;
}

inline HermitianMatrix scenario_covariance(const Scenario& sc) {
  return clutter_covariance(sc.clutter, sc.cnr_db, sc.pulses);
}

/// Square-root factor L (L L^H = Sigma) from the eigendecomposition, with
/// eigenvalues clamped from below at 1e-12 lambda_max.
class GaussianColorer {
 public:
  explicit GaussianColorer(const HermitianMatrix& cov) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cov.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("GaussianColorer: eigendecomposition failed");
    RVector lam = es.eigenvalues();
    const double lmax = lam.maxCoeff();
    if (!(lmax > 0.0) || !std::isfinite(lmax)) {
      throw NumericalError("GaussianColorer: covariance has no positive eigenvalue");
    }
    if (lam.minCoeff() < -1e-10 * lmax) {
      throw NumericalError("GaussianColorer: covariance is not positive semidefinite");
    }
    const double floor = 1e-12 * lmax;
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(std::max(lam(i), floor));
    factor_ = es.eigenvectors() * lam.asDiagonal();
  }

  Eigen::Index order() const { return factor_.rows(); }
  const CMatrix& factor() const { return factor_; }

  CVector draw(Rng& rng) const { return factor_ * complex_normal_vector(factor_.cols(), rng); }

 private:
  CMatrix factor_;
};

/// Reusable CPI generator for one scenario. Rows are independent draws of
/// the unnormalized disturbance; under H1 the CUT row also gets a s(F)
/// with a ~ CN(0, P_s), fixed over the CPI (Swerling I).
class CpiSynthesizer {
 public:
  explicit CpiSynthesizer(const Scenario& sc)
      : sc_(validated(sc)),
        colorer_(scenario_covariance(sc).scaled(sc.disturbance_power())),
        steering_(steering_vector(sc.target_freq, sc.pulses)) {}

  const Scenario& scenario() const { return sc_; }
  const GaussianColorer& colorer() const { return colorer_; }

  CMatrix cpi(Hypothesis h, Rng& rng) const {
    CMatrix x(sc_.range_cells, sc_.pulses);
    for (int r = 0; r < sc_.range_cells; ++r) x.row(r) = colorer_.draw(rng).transpose();
    if (h == Hypothesis::H1) {
      const cplx a = std::sqrt(sc_.signal_power()) * complex_normal(rng);
      x.row(sc_.target_range_cell - 1) += a * steering_.transpose();
    }
    return x;
  }

  std::vector<CVector> training(int count, Rng& rng) const {
    if (count < 1) throw std::invalid_argument("training: count must be >= 1");
    std::vector<CVector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int q = 0; q < count; ++q) out.push_back(colorer_.draw(rng));
    return out;
  }

 private:
  static const Scenario& validated(const Scenario& sc) {
    sc.validate();
    return sc;
  }

  Scenario sc_;
  GaussianColorer colorer_;
  CVector steering_;
};

/// M x N range-pulse matrix; bit-identical for a fixed seed.
inline CMatrix synthesize_cpi(const Scenario& sc, Hypothesis h, std::uint64_t seed) {
  CpiSynthesizer synth(sc);
  Rng rng = make_stream(seed);
  return synth.cpi(h, rng);
}

/// `count` i.i.d. target-free draws with covariance `cov` (unnormalized).
inline std::vector<CVector> draw_training(const HermitianMatrix& cov, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("draw_training: count must be >= 1");
  GaussianColorer colorer(cov);
  Rng rng = make_stream(seed, 0x7472616eULL);
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int q = 0; q < count; ++q) out.push_back(colorer.draw(rng));
  return out;
}

}  // namespace ddl_radar
