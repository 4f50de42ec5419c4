#pragma once

// Analytic detection performance: Beta-density quadrature for AMF false
// alarm and detection probabilities, closed forms for the GLR and the
// clairvoyant filter, threshold inversion, the minimax threshold
// approximation and the computational-load model.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>

#include "ddl_radar/detectors.hpp"
#include "ddl_radar/optimize.hpp"
#include "ddl_radar/types.hpp"

namespace ddl_radar {

namespace detail {

inline int dof(int k, int n) {
  if (n < 1) throw std::invalid_argument("order n must be >= 1");
  const int q = k - n + 1;
  if (q <= 0) throw std::invalid_argument("Q = K - n + 1 must be positive");
  return q;
}

/// log of the Beta(a, b) density with the normalization computed once.
struct LogBetaDensity {
  double a, b, norm;

  LogBetaDensity(double a_, double b_) : a(a_), b(b_) {
    const double beta = boost::math::beta(a, b);
    norm = beta > 0.0 ? -std::log(beta) : std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  }

  double operator()(double x) const {
    const double la = a == 1.0 ? 0.0 : (a - 1.0) * std::log(x);
    const double lb = b == 1.0 ? 0.0 : (b - 1.0) * std::log1p(-x);
    return norm + la + lb;
  }
};

/// Split points for integrands dominated by a Beta(a, b) density: the mode
/// and a few standard deviations either side.
inline std::vector<double> beta_breaks(double a, double b) {
  const double mode = a + b > 2.0 ? (a - 1.0) / (a + b - 2.0) : 0.5;
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  std::vector<double> pts;
  for (double z : {-48.0, -24.0, -12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
    const double x = mode + z * sd;
    if (x > 0.0 && x < 1.0 && (pts.empty() || x > pts.back())) pts.push_back(x);
  }
  return pts;
}

/// Integral over [0, 1], piecewise between `breaks`; throws if the
/// Kronrod-Gauss error estimate misses `rel_tol` (relative to the L1 norm)
/// or `abs_floor`, whichever is looser. The estimate is pessimistic: on
/// smooth integrands the Kronrod value is typically several orders of
/// magnitude more accurate.
template <class F>
double integrate_unit(F f, double rel_tol, double abs_floor, const char* who, const std::vector<double>& breaks = {}) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  struct Piece {
    double a, b, value, err, l1;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  auto eval = [&](double a, double b) {
    Piece p{a, b, 0.0, 0.0, 0.0};
    p.value = Rule::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
    return p;
  };
  std::vector<double> pts{0.0};
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  pts.push_back(1.0);
  std::priority_queue<Piece> heap;
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Piece p = eval(pts[i], pts[i + 1]);
    value += p.value;
    err += p.err;
    l1 += p.l1;
    heap.push(p);
  }
  for (int it = 0; it < 4000 && err > std::max(rel_tol * l1, abs_floor); ++it) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    const Piece left = eval(worst.a, mid);
    const Piece right = eval(mid, worst.b);
    value += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  if (!std::isfinite(value) || err > std::max(10.0 * rel_tol * l1, abs_floor)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: quadrature did not converge (error estimate %.3g)", who, err);
    throw NumericalError(buf);
  }
  return value;
}

}  // namespace detail

/// Beta(a, b) density; a, b >= 1.
inline double beta_pdf(double x, int a, int b) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_pdf: x outside [0, 1]");
  if (a < 1 || b < 1) throw std::invalid_argument("beta_pdf: a, b must be >= 1");
  if ((x == 0.0 && a > 1) || (x == 1.0 && b > 1)) return 0.0;
  return std::exp(detail::LogBetaDensity(a, b)(x));
}

/// alpha = P_FA^(-1/Q) - 1 for the GLR family.
inline double glr_alpha(double pfa, int k, int n) {
  const int q = detail::dof(k, n);
  if (!(pfa > 0.0 && pfa <= 1.0)) throw std::invalid_argument("glr_alpha: P_FA must lie in (0, 1]");
  return std::expm1(-std::log(pfa) / q);
}

/// lambda = K xi with xi = alpha / (1 + alpha).
inline double glr_threshold(double pfa, int k, int n) {
  const double a = glr_alpha(pfa, k, n);
  return k * a / (1.0 + a);
}

/// P_FA of the AMF at normalized threshold alpha (lambda = K alpha).
inline double amf_pfa(double alpha, int k, int n) {
  const int q = detail::dof(k, n);
  if (n < 2) throw std::invalid_argument("amf_pfa: n must be >= 2");
  if (!(alpha >= 0.0)) throw std::invalid_argument("amf_pfa: alpha must be >= 0");
  if (alpha == 0.0) return 1.0;
  const detail::LogBetaDensity lbeta(q + 1, n - 1);
  auto f = [=](double rho) {
    if ((rho <= 0.0) || (rho >= 1.0 && n > 2)) return 0.0;
    return std::exp(lbeta(rho) - q * std::log1p(alpha * rho));
  };
  return detail::integrate_unit(f, 1e-10, 0.0, "amf_pfa", detail::beta_breaks(q + 1, n - 1));
}

/// Solves amf_pfa(alpha) = P_FA on the log scale by TOMS 748.
inline double amf_alpha(double pfa, int k, int n) {
  if (!(pfa > 0.0 && pfa <= 1.0)) throw std::invalid_argument("amf_alpha: P_FA must lie in (0, 1]");
  if (pfa == 1.0) return 0.0;
  const double target = std::log(pfa);
  auto g = [&](double a) { return std::log(amf_pfa(a, k, n)) - target; };
  double hi = 2.0 * glr_alpha(pfa, k, n);
  double ghi = g(hi);
  for (int i = 0; i < 60 && ghi > 0.0; ++i) {
    hi *= 2.0;
    ghi = g(hi);
  }
  if (!(ghi <= 0.0) || !std::isfinite(ghi)) {
    throw NumericalError("amf_alpha: bracket failure, g(0) = " + std::to_string(-target) + ", g(" +
                         std::to_string(hi) + ") = " + std::to_string(ghi));
  }
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, 0.0, hi, -target, ghi,
                                                   boost::math::tools::eps_tolerance<double>(44), iters);
  if (iters >= 200) throw NumericalError("amf_alpha: root finding did not converge");
  return 0.5 * (r.first + r.second);
}

inline double amf_threshold(double pfa, int k, int n) { return k * amf_alpha(pfa, k, n); }

/// P_FA^(1 / (1 + gamma0)).
inline double pd_optimum(double pfa, double gamma0) {
  if (!(pfa > 0.0 && pfa <= 1.0)) throw std::invalid_argument("pd_optimum: P_FA must lie in (0, 1]");
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("pd_optimum: gamma0 must be >= 0");
  return std::exp(std::log(pfa) / (1.0 + gamma0));
}

/// gamma_in s^H Sigma0^{-1} s.
inline double output_sdr(const CVector& steering, const HermitianMatrix& sigma0, double gamma_in) {
  if (steering.size() != sigma0.order()) throw std::invalid_argument("output_sdr: size mismatch");
  if (steering.squaredNorm() == 0.0) throw std::invalid_argument("output_sdr: zero steering vector");
  const HermitianSolve solve(sigma0);
  return gamma_in * solve.norm2(steering);
}

/// gamma~0 on `bins`, given the Doppler-image covariance F_c Sigma0 F_c^H.
inline double ddl_output_sdr(double freq, const HermitianMatrix& sigma0_image, const BinSet& bins, double gamma_in) {
  const int n_pulses = static_cast<int>(sigma0_image.order());
  return output_sdr(ddl_steering(freq, n_pulses, bins), ddl_extract(sigma0_image, bins), gamma_in);
}

/// GLR detection probability at output SDR gamma0 (order-n value).
inline double pd_glr(double pfa, double gamma0, int k, int n) {
  const int q = detail::dof(k, n);
  if (n < 2) throw std::invalid_argument("pd_glr: n must be >= 2");
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("pd_glr: gamma0 must be >= 0");
  const double a = glr_alpha(pfa, k, n);
  const detail::LogBetaDensity lbeta(q + 1, n - 1);
  auto f = [=](double rho) {
    if ((rho <= 0.0) || (rho >= 1.0 && n > 2)) return 0.0;
    return std::exp(lbeta(rho) - q * std::log1p(a / (1.0 + gamma0 * rho)));
  };
  return detail::integrate_unit(f, 1e-10, 1e-12, "pd_glr", detail::beta_breaks(q + 1, n - 1));
}

/// AMF detection probability at output SDR gamma0.
inline double pd_amf(double pfa, double gamma0, int k, int n) {
  const int q = detail::dof(k, n);
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("pd_amf: gamma0 must be >= 0");
  const double a = amf_alpha(pfa, k, n);
  const detail::LogBetaDensity lbeta(q + 1, n - 1);
  auto f = [=](double rho) {
    if ((rho <= 0.0) || (rho >= 1.0 && n > 2)) return 0.0;
    return std::exp(lbeta(rho) - q * std::log1p(a * rho / (1.0 + gamma0 * rho)));
  };
  return detail::integrate_unit(f, 1e-10, 1e-12, "pd_amf", detail::beta_breaks(q + 1, n - 1));
}

/// 41 log-spaced P_FA values: five per decade on [1e-16, 1e-6], shared
/// decade endpoints counted once.
inline std::vector<double> d3_reference_grid() {
  std::vector<double> grid;
  for (int e = -16; e <= -6; ++e) {
    for (int j = 0; j < 4; ++j) {
      if (e == -6 && j > 0) break;
      grid.push_back(std::pow(10.0, e + 0.25 * j));
    }
  }
  return grid;
}

/// Coefficients of alpha_a(P) = c1 P^(-1/c2) - c3 on the normalized
/// (alpha) threshold scale; lambda_a = K alpha_a.
struct ThresholdFit {
  int n = 0;
  int k = 0;
  std::array<double, 3> c{};
  double minimax_rel_err = 0.0;
  double max_pfa_rel_err = 0.0;
  double pfa_lo = 0.0;
  double pfa_hi = 0.0;
  bool converged = false;
};

inline double approx_alpha(const ThresholdFit& fit, double pfa) {
  return fit.c[0] * std::pow(pfa, -1.0 / fit.c[1]) - fit.c[2];
}

struct ApproxThreshold {
  double lambda = 0.0;
  bool extrapolated = false;
  bool negative = false;
};

inline ApproxThreshold approx_threshold(const ThresholdFit& fit, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("approx_threshold: P_FA must lie in (0, 1)");
  ApproxThreshold out;
  out.lambda = fit.k * approx_alpha(fit, pfa);
  out.extrapolated = pfa < fit.pfa_lo || pfa > fit.pfa_hi;
  out.negative = out.lambda < 0.0;
  return out;
}

/// Fills the two error columns of `fit` against exact values on `grid`.
inline void score_fit(ThresholdFit& fit, const std::vector<double>& grid, const std::vector<double>& exact_alpha) {
  fit.minimax_rel_err = 0.0;
  fit.max_pfa_rel_err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = approx_alpha(fit, grid[i]);
    fit.minimax_rel_err = std::max(fit.minimax_rel_err, std::abs(exact_alpha[i] - a) / exact_alpha[i]);
    const double p = a > 0.0 ? amf_pfa(a, fit.k, fit.n) : 1.0;
    fit.max_pfa_rel_err = std::max(fit.max_pfa_rel_err, std::abs(p - grid[i]) / grid[i]);
  }
}

/// Minimax fit of the threshold approximation by simplex descent from
/// (1, K, 1), followed by three restarts from the best point so far.
inline ThresholdFit fit_threshold_approx(int n, int k, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("fit_threshold_approx: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw std::invalid_argument("fit_threshold_approx: P_FA outside (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("fit_threshold_approx: grid must be sorted");
  }
  std::vector<double> exact;
  exact.reserve(grid.size());
  for (double p : grid) exact.push_back(amf_alpha(p, k, n));

  const std::function<double(const std::array<double, 3>&)> objective = [&](const std::array<double, 3>& c) {
    if (!(c[1] > 0.0)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = c[0] * std::pow(grid[i], -1.0 / c[1]) - c[2];
      worst = std::max(worst, std::abs(exact[i] - a) / exact[i]);
    }
    return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
  };

  SimplexResult<3> best = nelder_mead<3>(objective, {1.0, static_cast<double>(k), 1.0});
  const std::array<double, 3> steps{0.1, 0.02, 0.005};
  for (double step : steps) {
    const SimplexResult<3> r = nelder_mead<3>(objective, best.x, step);
    if (r.value <= best.value) best = r;
  }

  ThresholdFit fit;
  fit.n = n;
  fit.k = k;
  fit.c = best.x;
  fit.pfa_lo = grid.front();
  fit.pfa_hi = grid.back();
  fit.converged = best.converged;
  score_fit(fit, grid, exact);
  return fit;
}

/// Computational-load inputs. Derived: M_R = round(gamma M / 100),
/// N_p = N_D M_R.
struct LoadParams {
  int big_n = 64;
  int n = 4;
  int m = 8000;
  int n_fft = 256;
  int n_d = 64;
  double gamma_percent = 90.0;

  long long m_r() const { return std::llround(gamma_percent * m / 100.0); }
  long long n_p() const { return static_cast<long long>(n_d) * m_r(); }

  void validate() const {
    if (big_n <= 0 || n <= 0 || m <= 0 || n_fft <= 0 || n_d <= 0 || !(gamma_percent > 0.0)) {
      throw std::invalid_argument("LoadParams: all parameters must be positive");
    }
    if (n_fft % big_n != 0) throw std::invalid_argument("LoadParams: N_fft must be a multiple of N");
  }

  static LoadParams standard(int big_n, int n, int m = 8000, double gamma = 90.0) {
    return LoadParams{big_n, n, m, 4 * big_n, big_n, gamma};
  }
};

struct LoadGain {
  double cl_td = 0.0;
  double cl_ddl = 0.0;
  double gain = 0.0;
  long long gain_floor = 0;
};

inline LoadGain load_gain(const LoadParams& p) {
  p.validate();
  const double big_n = p.big_n;
  const double n = p.n;
  const double mr = static_cast<double>(p.m_r());
  const double np = static_cast<double>(p.n_p());
  const double fft_n = 1.5 * big_n * std::log2(big_n);
  const double fft_pad = 1.5 * p.n_fft * std::log2(static_cast<double>(p.n_fft));
  LoadGain g;
  g.cl_td = 6.0 * big_n * big_n * big_n * mr + 2.0 * big_n * big_n * np + mr * fft_pad;
  g.cl_ddl = np * (6.0 * n * n * n + 2.0 * n * n) + p.m * fft_n + mr * fft_pad + np * fft_n;
  g.gain = g.cl_td / g.cl_ddl;
  g.gain_floor = static_cast<long long>(std::floor(g.gain));
  return g;
}

}  // namespace ddl_radar
