#pragma once

// Zero-Doppler-centered DFT images, DDL extraction, power Doppler
// profiles and peak identification. Bin indices exposed by this header
// are 1-based, matching the Doppler-axis numbering used throughout.

#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "ddl_radar/types.hpp"

namespace ddl_radar {

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
  // kissfft plans are cached per size; one engine per thread.
  thread_local Eigen::FFT<double> engine;
  return engine;
}

inline void require_even(Eigen::Index n, const char* who) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument(std::string(who) + ": length must be even and >= 2");
  }
}

}  // namespace detail

/// Half-length circular rotation; zero frequency moves to index N/2 + 1.
inline CVector fftshift(const CVector& x) {
  detail::require_even(x.size(), "fftshift");
  const Eigen::Index h = x.size() / 2;
  CVector y(x.size());
  y.head(h) = x.tail(h);
  y.tail(h) = x.head(h);
  return y;
}

/// fftshift(fft(x)) with the unnormalized forward transform.
inline CVector dft_image(const CVector& x) {
  detail::require_even(x.size(), "dft_image");
  std::vector<cplx> in(x.data(), x.data() + x.size());
  std::vector<cplx> out;
  detail::fft_engine().fwd(out, in);
  return fftshift(Eigen::Map<const CVector>(out.data(), static_cast<Eigen::Index>(out.size())));
}

/// Row-wise dft_image of an M x N matrix.
inline CMatrix dft_image_rows(const CMatrix& x) {
  CMatrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) y.row(r) = dft_image(x.row(r).transpose()).transpose();
  return y;
}

/// F_c: DFT matrix with rows in zero-Doppler-centered order, so that
/// dft_image(x) == F_c x.
inline CMatrix centered_dft_matrix(int n) {
  detail::require_even(n, "centered_dft_matrix");
  CMatrix f(n, n);
  for (int r = 0; r < n; ++r) {
    const int k = (r + n / 2) % n;
    for (int j = 0; j < n; ++j) {
      const long long kj = (static_cast<long long>(k) * j) % n;
      f(r, j) = std::polar(1.0, -2.0 * kPi * static_cast<double>(kj) / n);
    }
  }
  return f;
}

/// Sigma~ = F_c Sigma F_c^H.
inline HermitianMatrix dft_image_covariance(const HermitianMatrix& sigma) {
  const int n = static_cast<int>(sigma.order());
  const CMatrix f = centered_dft_matrix(n);
  return HermitianMatrix(f * sigma.matrix() * f.adjoint());
}

inline void check_bins(const BinSet& bins, Eigen::Index length) {
  for (int b : bins.indices()) {
    if (b < 1 || b > length) throw std::out_of_range("ddl_extract: bin index outside source range");
  }
}

/// Element k of the result is source[d_k].
inline CVector ddl_extract(const CVector& image, const BinSet& bins) {
  check_bins(bins, image.size());
  CVector v(bins.size());
  for (int k = 0; k < bins.size(); ++k) v(k) = image(bins[static_cast<std::size_t>(k)] - 1);
  return v;
}

/// Entry (k, l) of the result is source[d_k, d_l].
inline HermitianMatrix ddl_extract(const HermitianMatrix& image, const BinSet& bins) {
  check_bins(bins, image.order());
  const int n = bins.size();
  CMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      m(k, l) = image(bins[static_cast<std::size_t>(k)] - 1, bins[static_cast<std::size_t>(l)] - 1);
    }
  }
  return HermitianMatrix(m);
}

/// |dft_image(zero-padded x)|^2 on an N_fft-point grid.
inline RVector power_profile(const CVector& x, int n_fft) {
  if (n_fft < x.size()) throw std::invalid_argument("power_profile: N_fft must be >= N");
  detail::require_even(n_fft, "power_profile");
  CVector padded = CVector::Zero(n_fft);
  padded.head(x.size()) = x;
  return dft_image(padded).cwiseAbs2();
}

/// Strict local maxima under circular topology: the profile is padded with
/// its last element on the left and its first on the right. Returns 1-based
/// indices in ascending order.
inline std::vector<int> find_circular_peaks(std::span<const double> profile) {
  const std::size_t len = profile.size();
  if (len < 3) throw std::invalid_argument("find_circular_peaks: length must be >= 3");
  std::vector<int> peaks;
  for (std::size_t i = 0; i < len; ++i) {
    const double left = profile[(i + len - 1) % len];
    const double right = profile[(i + 1) % len];
    if (profile[i] > left && profile[i] > right) peaks.push_back(static_cast<int>(i) + 1);
  }
  return peaks;
}

inline std::vector<int> find_circular_peaks(const RVector& profile) {
  return find_circular_peaks(std::span<const double>(profile.data(), static_cast<std::size_t>(profile.size())));
}

/// Rows (1-based, ascending, unique) holding a local range peak in at least
/// one Doppler column of Z. Range is not periodic: an edge row counts only
/// when it strictly exceeds its single neighbor.
inline std::vector<int> representative_cells(const RMatrix& z) {
  const Eigen::Index m = z.rows();
  if (m < 3) throw std::invalid_argument("representative_cells: need at least 3 range cells");
  std::vector<char> hit(static_cast<std::size_t>(m), 0);
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < m; ++r) {
      const double v = z(r, c);
      const bool above_prev = (r == 0) || v > z(r - 1, c);
      const bool above_next = (r == m - 1) || v > z(r + 1, c);
      if (above_prev && above_next) hit[static_cast<std::size_t>(r)] = 1;
    }
  }
  std::vector<int> rows;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (hit[static_cast<std::size_t>(r)]) rows.push_back(static_cast<int>(r) + 1);
  }
  return rows;
}

}  // namespace ddl_radar
