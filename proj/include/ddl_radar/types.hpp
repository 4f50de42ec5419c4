#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ddl_radar {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical procedure cannot deliver a result (non-PSD
/// covariance, quadrature or root-finding failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Conjugate-symmetric complex matrix. Construction checks the symmetry
/// and then stores the exactly symmetrized value 0.5 (A + A^H).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const CMatrix& m, double rel_tol = 1e-10) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("HermitianMatrix: matrix is not square");
    }
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (m.size() > 0 && asym > rel_tol * scale) {
      throw std::invalid_argument("HermitianMatrix: matrix is not conjugate-symmetric");
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix identity(Eigen::Index order) {
    return HermitianMatrix(CMatrix::Identity(order, order));
  }

  Eigen::Index order() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  HermitianMatrix scaled(double factor) const {
    HermitianMatrix out;
    out.m_ = factor * m_;
    return out;
  }

  /// Ascending real eigenvalues.
  RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

 private:
  CMatrix m_;
};

/// Ordered set of distinct 1-based Doppler bin indices within [1, N].
class BinSet {
 public:
  BinSet() = default;

  BinSet(std::vector<int> indices, int n_bins) : idx_(std::move(indices)), n_bins_(n_bins) {
    if (n_bins_ < 1) throw std::invalid_argument("BinSet: bin count must be positive");
    if (idx_.empty()) throw std::invalid_argument("BinSet: empty bin set");
    if (static_cast<int>(idx_.size()) > n_bins_) {
      throw std::invalid_argument("BinSet: more bins than the Doppler axis holds");
    }
    std::vector<int> sorted = idx_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("BinSet: duplicate bin index");
    }
    if (sorted.front() < 1 || sorted.back() > n_bins_) {
      throw std::out_of_range("BinSet: bin index outside [1, N]");
    }
  }

  /// Contiguous run first, first+1, ..., first+count-1 (no wrap).
  static BinSet contiguous(int first, int count, int n_bins) {
    std::vector<int> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = first + i;
    return BinSet(std::move(v), n_bins);
  }

  const std::vector<int>& indices() const { return idx_; }
  int size() const { return static_cast<int>(idx_.size()); }
  int axis_length() const { return n_bins_; }
  int operator[](std::size_t k) const { return idx_[k]; }
  bool contains(int bin) const { return std::find(idx_.begin(), idx_.end(), bin) != idx_.end(); }

 private:
  std::vector<int> idx_;
  int n_bins_ = 0;
};

}  // namespace ddl_radar
