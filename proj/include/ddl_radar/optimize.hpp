#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace ddl_radar {

template <std::size_t D>
struct SimplexResult {
  std::array<double, D> x{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead descent (standard coefficients 1, 2, 0.5,
/// 0.5). The initial simplex perturbs each coordinate of `start` by
/// `rel_step` (absolute 2.5e-4 for zero coordinates). Stops when the
/// simplex diameter falls below `x_tol` relative to the best vertex.
template <std::size_t D>
SimplexResult<D> nelder_mead(const std::function<double(const std::array<double, D>&)>& f,
                             const std::array<double, D>& start, double rel_step = 0.05,
                             double x_tol = 1e-12, int max_iter = 20000) {
  using Point = std::array<double, D>;
  std::array<Point, D + 1> pts{};
  std::array<double, D + 1> val{};
  pts[0] = start;
  for (std::size_t i = 0; i < D; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] = start[i] != 0.0 ? start[i] * (1.0 + rel_step) : 2.5e-4;
  }
  for (std::size_t i = 0; i <= D; ++i) val[i] = f(pts[i]);

  auto combine = [](const Point& a, const Point& b, double t) {
    Point r{};
    for (std::size_t k = 0; k < D; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  SimplexResult<D> res;
  int it = 0;
  for (; it < max_iter; ++it) {
    std::array<std::size_t, D + 1> order{};
    for (std::size_t i = 0; i <= D; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::array<Point, D + 1> sp{};
    std::array<double, D + 1> sv{};
    for (std::size_t i = 0; i <= D; ++i) {
      sp[i] = pts[order[i]];
      sv[i] = val[order[i]];
    }
    pts = sp;
    val = sv;

    double diam = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < D; ++k) scale = std::max(scale, std::abs(pts[0][k]));
    for (std::size_t i = 1; i <= D; ++i) {
      for (std::size_t k = 0; k < D; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[0][k]));
    }
    if (diam <= x_tol * std::max(scale, 1e-300)) {
      res.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i < D; ++i) {
      for (std::size_t k = 0; k < D; ++k) centroid[k] += pts[i][k] / static_cast<double>(D);
    }
    const Point xr = combine(centroid, pts[D], -1.0);
    const double fr = f(xr);
    if (fr < val[0]) {
      const Point xe = combine(centroid, pts[D], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[D] = xe;
        val[D] = fe;
      } else {
        pts[D] = xr;
        val[D] = fr;
      }
      continue;
    }
    if (fr < val[D - 1]) {
      pts[D] = xr;
      val[D] = fr;
      continue;
    }
    const bool outside = fr < val[D];
    const Point xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, pts[D], 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : val[D])) {
      pts[D] = xc;
      val[D] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= D; ++i) {
      pts[i] = combine(pts[0], pts[i], 0.5);
      val[i] = f(pts[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= D; ++i) {
    if (val[i] < val[best]) best = i;
  }
  res.x = pts[best];
  res.value = val[best];
  res.iterations = it;
  return res;
}

}  // namespace ddl_radar
