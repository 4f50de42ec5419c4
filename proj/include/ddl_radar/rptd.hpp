#pragma once

// Region of possible target detection (RPTD): the circularly contiguous
// run of n Doppler bins holding the largest share of a tone's power,
// together with the quadratic-interpolation Doppler estimator and the
// MLD grid built from profile peaks.

#include <optional>
#include <vector>

#include "ddl_radar/doppler.hpp"
#include "ddl_radar/signal_model.hpp"

namespace ddl_radar {

/// Bin of maximal |s~_i|^2 for the tone F: round(F N) + N/2 + 1 with
/// wraparound into [1, N].
inline int peak_bin(double freq, int n) {
  if (!(std::abs(freq) <= 0.5)) throw std::invalid_argument("peak_bin: |F| must be <= 0.5");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("peak_bin: N must be even");
  const int d0 = static_cast<int>(std::lround(freq * n)) + n / 2 + 1;
  if (d0 < 1) return d0 + n;
  if (d0 > n) return d0 - n;
  return d0;
}

struct RptdSet {
  BinSet bins;     // circular order, starting at the low edge of the window
  int peak_bin;    // d_m
  double freq;     // F or F^ that generated the set
};

/// Doppler profile p~_i = |s~_i|^2 of the tone F on the N-bin grid.
inline RVector tone_profile(double freq, int n) { return dft_image(phase_ramp(freq, n)).cwiseAbs2(); }

/// Greedy growth from d_m: each step annexes whichever boundary neighbor
/// (with circular wrap) has the larger profile value, the lower bin index
/// on ties.
inline RptdSet rptd_set(double freq, int n_pulses, int order) {
  if (order < 1 || order > n_pulses) throw std::invalid_argument("rptd_set: need 1 <= n <= N");
  const int dm = peak_bin(freq, n_pulses);
  const RVector p = tone_profile(freq, n_pulses);
  auto wrap = [n_pulses](int d) { return ((d - 1) % n_pulses + n_pulses) % n_pulses + 1; };

  int lo = dm;  // window is lo, lo+1, ..., hi (mod N)
  int hi = dm;
  for (int step = 1; step < order; ++step) {
    const int left = wrap(lo - 1);
    const int right = wrap(hi + 1);
    const double pl = p(left - 1);
    const double pr = p(right - 1);
    bool take_left = pl > pr || (pl == pr && left < right);
    if (take_left) {
      lo = left;
    } else {
      hi = right;
    }
  }
  std::vector<int> bins;
  bins.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) bins.push_back(wrap(lo + k));
  return RptdSet{BinSet(std::move(bins), n_pulses), dm, freq};
}

/// Share of the tone's total power inside the given bins.
inline double captured_power_fraction(double freq, int n_pulses, const BinSet& bins) {
  const RVector p = tone_profile(freq, n_pulses);
  double in = 0.0;
  for (int b : bins.indices()) in += p(b - 1);
  return in / p.sum();
}

struct FineEstimate {
  double freq = 0.0;    // F^ in [-0.5, 0.5)
  double offset = 0.0;  // vertex offset from the peak, in grid bins
  bool degenerate = false;
};

inline double wrap_frequency(double f) {
  double w = f - std::floor(f + 0.5);
  if (w >= 0.5) w -= 1.0;
  return w;
}

/// Vertex of the parabola through the peak and its two circular
/// neighbors, converted to normalized Doppler on the centered grid.
inline FineEstimate fine_doppler_estimate(const RVector& profile, int peak_index) {
  const int len = static_cast<int>(profile.size());
  if (len < 3) throw std::invalid_argument("fine_doppler_estimate: profile too short");
  if (peak_index < 1 || peak_index > len) throw std::out_of_range("fine_doppler_estimate: peak index");
  const double pm = profile((peak_index - 2 + len) % len);
  const double p0 = profile(peak_index - 1);
  const double pp = profile(peak_index % len);
  const double curvature = pm - 2.0 * p0 + pp;
  FineEstimate est;
  if (!(curvature < 0.0)) {
    est.degenerate = true;
  } else {
    est.offset = std::clamp(0.5 * (pm - pp) / curvature, -0.5, 0.5);
  }
  const double fractional_bin = peak_index + est.offset;
  est.freq = wrap_frequency((fractional_bin - (len / 2 + 1)) / len);
  return est;
}

struct MldEntry {
  int peak_index;  // 1-based on the N_fft grid
  double freq;     // F^
  double power;    // profile value at the peak
};

/// Non-uniform Doppler grid: one fine estimate per circular profile peak.
struct MldGrid {
  std::vector<MldEntry> entries;

  bool empty() const { return entries.empty(); }

  /// Entry at the global profile maximum.
  std::optional<MldEntry> dominant() const {
    if (entries.empty()) return std::nullopt;
    return *std::max_element(entries.begin(), entries.end(),
                             [](const MldEntry& a, const MldEntry& b) { return a.power < b.power; });
  }

  /// Entry whose estimate is circularly closest to `freq`.
  std::optional<MldEntry> nearest(double freq) const {
    if (entries.empty()) return std::nullopt;
    return *std::min_element(entries.begin(), entries.end(), [freq](const MldEntry& a, const MldEntry& b) {
      return std::abs(wrap_frequency(a.freq - freq)) < std::abs(wrap_frequency(b.freq - freq));
    });
  }
};

inline MldGrid mld_grid(const RVector& profile) {
  MldGrid grid;
  for (int idx : find_circular_peaks(profile)) {
    const FineEstimate est = fine_doppler_estimate(profile, idx);
    grid.entries.push_back(MldEntry{idx, est.freq, profile(idx - 1)});
  }
  return grid;
}

}  // namespace ddl_radar
