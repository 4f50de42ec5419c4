// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is nonzero only when a criterion outside kKnownFailures
// fails (or a known one starts passing, so the list stays honest).

#include <chrono>
#include <cstdio>
#include <set>
#include <string>

#include "ddl_radar/ddl_radar.hpp"

using namespace ddl_radar;

namespace {

const std::set<int> kKnownFailures = {4};

struct Report {
  std::set<int> failed;
  std::set<int> passed;

  void line(int id, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    (ok ? passed : failed).insert(id);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string& s) {
  std::printf("  %s\n", s.c_str());
  std::fflush(stdout);
}

// 1. Load gain table.
void load_gain_table(Report& rep) {
  const long long expect[3][3] = {{31, 71, 147}, {22, 59, 132}, {16, 47, 116}};
  const int sizes[3] = {64, 128, 256};
  bool ok = true;
  std::string got;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const long long g = load_gain(LoadParams::standard(sizes[j], 4 + i)).gain_floor;
      ok = ok && g == expect[i][j];
      got += std::to_string(g) + (j == 2 ? (i == 2 ? "" : "; ") : ",");
    }
  }
  rep.line(1, ok, "load gain floors {" + got + "}");
}

// 2. Threshold approximation fits.
void threshold_fits(Report& rep) {
  struct Row {
    int n, k;
    double minimax_pct, pfa_pct;
  };
  const Row reference[] = {{4, 12, 0.34064, 2.90489}, {4, 16, 0.14638, 1.69826}, {4, 20, 0.07513, 1.07276},
                       {5, 15, 0.27319, 2.67988}, {5, 20, 0.10083, 1.29530}, {5, 25, 0.04777, 0.78369}};
  const auto grid = d3_reference_grid();
  bool ok = true;
  for (const Row& r : reference) {
    const ThresholdFit f = fit_threshold_approx(r.n, r.k, grid);
    const double mm = 100.0 * f.minimax_rel_err;
    const double pf = 100.0 * f.max_pfa_rel_err;
    const bool row_ok = mm <= 1.25 * r.minimax_pct && pf <= 1.25 * r.pfa_pct;
    ok = ok && row_ok;
    note(fmt("n=%d K=%d: minimax %.5f%% (limit %.5f%%), P_FA err %.5f%% (limit %.5f%%) %s", r.n, r.k, mm,
             1.25 * r.minimax_pct, pf, 1.25 * r.pfa_pct, row_ok ? "ok" : "over"));
  }
  rep.line(2, ok, "threshold fits within 1.25x of reference errors on all six rows");
}

// 3. Optimum detector anchor.
void optimum_anchor(Report& rep) {
  Scenario sc;
  const double g = output_sdr(steering_vector(0.25, 64), scenario_covariance(sc), sc.input_sdr());
  const double p = pd_optimum(1e-9, g);
  rep.line(3, std::abs(p - 0.9897) <= 0.001, fmt("optimum P_D = %.6f (target 0.9897 +- 0.001)", p));
}

// 4. RODI degradation anchors.
void rodi_anchor(Report& rep) {
  Scenario sc;
  sc.ddl_training = 24;
  sc.snr_db = 10.0;
  sc.pfa = 1e-6 / 26.0;
  sc.clutter = {ClutterComponent{0.15, 0.0025, 1.0}};
  const HermitianMatrix image = dft_image_covariance(scenario_covariance(sc));
  const std::vector<std::pair<int, int>> regions{{43, 46}, {47, 50}};
  struct Point {
    const char* name;
    double freq, target, tol;
  };
  const Point pts[] = {{"bin 47", 14.0 / 64, 0.7536, 0.003},
                       {"F46", 13.0 / 64, 0.8796, 0.005},
                       {"F1", 13.25 / 64, 0.7916, 0.005},
                       {"F2", 13.5056 / 64, 0.1268, 0.005}};
  bool ok = true;
  for (const Point& p : pts) {
    const double v = rodi_pd(sc, image, regions, p.freq);
    const bool pt_ok = std::abs(v - p.target) <= p.tol;
    ok = ok && pt_ok;
    note(fmt("%-6s F=%.6f: P_D %.4f (target %.4f +- %.3f) %s", p.name, p.freq, v, p.target, p.tol,
             pt_ok ? "ok" : "off"));
  }
  rep.line(4, ok, "RODI bank P_D at bin 47 and at F46, F1, F2");
}

// 5. Empirical false-alarm rates against analytic thresholds.
void false_alarm_validation(Report& rep) {
  const double pfa = 1e-3;
  const long long trials = 1000000;
  const double sigma = std::sqrt(pfa * (1.0 - pfa) / trials);
  const FaSetting settings[] = {{0.0, 0.0025, 60.0}, {0.15, 0.01, 40.0}, {-0.3, 0.05, 20.0}};
  bool ok = true;
  std::uint64_t s = 0;
  for (const FaSetting& fs : settings) {
    const FalseAlarmCount c = ddl_false_alarm_rate({ClutterComponent{fs.center_freq, fs.spread, 1.0}}, fs.cnr_db, 64,
                                                   0.25, 4, 20, pfa, trials, 500 + s++);
    const double za = (c.amf_rate() - pfa) / sigma;
    const double zg = (c.glr_rate() - pfa) / sigma;
    ok = ok && std::abs(za) <= 3.0 && std::abs(zg) <= 3.0;
    note(fmt("F_cp=%g sigma_c=%g CNR=%g dB: AMF %.6f (z=%+.2f), GLR %.6f (z=%+.2f)", fs.center_freq, fs.spread,
             fs.cnr_db, c.amf_rate(), za, c.glr_rate(), zg));
  }
  rep.line(5, ok, "DDL-AMF/GLR false-alarm rates within 3 sigma of 1e-3 over 1e6 trials, three clutter settings");
}

// 6. Known versus unknown Doppler.
void unknown_doppler(Report& rep) {
  Scenario sc;
  std::vector<int> orders;
  std::vector<int> ks;
  for (int n = 2; n <= 10; ++n) {
    orders.push_back(n);
    ks.push_back(5 * n);
  }
  McOptions opt;
  opt.detectors = {DetectorId::DdlAmf, DetectorId::DdlGlr};
  opt.modes = {DopplerMode::Known, DopplerMode::Unknown};
  const long long trials = 10000;
  const PointSimulator sim(sc, orders, ks, opt);
  const auto hits = sim.run(trials, 13, 0);
  const double ref = 0.9897;
  bool ok = true;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto p = [&](std::size_t c) { return static_cast<double>(hits[i][c]) / trials; };
    // channels: amf known, amf unknown, glr known, glr unknown
    const double amf_loss = 100.0 * (1.0 - p(1) / ref);
    const double glr_loss = 100.0 * (1.0 - p(3) / ref);
    note(fmt("n=%2d: AMF known %.4f unknown %.4f (loss %5.1f%%), GLR known %.4f unknown %.4f (loss %5.1f%%)",
             orders[i], p(0), p(1), amf_loss, p(2), p(3), glr_loss));
    if (orders[i] >= 4) ok = ok && amf_loss <= 7.0;
    if (orders[i] == 4) ok = ok && glr_loss >= 30.0;
  }
  rep.line(6, ok, "unknown-F DDL-AMF loss <= 7% for n >= 4 and DDL-GLR loss >= 30% at n = 4, 10000 trials");
}

// 7. Invariants.
void invariants(Report& rep) {
  bool ok = true;
  // (a) full-order DDL statistics equal TD ones.
  {
    Scenario sc;
    sc.pulses = 16;
    sc.ddl_order = 16;
    sc.ddl_training = 40;
    sc.td_training = 40;
    sc.cnr_db = 30.0;
    const CpiSynthesizer synth(sc);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      Rng rng = make_stream(71, 0, t);
      const CMatrix x = synth.cpi(Hypothesis::H1, rng);
      const auto train = synth.training(40, rng);
      const CVector cut = x.row(3).transpose();
      const RptdSet r = rptd_set(0.2, 16, 16);
      const CVector s = steering_vector(0.2, 16);
      const double a = ddl_amf_detect(cut, train, r, 0.2, 1.0).statistic / td_detect(DetectorId::TdAmf, cut, train, s, 1.0).statistic;
      const double g = ddl_glr_detect(cut, train, r, 0.2, 1.0).statistic / td_detect(DetectorId::TdGlr, cut, train, s, 1.0).statistic;
      worst = std::max({worst, std::abs(a - 1.0), std::abs(g - 1.0)});
    }
    ok = ok && worst <= 1e-10;
    note(fmt("(a) full-order congruence: max rel diff %.2e", worst));
  }
  // (b) GLR <= AMF.
  {
    Rng rng = make_stream(72);
    long long violations = 0;
    for (int t = 0; t < 2000; ++t) {
      CMatrix z(4, 12);
      for (int c = 0; c < 12; ++c) z.col(c) = complex_normal_vector(4, rng);
      const HermitianSolve phi(sample_covariance(z));
      const CVector y = complex_normal_vector(4, rng);
      const CVector tv = complex_normal_vector(4, rng);
      violations += glr_statistic(y, tv, phi, 12) > amf_statistic(y, tv, phi);
    }
    ok = ok && violations == 0;
    note(fmt("(b) GLR <= AMF: %lld violations in 2000 draws", violations));
  }
  // (c) captured power of the RPTD grows with n.
  {
    long long violations = 0;
    for (int i = 0; i < 500; ++i) {
      const double f = -0.5 + (i + 0.37) / 500.0;
      double prev = 0.0;
      for (int n = 1; n <= 64; ++n) {
        const double c = captured_power_fraction(f, 64, rptd_set(f, 64, n).bins);
        violations += c < prev - 1e-12;
        prev = c;
      }
      violations += std::abs(prev - 1.0) > 1e-9;
    }
    ok = ok && violations == 0;
    note(fmt("(c) RPTD captured power monotone in n: %lld violations", violations));
  }
  // (d) quadrature and threshold round trip.
  {
    double worst_norm = 0.0;
    double worst_rt = 0.0;
    for (int n : {2, 4, 8, 16}) {
      for (int k : {2 * n, 5 * n, 20 * n}) {
        const int q = k - n + 1;
        const double mass =
            detail::integrate_unit([&](double x) { return beta_pdf(x, q + 1, n - 1); }, 1e-10, 0.0, "acceptance",
                                   detail::beta_breaks(q + 1, n - 1));
        worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
        for (double p : {1e-12, 1e-9, 1e-6, 1e-3}) {
          const double a = amf_alpha(p, k, n);
          worst_rt = std::max(worst_rt, std::abs(amf_pfa(a, k, n) / p - 1.0));
        }
      }
    }
    ok = ok && worst_norm <= 1e-12 && worst_rt <= 1e-9;
    note(fmt("(d) Beta mass error %.2e, P_FA round trip rel error %.2e", worst_norm, worst_rt));
  }
  // (e) peak finder against brute force.
  {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> len_d(3, 80);
    std::uniform_int_distribution<int> level(0, 6);
    long long mismatches = 0;
    for (int t = 0; t < 10000; ++t) {
      std::vector<double> p(static_cast<std::size_t>(len_d(rng)));
      for (auto& v : p) v = level(rng);
      std::vector<int> brute;
      const std::size_t n = p.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > p[(i + n - 1) % n] && p[i] > p[(i + 1) % n]) brute.push_back(static_cast<int>(i + 1));
      }
      mismatches += find_circular_peaks(p) != brute;
    }
    ok = ok && mismatches == 0;
    note(fmt("(e) peak finder vs brute force on 10000 profiles: %lld mismatches", mismatches));
  }
  rep.line(7, ok, "invariant suite (a)-(e)");
}

// 8. Windowed FFT + CA-CFAR below DDL-AMF over the flat region.
void cfar_baseline(Report& rep) {
  McOptions opt;
  opt.detectors = {DetectorId::DdlAmf, DetectorId::CaCfar};
  const long long trials = 2000;
  int below = 0;
  int total = 0;
  for (int i = 0; i < 38; ++i) {
    Scenario sc;
    sc.target_freq = 0.07 + 0.01 * i;
    const PointSimulator sim(sc, {4}, {20}, opt);
    const auto hits = sim.run(trials, 17, static_cast<std::uint64_t>(i));
    const double amf = static_cast<double>(hits[0][0]) / trials;
    const double cfar = static_cast<double>(hits[0][1]) / trials;
    below += cfar < amf;
    ++total;
    if (i % 6 == 0) note(fmt("F=%.2f: DDL-AMF %.4f, CA-CFAR %.4f", sc.target_freq, amf, cfar));
  }
  const double frac = static_cast<double>(below) / total;
  rep.line(8, frac >= 0.9, fmt("CA-CFAR below DDL-AMF at %d of %d points in 0.06 < F < 0.45", below, total));
}

}  // namespace

int main() {
  Report rep;
  const auto timed = [&](const char* name, auto fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn(rep);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  [%s: %.1f s]\n", name, s);
  };
  timed("load gain", load_gain_table);
  timed("threshold fits", threshold_fits);
  timed("optimum anchor", optimum_anchor);
  timed("rodi", rodi_anchor);
  timed("false alarms", false_alarm_validation);
  timed("unknown doppler", unknown_doppler);
  timed("invariants", invariants);
  timed("cfar", cfar_baseline);

  int status = 0;
  for (int id : rep.failed) {
    if (!kKnownFailures.count(id)) {
      std::printf("unexpected failure: criterion %d\n", id);
      status = 1;
    }
  }
  for (int id : kKnownFailures) {
    if (rep.passed.count(id)) {
      std::printf("criterion %d listed as a known failure but passed; update the list\n", id);
      status = 1;
    }
  }
  std::printf("%zu passed, %zu failed (%zu known)\n", rep.passed.size(), rep.failed.size(), kKnownFailures.size());
  return status;
}
