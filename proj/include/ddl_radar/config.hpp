#pragma once

// Experiment configuration: a line-oriented `key = value` format with `#`
// comments. See README.md for the key reference.

#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ddl_radar/cfar.hpp"
#include "ddl_radar/monte_carlo.hpp"
#include "ddl_radar/signal_model.hpp"

namespace ddl_radar {

enum class Experiment { PdVsF, PdVsN, PdVsSdr, Thresholds, FitThresholds, LoadGain, FaValidate, RodiCompare };

inline constexpr std::array<std::pair<Experiment, std::string_view>, 8> kExperimentNames{{
    {Experiment::PdVsF, "pd_vs_f"},
    {Experiment::PdVsN, "pd_vs_n"},
    {Experiment::PdVsSdr, "pd_vs_sdr"},
    {Experiment::Thresholds, "thresholds"},
    {Experiment::FitThresholds, "fit_thresholds"},
    {Experiment::LoadGain, "load_gain"},
    {Experiment::FaValidate, "fa_validate"},
    {Experiment::RodiCompare, "rodi_compare"},
}};

inline std::string_view experiment_name(Experiment e) {
  for (const auto& [k, v] : kExperimentNames) {
    if (k == e) return v;
  }
  return "unknown";
}

inline bool is_monte_carlo(Experiment e) {
  return e == Experiment::PdVsF || e == Experiment::PdVsN || e == Experiment::PdVsSdr || e == Experiment::FaValidate;
}

/// One clutter setting of the false-alarm validation experiment.
struct FaSetting {
  double center_freq = 0.0;
  double spread = 0.0025;
  double cnr_db = 60.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::PdVsF;
  Scenario scenario{};
  std::vector<double> sweep;
  long long trials = 2000;
  std::uint64_t seed = 1;
  std::string output;  // file stem, defaults to the experiment name
  int k_factor = 5;    // K = k_factor n when n is swept
  bool explicit_k = false;
  std::vector<DetectorId> detectors{DetectorId::DdlAmf, DetectorId::DdlGlr, DetectorId::Optimum};
  std::vector<DopplerMode> modes{DopplerMode::Known};
  DopplerProtocol protocol = DopplerProtocol::NearestTrue;
  bool require_representative = false;
  bool analytic = true;
  CaCfarConfig cfar{};
  std::vector<std::pair<int, int>> fit_pairs{{4, 12}, {4, 16}, {4, 20}, {5, 15}, {5, 20}, {5, 25}};
  std::vector<int> load_orders{4, 5, 6};
  std::vector<int> load_sizes{64, 128, 256};
  int load_m = 8000;
  double load_gamma = 90.0;
  std::vector<FaSetting> fa_settings{{0.0, 0.0025, 60.0}, {0.15, 0.01, 40.0}, {-0.3, 0.05, 20.0}};
  std::vector<std::pair<int, int>> rodi_regions{{43, 46}, {47, 50}};

  std::string stem() const { return output.empty() ? std::string(experiment_name(experiment)) : output; }

  /// DDL training count for order n.
  int k_for(int n) const { return experiment == Experiment::PdVsN ? k_factor * n : scenario.ddl_training; }

  void validate() const {
    scenario.validate();
    if (is_monte_carlo(experiment) && trials < 100) throw std::invalid_argument("trials: must be >= 100");
    if ((experiment == Experiment::PdVsF || experiment == Experiment::PdVsN || experiment == Experiment::PdVsSdr ||
         experiment == Experiment::Thresholds || experiment == Experiment::RodiCompare) &&
        sweep.empty()) {
      throw std::invalid_argument("sweep: must be nonempty");
    }
    if (k_factor < 1) throw std::invalid_argument("k_factor: must be >= 1");
    for (double x : sweep) {
      if (experiment == Experiment::PdVsF || experiment == Experiment::RodiCompare) {
        if (!(std::abs(x) < 0.5)) throw std::invalid_argument("sweep: Doppler values must satisfy |F| < 0.5");
      }
      if (experiment == Experiment::PdVsN) {
        const int n = static_cast<int>(x);
        if (n != x || n < 2 || n > scenario.pulses) throw std::invalid_argument("sweep: orders must be integers in [2, N]");
      }
      if (experiment == Experiment::Thresholds && !(x > 0.0 && x < 1.0)) {
        throw std::invalid_argument("sweep: P_FA values must lie in (0, 1)");
      }
    }
    cfar.validate();
    for (const auto& [n, k] : fit_pairs) {
      if (n < 2 || k <= n) throw std::invalid_argument("fit_pairs: need n >= 2 and K > n");
    }
    for (const auto& [a, b] : rodi_regions) {
      if (experiment != Experiment::RodiCompare) break;
      if (a < 1 || b < a || b > scenario.pulses) throw std::invalid_argument("rodi: region must satisfy 1 <= first <= last <= N");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::invalid_argument key_error(const std::string& key, const std::string& what) {
  return std::invalid_argument("config key '" + key + "': " + what);
}

inline double to_double(const std::string& key, const std::string& text) {
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (text.empty() || r.ec != std::errc() || r.ptr != end) throw key_error(key, "expected a number, got '" + text + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (text.empty() || r.ec != std::errc() || r.ptr != end) throw key_error(key, "expected an integer, got '" + text + "'");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw key_error(key, "expected true or false, got '" + text + "'");
}

/// "a, b, c" or "start:step:stop" (inclusive, tolerant to rounding).
inline std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw key_error(key, "range must be start:step:stop");
    const double a = to_double(key, parts[0]);
    const double step = to_double(key, parts[1]);
    const double b = to_double(key, parts[2]);
    if (!(step > 0.0) || b < a) throw key_error(key, "range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw key_error(key, "range has too many points");
    for (long long i = 0; i < count; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", a + static_cast<double>(i) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
    return out;
  }
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

inline DetectorId to_detector(const std::string& key, const std::string& text) {
  for (DetectorId id : {DetectorId::Optimum, DetectorId::OptimumDdl, DetectorId::TdAmf, DetectorId::TdGlr,
                        DetectorId::DdlAmf, DetectorId::DdlGlr, DetectorId::CaCfar}) {
    if (detector_name(id) == text) return id;
  }
  throw key_error(key, "unknown detector '" + text + "'");
}

inline std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int p = 1; p <= 17; ++p) {
    char tmp[64];
    std::snprintf(tmp, sizeof tmp, "%.*g", p, v);
    if (std::strtod(tmp, nullptr) == v) return tmp;
  }
  return buf;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  using namespace detail;
  ExperimentConfig cfg;
  Scenario& sc = cfg.scenario;
  bool have_kt = false;
  bool have_clutter = false;
  bool have_sweep = false;
  std::vector<ClutterComponent> clutter;
  std::vector<FaSetting> fa;
  std::vector<std::pair<int, int>> rodi;
  std::vector<std::pair<int, int>> pairs;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string val = trim(std::string_view(body).substr(eq + 1));
    if (val.empty()) throw key_error(key, "missing value");

    if (key == "experiment") {
      bool found = false;
      for (const auto& [e, name] : kExperimentNames) {
        if (name == val) {
          cfg.experiment = e;
          found = true;
        }
      }
      if (!found) throw key_error(key, "unknown experiment '" + val + "'");
    } else if (key == "N") {
      sc.pulses = to_int<int>(key, val);
    } else if (key == "M") {
      sc.range_cells = to_int<int>(key, val);
    } else if (key == "n") {
      sc.ddl_order = to_int<int>(key, val);
    } else if (key == "K") {
      sc.ddl_training = to_int<int>(key, val);
      cfg.explicit_k = true;
    } else if (key == "K_T") {
      sc.td_training = to_int<int>(key, val);
      have_kt = true;
    } else if (key == "k_factor") {
      cfg.k_factor = to_int<int>(key, val);
    } else if (key == "cnr_db") {
      sc.cnr_db = to_double(key, val);
    } else if (key == "snr_db") {
      sc.snr_db = to_double(key, val);
    } else if (key == "pfa") {
      sc.pfa = to_double(key, val);
    } else if (key == "F") {
      sc.target_freq = to_double(key, val);
      if (!(std::abs(sc.target_freq) < 0.5)) throw key_error(key, "target Doppler must satisfy |F| < 0.5");
    } else if (key == "doppler") {
      if (val == "known") {
        cfg.modes = {DopplerMode::Known};
      } else if (val == "unknown") {
        cfg.modes = {DopplerMode::Unknown};
      } else if (val == "both") {
        cfg.modes = {DopplerMode::Known, DopplerMode::Unknown};
      } else {
        throw key_error(key, "expected known, unknown or both");
      }
    } else if (key == "q") {
      sc.fft_factor = to_int<int>(key, val);
    } else if (key == "cut") {
      sc.target_range_cell = to_int<int>(key, val);
    } else if (key == "clutter") {
      const auto parts = split(val, ',');
      if (parts.size() != 2 && parts.size() != 3) throw key_error(key, "expected F_cp, sigma_c[, fraction]");
      ClutterComponent c{to_double(key, parts[0]), to_double(key, parts[1]),
                         parts.size() == 3 ? to_double(key, parts[2]) : 1.0};
      try {
        validate(c);
      } catch (const std::invalid_argument& e) {
        throw key_error(key, e.what());
      }
      clutter.push_back(c);
      have_clutter = true;
    } else if (key == "sweep") {
      cfg.sweep = to_list(key, val);
      have_sweep = true;
    } else if (key == "trials") {
      cfg.trials = to_int<long long>(key, val);
    } else if (key == "seed") {
      cfg.seed = to_int<std::uint64_t>(key, val);
    } else if (key == "output") {
      if (val.find('/') != std::string::npos) throw key_error(key, "must be a file stem without '/'");
      cfg.output = val;
    } else if (key == "detectors") {
      cfg.detectors.clear();
      for (const auto& d : split(val, ',')) cfg.detectors.push_back(to_detector(key, d));
    } else if (key == "protocol") {
      if (val == "nearest_true") {
        cfg.protocol = DopplerProtocol::NearestTrue;
      } else if (val == "dominant") {
        cfg.protocol = DopplerProtocol::Dominant;
      } else if (val == "any_peak") {
        cfg.protocol = DopplerProtocol::AnyPeak;
      } else {
        throw key_error(key, "expected nearest_true, dominant or any_peak");
      }
    } else if (key == "require_representative") {
      cfg.require_representative = to_bool(key, val);
    } else if (key == "analytic") {
      cfg.analytic = to_bool(key, val);
    } else if (key == "cfar_window") {
      if (val == "taylor") {
        cfg.cfar.window = WindowKind::Taylor;
      } else if (val == "rectangular") {
        cfg.cfar.window = WindowKind::Rectangular;
      } else {
        throw key_error(key, "expected taylor or rectangular");
      }
    } else if (key == "cfar_nbar") {
      cfg.cfar.nbar = to_int<int>(key, val);
    } else if (key == "cfar_sll_db") {
      cfg.cfar.sll_db = to_double(key, val);
    } else if (key == "cfar_n_ref") {
      cfg.cfar.n_ref = to_int<int>(key, val);
    } else if (key == "cfar_guard") {
      cfg.cfar.guard = to_int<int>(key, val);
    } else if (key == "fit_pair") {
      const auto parts = split(val, ',');
      if (parts.size() != 2) throw key_error(key, "expected n, K");
      pairs.emplace_back(to_int<int>(key, parts[0]), to_int<int>(key, parts[1]));
    } else if (key == "load_orders") {
      cfg.load_orders.clear();
      for (const auto& p : split(val, ',')) cfg.load_orders.push_back(to_int<int>(key, p));
    } else if (key == "load_sizes") {
      cfg.load_sizes.clear();
      for (const auto& p : split(val, ',')) cfg.load_sizes.push_back(to_int<int>(key, p));
    } else if (key == "load_m") {
      cfg.load_m = to_int<int>(key, val);
    } else if (key == "load_gamma") {
      cfg.load_gamma = to_double(key, val);
    } else if (key == "fa_setting") {
      const auto parts = split(val, ',');
      if (parts.size() != 3) throw key_error(key, "expected F_cp, sigma_c, cnr_db");
      fa.push_back(FaSetting{to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])});
    } else if (key == "rodi") {
      const auto parts = split(val, ',');
      if (parts.size() != 2) throw key_error(key, "expected first_bin, last_bin");
      rodi.emplace_back(to_int<int>(key, parts[0]), to_int<int>(key, parts[1]));
    } else {
      throw key_error(key, "unknown key");
    }
  }

  if (have_clutter) sc.clutter = clutter;
  if (!fa.empty()) cfg.fa_settings = fa;
  if (!rodi.empty()) cfg.rodi_regions = rodi;
  if (!pairs.empty()) cfg.fit_pairs = pairs;
  if (!cfg.explicit_k) sc.ddl_training = cfg.k_factor * sc.ddl_order;
  if (!have_kt) sc.td_training = 5 * sc.pulses;
  if (!have_sweep) {
    switch (cfg.experiment) {
      case Experiment::PdVsF:
      case Experiment::RodiCompare: cfg.sweep = {sc.target_freq}; break;
      case Experiment::PdVsN: cfg.sweep = {static_cast<double>(sc.ddl_order)}; break;
      case Experiment::PdVsSdr: cfg.sweep = {sc.input_sdr_db()}; break;
      case Experiment::Thresholds: cfg.sweep = {sc.pfa}; break;
      default: break;
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind("config key", 0) == 0) throw;
    throw std::invalid_argument("config: " + msg);
  }
  return cfg;
}

/// Canonical text form; parse_config(serialize(c)) reproduces c.
inline std::string serialize(const ExperimentConfig& cfg) {
  using detail::fmt;
  const Scenario& sc = cfg.scenario;
  std::ostringstream os;
  os << "experiment = " << experiment_name(cfg.experiment) << "\n";
  os << "N = " << sc.pulses << "\n";
  os << "M = " << sc.range_cells << "\n";
  os << "n = " << sc.ddl_order << "\n";
  if (cfg.explicit_k) os << "K = " << sc.ddl_training << "\n";
  os << "K_T = " << sc.td_training << "\n";
  os << "k_factor = " << cfg.k_factor << "\n";
  os << "cnr_db = " << fmt(sc.cnr_db) << "\n";
  os << "snr_db = " << fmt(sc.snr_db) << "\n";
  os << "pfa = " << fmt(sc.pfa) << "\n";
  os << "F = " << fmt(sc.target_freq) << "\n";
  os << "doppler = "
     << (cfg.modes.size() == 2 ? "both" : cfg.modes.front() == DopplerMode::Known ? "known" : "unknown") << "\n";
  os << "q = " << sc.fft_factor << "\n";
  os << "cut = " << sc.target_range_cell << "\n";
  for (const auto& c : sc.clutter) {
    os << "clutter = " << fmt(c.center_freq) << ", " << fmt(c.spread) << ", " << fmt(c.power_fraction) << "\n";
  }
  os << "sweep = ";
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) os << (i ? ", " : "") << fmt(cfg.sweep[i]);
  os << "\n";
  os << "trials = " << cfg.trials << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  os << "detectors = ";
  for (std::size_t i = 0; i < cfg.detectors.size(); ++i) os << (i ? ", " : "") << detector_name(cfg.detectors[i]);
  os << "\n";
  os << "protocol = " << protocol_name(cfg.protocol) << "\n";
  os << "require_representative = " << (cfg.require_representative ? "true" : "false") << "\n";
  os << "analytic = " << (cfg.analytic ? "true" : "false") << "\n";
  os << "cfar_window = " << (cfg.cfar.window == WindowKind::Taylor ? "taylor" : "rectangular") << "\n";
  os << "cfar_nbar = " << cfg.cfar.nbar << "\n";
  os << "cfar_sll_db = " << fmt(cfg.cfar.sll_db) << "\n";
  os << "cfar_n_ref = " << cfg.cfar.n_ref << "\n";
  os << "cfar_guard = " << cfg.cfar.guard << "\n";
  for (const auto& [n, k] : cfg.fit_pairs) os << "fit_pair = " << n << ", " << k << "\n";
  os << "load_orders = ";
  for (std::size_t i = 0; i < cfg.load_orders.size(); ++i) os << (i ? ", " : "") << cfg.load_orders[i];
  os << "\nload_sizes = ";
  for (std::size_t i = 0; i < cfg.load_sizes.size(); ++i) os << (i ? ", " : "") << cfg.load_sizes[i];
  os << "\nload_m = " << cfg.load_m << "\n";
  os << "load_gamma = " << fmt(cfg.load_gamma) << "\n";
  for (const auto& f : cfg.fa_settings) {
    os << "fa_setting = " << fmt(f.center_freq) << ", " << fmt(f.spread) << ", " << fmt(f.cnr_db) << "\n";
  }
  for (const auto& [a, b] : cfg.rodi_regions) os << "rodi = " << a << ", " << b << "\n";
  return os.str();
}

}  // namespace ddl_radar
