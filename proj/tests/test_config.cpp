#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddl_radar/experiments.hpp"

using namespace ddl_radar;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, Defaults) {
  const ExperimentConfig c = parse_config("experiment = pd_vs_f\n");
  EXPECT_EQ(c.experiment, Experiment::PdVsF);
  EXPECT_EQ(c.scenario.pulses, 64);
  EXPECT_EQ(c.scenario.ddl_order, 4);
  EXPECT_EQ(c.scenario.ddl_training, 20);
  EXPECT_EQ(c.scenario.td_training, 320);
  EXPECT_EQ(c.trials, 2000);
  EXPECT_EQ(c.seed, 1u);
  ASSERT_EQ(c.sweep.size(), 1u);
  EXPECT_DOUBLE_EQ(c.sweep[0], 0.25);
  EXPECT_EQ(c.stem(), "pd_vs_f");
}

TEST(Config, DerivedTrainingSizes) {
  const ExperimentConfig c = parse_config("N = 32\nn = 5\nk_factor = 3\n");
  EXPECT_EQ(c.scenario.ddl_training, 15);
  EXPECT_EQ(c.scenario.td_training, 160);
  const ExperimentConfig d = parse_config("experiment = pd_vs_n\nsweep = 2:1:5\nK = 40\n");
  EXPECT_EQ(d.k_for(3), 15);
  EXPECT_EQ(d.sweep, (std::vector<double>{2, 3, 4, 5}));
}

TEST(Config, RangeSweepSnapsToDecimal) {
  const ExperimentConfig c = parse_config("sweep = -0.45:0.05:0.45\n");
  ASSERT_EQ(c.sweep.size(), 19u);
  EXPECT_EQ(c.sweep[3], -0.3);
  EXPECT_EQ(c.sweep[9], 0.0);
  EXPECT_EQ(c.sweep.back(), 0.45);
}

TEST(Config, RejectsOutOfBandDoppler) {
  EXPECT_NE(error_of("F = 0.5\n").find("'F'"), std::string::npos);
  EXPECT_NE(error_of("F = -0.7\n").find("'F'"), std::string::npos);
  EXPECT_NE(error_of("sweep = 0.1, 0.5\n").find("sweep"), std::string::npos);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(error_of("trials = ten\n").find("'trials'"), std::string::npos);
  EXPECT_NE(error_of("bogus = 1\n").find("'bogus'"), std::string::npos);
  EXPECT_NE(error_of("clutter = 0.1\n").find("'clutter'"), std::string::npos);
  EXPECT_NE(error_of("clutter = 0.1, -1\n").find("'clutter'"), std::string::npos);
  EXPECT_NE(error_of("doppler = maybe\n").find("'doppler'"), std::string::npos);
  EXPECT_NE(error_of("experiment = nope\n").find("'experiment'"), std::string::npos);
  EXPECT_NE(error_of("output = a/b\n").find("'output'"), std::string::npos);
  EXPECT_NE(error_of("no equals sign\n").find("line 1"), std::string::npos);
  EXPECT_FALSE(error_of("n = 1\n").empty());
  EXPECT_FALSE(error_of("K = 4\n").empty());
  EXPECT_FALSE(error_of("trials = 10\n").empty());
}

TEST(Config, CommentsAndWhitespace) {
  const ExperimentConfig c = parse_config("# header\n\n  seed = 42   # trailing\n\tN=32\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.scenario.pulses, 32);
}

TEST(Config, SerializeRoundTrip) {
  const std::string text =
      "experiment = pd_vs_n\nN = 32\nM = 7\ncut = 3\nsweep = 2,3,4,6\nk_factor = 4\ncnr_db = 45.5\nsnr_db = -3\n"
      "pfa = 1e-5\nF = -0.1875\ndoppler = both\nprotocol = any_peak\nclutter = 0.1, 0.01, 0.7\n"
      "clutter = -0.2, 0.02, 0.3\ndetectors = ddl_amf, ddl_glr, ca_cfar\ncfar_window = rectangular\n"
      "cfar_n_ref = 4\ntrials = 500\nseed = 18446744073709551615\noutput = custom\nrequire_representative = true\n";
  const ExperimentConfig c = parse_config(text);
  const std::string s = serialize(c);
  EXPECT_EQ(serialize(parse_config(s)), s);
  const ExperimentConfig d = parse_config(s);
  EXPECT_EQ(d.seed, 18446744073709551615ULL);
  EXPECT_EQ(d.scenario.clutter.size(), 2u);
  EXPECT_DOUBLE_EQ(d.scenario.clutter[0].power_fraction, 0.7);
  EXPECT_EQ(d.modes.size(), 2u);
  EXPECT_EQ(d.stem(), "custom");
  EXPECT_TRUE(d.require_representative);
}

TEST(Experiments, ThresholdsCsv) {
  const ExperimentConfig c = parse_config("experiment = thresholds\nn = 4\nK = 20\nsweep = 1e-9\n");
  const std::string csv = run_experiment_csv(c);
  EXPECT_NE(csv.find("n,K,pfa,alpha_glr,lambda_glr,alpha_amf,lambda_amf\n4,20,1e-09,"), std::string::npos);
  EXPECT_NE(csv.find("3.026837162"), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Experiments, LoadGainCsv) {
  const std::string csv = load_gain_csv({4, 5, 6}, {64, 128, 256}, 8000, 90.0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,N,cl_td,cl_ddl,gain_exact,gain_floor");
  std::vector<std::string> floors;
  while (std::getline(in, line)) floors.push_back(line.substr(line.rfind(',') + 1));
  EXPECT_EQ(floors, (std::vector<std::string>{"31", "71", "147", "22", "59", "132", "16", "47", "116"}));
}

TEST(Experiments, CurveCsvByteDeterministic) {
  const std::string text =
      "experiment = pd_vs_f\nN = 16\nM = 5\ncut = 3\nn = 4\nK = 20\npfa = 1e-2\nsnr_db = 0\ncnr_db = 30\n"
      "sweep = 0.2, 0.3\ntrials = 200\nseed = 9\ndoppler = both\ndetectors = ddl_amf, ddl_glr, optimum\n";
  const ExperimentConfig c = parse_config(text);
  const std::string a = run_experiment_csv(c);
  EXPECT_EQ(a, run_experiment_csv(parse_config(text)));
  EXPECT_NE(a.find("# seed: 9"), std::string::npos);
  EXPECT_NE(a.find("abscissa,detector,p_d,ci_halfwidth\n"), std::string::npos);
  EXPECT_NE(a.find("ddl_amf_unknown"), std::string::npos);
  EXPECT_NE(a.find("optimum_analytic"), std::string::npos);
  ExperimentConfig other = c;
  other.seed = 10;
  EXPECT_NE(a, run_experiment_csv(other));

  const auto dir = std::filesystem::temp_directory_path() / "ddl_radar_cfg_test";
  const auto path = run_experiment(c, dir);
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  EXPECT_EQ(os.str(), a);
  std::filesystem::remove_all(dir);
}

TEST(Experiments, FaValidateCsvShape) {
  const ExperimentConfig c =
      parse_config("experiment = fa_validate\nN = 16\npfa = 0.05\ntrials = 2000\nfa_setting = 0, 0.01, 30\n");
  const std::string csv = run_experiment_csv(c);
  EXPECT_NE(csv.find("setting,f_cp,sigma_c,cnr_db,detector,pfa_target,pfa_empirical,sigma_binomial,z_score\n"),
            std::string::npos);
  EXPECT_NE(csv.find("\n1,0,0.01,30,ddl_amf,0.05,"), std::string::npos);
  EXPECT_NE(csv.find("\n1,0,0.01,30,ddl_glr,0.05,"), std::string::npos);
}
