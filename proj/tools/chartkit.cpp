// chartkit command-line driver: run, suite, bench, scene.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chartkit/bench.hpp"
#include "chartkit/experiment.hpp"
#include "chartkit/scene.hpp"

namespace ck = chartkit;

namespace {

struct Overrides {
  std::string config;
  std::string model;
  double snr = 0.0;
  std::string theta;
  std::string rho;
  std::size_t n_ue = 0;
  std::size_t n_sub = 0;
  std::uint64_t seed = 0;
  std::size_t k_max = 0;
  std::size_t repeats = 0;
  unsigned threads = 0;
  std::string out;
  bool bench = false;
  bool dump_spectra = false;
};

struct Options {
  CLI::Option* model = nullptr;
  CLI::Option* snr = nullptr;
  CLI::Option* theta = nullptr;
  CLI::Option* rho = nullptr;
  CLI::Option* n_ue = nullptr;
  CLI::Option* n_sub = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* k_max = nullptr;
  CLI::Option* repeats = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* out = nullptr;
};

Options add_common(CLI::App* app, Overrides& o, bool estimator_flags) {
  Options opt;
  app->add_option("--config", o.config, "JSON config file (a run manifest also works)");
  opt.model = app->add_option("--model", o.model, "channel model: los, qlos or qnlos");
  opt.snr = app->add_option("--snr", o.snr, "SNR in dB");
  if (estimator_flags) {
    opt.theta = app->add_option("--theta", o.theta, "angle estimator: music, bartlett, mvdr, minnorm");
    opt.rho = app->add_option("--rho", o.rho, "range estimator: isq, lr, music, bartlett");
  }
  opt.n_ue = app->add_option("--n-ue", o.n_ue, "number of UEs");
  opt.n_sub = app->add_option("--n-sub", o.n_sub, "number of subcarriers");
  opt.seed = app->add_option("--seed", o.seed, "master seed");
  opt.k_max = app->add_option("--k-max", o.k_max, "largest neighborhood size K");
  opt.repeats = app->add_option("--repeats", o.repeats, "timed repeats per pipeline");
  opt.threads = app->add_option("--threads", o.threads, "worker threads for untimed stages (0 = all cores)");
  opt.out = app->add_option("--out", o.out, "output directory");
  return opt;
}

void apply(const Overrides& o, const Options& opt, ck::ExperimentConfig& cfg) {
  if (*opt.model) cfg.channel.model = ck::parse_channel_model(o.model);
  if (*opt.snr) cfg.channel.snr_db = o.snr;
  if (opt.theta != nullptr && *opt.theta) cfg.estimator.theta = ck::parse_theta_algo(o.theta);
  if (opt.rho != nullptr && *opt.rho) cfg.estimator.rho = ck::parse_rho_algo(o.rho);
  if (*opt.n_ue) cfg.scene.n_ue = o.n_ue;
  if (*opt.n_sub) cfg.channel.n_sub = o.n_sub;
  if (*opt.seed) cfg.seed = o.seed;
  if (*opt.k_max) cfg.k_max = o.k_max;
  if (*opt.repeats) cfg.repeats = o.repeats;
  if (*opt.threads) cfg.threads = o.threads;
  if (*opt.out) cfg.output_dir = o.out;
  if (o.bench) cfg.bench = true;
  if (o.dump_spectra) cfg.dump_spectra = true;
  // A UE count below the VIP count shrinks the glyph with it.
  if (*opt.n_ue && cfg.scene.n_vip > cfg.scene.n_ue) cfg.scene.n_vip = cfg.scene.n_ue;
  ck::resolve_seeds(cfg);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ck::ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ck::ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chartkit: channel charting from simulated CSI"};
  app.set_version_flag("--version", std::string(ck::toolkit_version()));
  app.require_subcommand(1);

  Overrides run_o;
  CLI::App* run = app.add_subcommand("run", "simulate, estimate, chart and score one estimator pair");
  const Options run_opt = add_common(run, run_o, true);
  run->add_flag("--bench", run_o.bench, "also time the estimation stage");
  run->add_flag("--dump-spectra", run_o.dump_spectra, "write per-UE spectra under <out>/spectra");

  Overrides suite_o;
  std::size_t magnitude_n_sub = 0;
  CLI::App* suite = app.add_subcommand("suite", "TW/CT table over estimator pairs and channel models");
  const Options suite_opt = add_common(suite, suite_o, false);
  suite->add_flag("--bench", suite_o.bench, "also time every cell");
  CLI::Option* mag_opt =
      suite->add_option("--magnitude-n-sub", magnitude_n_sub, "subcarriers for ISQ/LR cells (default 1)");

  Overrides bench_o;
  CLI::App* bench = app.add_subcommand("bench", "runtime table over estimator pairs and channel models");
  const Options bench_opt = add_common(bench, bench_o, false);

  std::size_t scene_n_ue = 2048;
  std::uint64_t scene_seed = 1;
  std::string scene_out = "scene.csv";
  CLI::App* scene = app.add_subcommand("scene", "write the UE layout as CSV");
  scene->add_option("--n-ue", scene_n_ue, "number of UEs");
  scene->add_option("--seed", scene_seed, "master seed");
  scene->add_option("--out", scene_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ck::ExperimentConfig cfg = run_o.config.empty() ? ck::ExperimentConfig{} : ck::load_config(run_o.config);
      apply(run_o, run_opt, cfg);
      ck::run_experiment(cfg, &std::cerr);
      return 0;
    }

    if (*suite) {
      ck::SuiteConfig sc = suite_o.config.empty() ? ck::SuiteConfig{}
                                                  : ck::suite_from_json(read_text(suite_o.config));
      apply(suite_o, suite_opt, sc.base);
      if (*mag_opt) sc.magnitude_n_sub = magnitude_n_sub;
      const ck::SuiteResult res = ck::run_suite(sc, &std::cerr);
      const std::filesystem::path dir(sc.base.output_dir);
      std::filesystem::create_directories(dir);
      std::ostringstream js;
      ck::write_suite_json(res, js);
      write_text(dir / "suite.json", js.str());
      std::ostringstream table;
      ck::write_suite_table(res, table);
      write_text(dir / "suite.txt", table.str());
      std::cerr << table.str();
      return res.complete() ? 0 : 1;
    }

    if (*bench) {
      ck::ExperimentConfig cfg = bench_o.config.empty() ? ck::ExperimentConfig{} : ck::load_config(bench_o.config);
      apply(bench_o, bench_opt, cfg);
      cfg.scene.validate();
      const std::filesystem::path dir(cfg.output_dir);
      std::filesystem::create_directories(dir);
      const ck::ThetaAlgo thetas[] = {ck::ThetaAlgo::Bartlett, ck::ThetaAlgo::Mvdr, ck::ThetaAlgo::MinNorm};
      const ck::RhoAlgo rhos[] = {ck::RhoAlgo::Lr, ck::RhoAlgo::Isq, ck::RhoAlgo::Music};
      std::vector<ck::TimingRecord> records;
      const ck::ChannelModel models[] = {ck::ChannelModel::Los, ck::ChannelModel::Qlos, ck::ChannelModel::Qnlos};
      for (ck::ChannelModel m : models) {
        if (*bench_opt.model && m != ck::parse_channel_model(bench_o.model)) continue;
        ck::ChannelParams ch = cfg.channel;
        ch.model = m;
        std::cerr << "bench " << ck::to_string(m) << ": generating " << cfg.scene.n_ue << " UEs\n";
        const ck::Dataset data = ck::generate_dataset(cfg.scene, ch, cfg.threads);
        const ck::Dataset* ptr = &data;
        auto part = ck::benchmark_matrix(thetas, rhos, std::span<const ck::Dataset* const>(&ptr, 1),
                                         cfg.estimator, cfg.repeats);
        records.insert(records.end(), part.begin(), part.end());
      }
      std::ostringstream js;
      ck::write_timing_json(records, js);
      write_text(dir / "runtime.json", js.str());
      std::ostringstream table;
      ck::write_timing_table(records, table);
      write_text(dir / "runtime.txt", table.str());
      std::cerr << table.str();
      return 0;
    }

    if (*scene) {
      ck::SceneConfig sc;
      sc.n_ue = scene_n_ue;
      sc.rng_seed = scene_seed;
      if (sc.n_vip > sc.n_ue) sc.n_vip = sc.n_ue;
      std::ostringstream os;
      ck::write_scene_csv(ck::generate_scene(sc), os);
      write_text(scene_out, os.str());
      return 0;
    }
  } catch (const ck::ConfigError& e) {
    std::fprintf(stderr, "chartkit: configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "chartkit: %s\n", e.what());
    return 1;
  }
  return 0;
}
